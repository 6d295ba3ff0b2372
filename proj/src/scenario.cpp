#include "aerosol/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "aerosol/parallel.hpp"
#include "aerosol/validation.hpp"

namespace aerosol {

namespace {

AxisSpec load_axis(const Config& cfg, const std::string& key) {
  AxisSpec ax;
  ax.length = cfg.get_double(key + ".length");
  ax.diffusivity = cfg.get_double(key + ".diffusivity");
  ax.deposition_lo = cfg.get_double(key + ".deposition_lo");
  ax.deposition_hi = cfg.get_double(key + ".deposition_hi");
  ax.validate(key.c_str());
  return ax;
}

int axis_index(const std::string& name) {
  if (name == "x") return 0;
  if (name == "y") return 1;
  if (name == "z") return 2;
  throw ValidationError("config: axis must be one of x, y, z (got '" + name + "')");
}

struct Csv {
  explicit Csv(const std::string& path) : f(path, std::ios::binary) {
    if (!f) throw ValidationError("cannot open output file '" + path + "'");
  }
  void comment(const std::string& k, const std::string& v) { f << "# " << k << ": " << v << "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) f << (i ? "," : "") << cells[i];
    f << "\n";
  }
  std::ofstream f;
};

void standard_header(Csv& csv, const Scenario& s, const std::string& command) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(s.config.hash()));
  csv.comment("aerosol", command);
  csv.comment("config-hash", hash);
  csv.comment("solver.modes", std::to_string(s.modes));
  csv.comment("solver.tol", format_double(s.solver_tol));
  csv.comment("quadrature.abs_tol", format_double(s.quadrature.abs_tol));
  csv.comment("quadrature.gauss_nodes", std::to_string(s.quadrature.gauss_nodes));
  csv.comment("units", "SI; concentrations normalized by Q");
}

std::string out_path(const RunOptions& opt, const std::string& name) {
  std::filesystem::create_directories(opt.out_dir);
  return (std::filesystem::path(opt.out_dir) / name).string();
}

Eigen::ArrayXd line_points(const AxisSpec& ax, int count) {
  return Eigen::ArrayXd::LinSpaced(count, 0.0, ax.length);
}

double probe_coord(const Config& cfg, int axis) {
  const char* keys[3] = {"probe.x", "probe.y", "probe.z"};
  return cfg.get_double(keys[axis]);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Scenario load_scenario(const Config& cfg) {
  Scenario s;
  s.config = cfg;
  s.room.x = load_axis(cfg, "room.x");
  s.room.y = load_axis(cfg, "room.y");
  s.room.z = load_axis(cfg, "room.z");
  s.modes = cfg.get_int("solver.modes", 200);
  if (s.modes < 1) throw ValidationError("config.solver.modes: must be >= 1");
  s.solver_tol = cfg.get_double("solver.tol", 1e-12);
  s.quadrature.abs_tol = cfg.get_double("quadrature.abs_tol", 1e-10);
  s.quadrature.gauss_nodes = cfg.get_int("quadrature.gauss_nodes", 32);

  std::string type = cfg.get_string("source.type");
  if (type == "point") {
    PointSource p;
    auto pos = cfg.get_list("source.position");
    if (pos.size() != 3) throw ValidationError("config.source.position: expected three numbers");
    p.position = {pos[0], pos[1], pos[2]};
    p.strength = cfg.get_double("source.strength", 1.0);
    p.release_time = cfg.get_double("source.release_time", 0.0);
    p.validate(s.room);
    s.source = p;
  } else if (type == "exhalation") {
    ExhalationSource e;
    e.plane_x = cfg.get_double("source.plane_x");
    e.center_y = cfg.get_double("source.center_y");
    e.center_z = cfg.get_double("source.center_z");
    e.radius = cfg.get_double("source.radius");
    e.strength_rate = cfg.get_double("source.strength", 1.0);
    e.start = cfg.get_double("source.start", 0.0);
    e.end = cfg.get_double("source.end");
    e.validate(s.room);
    s.source = e;
  } else {
    throw ValidationError("config.source.type: must be 'point' or 'exhalation'");
  }
  return s;
}

SamplerSpec load_sampler(const Config& cfg, const Room& room, double sample_end) {
  SamplerSpec sp;
  auto c = cfg.get_list("sampler.center");
  auto e = cfg.get_list("sampler.edges");
  if (c.size() != 3) throw ValidationError("config.sampler.center: expected three numbers");
  if (e.size() != 3) throw ValidationError("config.sampler.edges: expected three numbers");
  sp.center = {c[0], c[1], c[2]};
  sp.edges = {e[0], e[1], e[2]};
  sp.sampling_time = cfg.get_double("sampler.interval");
  sp.sample_end = sample_end;
  sp.validate(room);
  return sp;
}

DetectorSpec load_detector(const Config& cfg, double gamma_linear, double q_p) {
  DetectorSpec d;
  d.gamma_ratio = gamma_linear;
  d.q_p = q_p;
  if (cfg.has("detector.eta")) d.eta = cfg.get_double("detector.eta");
  if (cfg.has("detector.gamma")) d.gamma = cfg.get_double("detector.gamma");
  if (cfg.has("detector.sigma2")) d.sigma2 = cfg.get_double("detector.sigma2");
  d.validate();
  return d;
}

std::vector<std::string> run_spectrum(const Scenario& s, const RunOptions& opt) {
  std::vector<std::string> files;
  double pos[3];
  if (s.has_point()) {
    for (int i = 0; i < 3; ++i) pos[i] = s.point().position[i];
  } else {
    pos[0] = s.exhalation().plane_x;
    pos[1] = s.exhalation().center_y;
    pos[2] = s.exhalation().center_z;
  }
  const char* names[3] = {"x", "y", "z"};
  for (int a = 0; a < 3; ++a) {
    EigenSpectrum spec = solve_spectrum(s.room.axis(a), s.modes, {s.solver_tol});
    AxisCoeffs c = point_source_coeffs(spec, pos[a], 1.0);
    std::string path = out_path(opt, "spectrum_" + std::string(names[a]) + ".csv");
    Csv csv(path);
    standard_header(csv, s, "spectrum");
    csv.comment("axis", names[a]);
    csv.comment("zero_mode", spec.zero_mode ? "true" : "false");
    csv.comment("negative_root",
                spec.negative_root ? format_double(*spec.negative_root) : "none");
    csv.row({"n", "lambda", "weight"});
    for (int n = 0; n < spec.count(); ++n)
      csv.row({std::to_string(n + 1), format_double(spec.lambdas[n]), format_double(c.pos[n])});
    files.push_back(path);
  }
  return files;
}

std::vector<std::string> run_point(const Scenario& s, const RunOptions& opt) {
  if (!s.has_point()) throw ValidationError("point: config must define source.type = point");
  auto times = s.config.get_list("eval.times");
  if (times.empty()) throw ValidationError("config.eval.times: empty grid");
  int count = s.config.get_int("line.count", 50);
  if (count < 2) throw ValidationError("config.line.count: must be >= 2");
  std::vector<std::string> files;

  if (s.config.has("point.axis")) {
    // single-axis factor C_nu / Q_nu
    int a = axis_index(s.config.get_string("point.axis"));
    EigenSpectrum spec = solve_spectrum(s.room.axis(a), s.modes, {s.solver_tol});
    AxisCoeffs c = point_source_coeffs(spec, s.point().position[a], 1.0);
    Eigen::ArrayXd xs = line_points(s.room.axis(a), count);
    std::string path = out_path(opt, "point_axis_" + s.config.get_string("point.axis") + ".csv");
    Csv csv(path);
    standard_header(csv, s, "point");
    std::vector<std::string> head{"position"};
    for (double t : times) head.push_back("C_t" + format_double(t));
    csv.row(head);
    std::vector<Eigen::ArrayXd> profiles;
    for (double t : times) {
      double el = t - s.point().release_time;
      if (el <= 0.0) throw ValidationError("config.eval.times: must be after the release time");
      profiles.push_back(profile(c, xs, el));
    }
    for (int i = 0; i < count; ++i) {
      std::vector<std::string> row{format_double(xs[i])};
      for (const auto& p : profiles) row.push_back(format_double(p[i]));
      csv.row(row);
    }
    files.push_back(path);
    return files;
  }

  PointSourceField field(s.room, s.point(), s.modes, {s.solver_tol});
  auto axes = s.config.get_words("line.axes");
  if (axes.empty()) throw ValidationError("config.line.axes: required for 3-D line sweeps");
  for (const auto& axname : axes) {
    int a = axis_index(axname);
    Eigen::ArrayXd xs = line_points(s.room.axis(a), count);
    std::string path = out_path(opt, "point_line_" + axname + ".csv");
    Csv csv(path);
    standard_header(csv, s, "point");
    std::vector<std::string> head{axname};
    for (double t : times) head.push_back("C_t" + format_double(t));
    csv.row(head);
    for (int i = 0; i < count; ++i) {
      double p[3] = {probe_coord(s.config, 0), probe_coord(s.config, 1),
                     probe_coord(s.config, 2)};
      p[a] = xs[i];
      std::vector<std::string> row{format_double(xs[i])};
      for (double t : times) row.push_back(format_double(field(p[0], p[1], p[2], t)));
      csv.row(row);
    }
    files.push_back(path);
  }
  return files;
}

std::vector<std::string> run_breath(const Scenario& s, const RunOptions& opt) {
  if (s.has_point()) throw ValidationError("breath: config must define source.type = exhalation");
  auto times = s.config.get_list("eval.times");
  int count = s.config.get_int("line.count", 50);
  auto axes = s.config.get_words("line.axes");
  if (axes.empty()) throw ValidationError("config.line.axes: required");
  ExhalationField field(s.room, s.exhalation(), s.modes, {s.solver_tol}, s.quadrature);
  const char* tag = opt.circular ? "circular"
                    : opt.surrogate == PlanarSurrogate::lower_square      ? "lower"
                    : opt.surrogate == PlanarSurrogate::equal_area_square ? "equal"
                                                                          : "upper";
  std::vector<std::string> files;
  for (const auto& axname : axes) {
    int a = axis_index(axname);
    Eigen::ArrayXd xs = line_points(s.room.axis(a), count);
    std::string path = out_path(opt, "breath_" + axname + "_" + tag + ".csv");
    Csv csv(path);
    standard_header(csv, s, "breath");
    csv.comment("surrogate", tag);
    std::vector<std::string> head{axname};
    for (double t : times) head.push_back("C_t" + format_double(t));
    csv.row(head);
    std::vector<std::vector<double>> vals(count, std::vector<double>(times.size()));
    parallel_for(0, count, opt.threads, [&](int i) {
      double p[3] = {probe_coord(s.config, 0), probe_coord(s.config, 1),
                     probe_coord(s.config, 2)};
      p[a] = xs[i];
      for (size_t j = 0; j < times.size(); ++j)
        vals[i][j] = opt.circular
                         ? field.circular(p[0], p[1], p[2], times[j])
                         : field.square(opt.surrogate, p[0], p[1], p[2], times[j]);
    });
    for (int i = 0; i < count; ++i) {
      std::vector<std::string> row{format_double(xs[i])};
      for (double v : vals[i]) row.push_back(format_double(v));
      csv.row(row);
    }
    files.push_back(path);
  }
  return files;
}

std::vector<std::string> run_sample(const Scenario& s, const RunOptions& opt) {
  if (s.has_point()) throw ValidationError("sample: config must define source.type = exhalation");
  auto times = s.config.get_list("eval.times");
  std::vector<double> centers =
      s.config.has("sweep.centers_x") ? s.config.get_list("sweep.centers_x")
                                      : std::vector<double>{};
  std::string path = out_path(opt, "sample.csv");
  Csv csv(path);
  standard_header(csv, s, "sample");
  if (centers.empty()) {
    csv.row({"t", "c_samp"});
    for (double t : times) {
      SamplerSpec sp = load_sampler(s.config, s.room, t);
      double c = sampled_concentration(s.room, s.exhalation(), sp, opt.surrogate, s.modes,
                                       s.quadrature);
      csv.row({format_double(t), format_double(c)});
    }
  } else {
    csv.row({"x_d", "t", "c_samp"});
    for (double xd : centers)
      for (double t : times) {
        SamplerSpec sp = load_sampler(s.config, s.room, t);
        sp.center[0] = xd;
        sp.validate(s.room);
        double c = sampled_concentration(s.room, s.exhalation(), sp, opt.surrogate, s.modes,
                                         s.quadrature);
        csv.row({format_double(xd), format_double(t), format_double(c)});
      }
  }
  return {path};
}

std::vector<std::string> run_pmd(const Scenario& s, const RunOptions& opt) {
  if (s.has_point()) throw ValidationError("pmd: config must define source.type = exhalation");
  double q_p = s.config.get_double("detector.q_p");
  std::vector<double> gammas_db;
  if (s.config.has("detector.gamma_db")) {
    gammas_db = s.config.get_list("detector.gamma_db");
  } else {
    for (double g : s.config.get_list("detector.gamma_linear"))
      gammas_db.push_back(10.0 * std::log10(g));
  }

  std::vector<std::string> files;
  if (s.config.has("sweep.centers_x")) {
    // location sweep at the first configured Gamma
    auto centers = s.config.get_list("sweep.centers_x");
    double t = s.config.get_list("pmd.times").at(0);
    double g_lin = db_to_linear(gammas_db.at(0));
    DetectorSpec det = load_detector(s.config, g_lin, q_p);
    std::string path = out_path(opt, "pmd_sweep.csv");
    Csv csv(path);
    standard_header(csv, s, "pmd");
    csv.comment("gamma_db", format_double(gammas_db.at(0)));
    csv.comment("detection_time", format_double(t));
    csv.row({"x_d", "c_samp", "p_md"});
    std::vector<std::array<double, 2>> rows(centers.size());
    parallel_for(0, static_cast<int>(centers.size()), opt.threads, [&](int i) {
      SamplerSpec sp = load_sampler(s.config, s.room, t);
      sp.center[0] = centers[i];
      sp.validate(s.room);
      double c = sampled_concentration(s.room, s.exhalation(), sp, opt.surrogate, s.modes,
                                       s.quadrature);
      // q_p rescales the per-unit-strength c_samp to detector-statistic
      // units; series ringing clamps at zero
      double unit = std::max(0.0, c) / s.exhalation().strength_rate;
      double pmd = miss_detection_probability(det, unit * q_p);
      rows[i] = {c, pmd};
    });
    for (size_t i = 0; i < centers.size(); ++i)
      csv.row({format_double(centers[i]), format_double(rows[i][0]), format_double(rows[i][1])});
    files.push_back(path);
    return files;
  }

  auto times = s.config.get_list("pmd.times");
  std::string path = out_path(opt, "pmd_gamma.csv");
  Csv csv(path);
  standard_header(csv, s, "pmd");
  std::vector<std::string> head{"gamma_db"};
  for (double t : times) head.push_back("p_md_t" + format_double(t));
  csv.row(head);
  std::vector<double> csamp(times.size());
  parallel_for(0, static_cast<int>(times.size()), opt.threads, [&](int i) {
    SamplerSpec sp = load_sampler(s.config, s.room, times[i]);
    csamp[i] = sampled_concentration(s.room, s.exhalation(), sp, opt.surrogate, s.modes,
                                     s.quadrature);
  });
  for (double gdb : gammas_db) {
    DetectorSpec det = load_detector(s.config, db_to_linear(gdb), q_p);
    std::vector<std::string> row{format_double(gdb)};
    for (size_t i = 0; i < times.size(); ++i) {
      double unit = std::max(0.0, csamp[i]) / s.exhalation().strength_rate;
      row.push_back(format_double(miss_detection_probability(det, unit * q_p)));
    }
    csv.row(row);
  }
  return {path};
}

TruncationStudy truncation_study(const AxisSpec& axis, double nu_p, const std::vector<int>& counts,
                                 int reference, const std::vector<double>& times,
                                 int line_points_n) {
  if (counts.empty() || times.empty())
    throw ValidationError("truncation: counts and times must be non-empty");
  int max_count = *std::max_element(counts.begin(), counts.end());
  if (reference <= max_count)
    throw ValidationError("truncation: reference count must exceed every requested count");
  EigenSpectrum spec = solve_spectrum(axis, reference, {});
  AxisCoeffs c = point_source_coeffs(spec, nu_p, 1.0);
  Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(line_points_n, 0.0, axis.length);

  TruncationStudy study;
  study.counts = counts;
  study.times = times;
  study.err.assign(counts.size(), std::vector<double>(times.size()));
  for (size_t j = 0; j < times.size(); ++j) {
    Eigen::ArrayXd ref = profile(c, xs, times[j]);
    double peak = ref.abs().maxCoeff();
    for (size_t i = 0; i < counts.size(); ++i) {
      // truncated sum: same spectrum and weights, first N positive modes
      // (plus the hyperbolic/steady parts, which truncation does not touch)
      EigenSpectrum sub = spec;
      sub.lambdas = spec.lambdas.head(counts[i]).eval();
      AxisCoeffs cc = c;
      cc.spectrum = &sub;
      cc.pos = c.pos.head(counts[i]).eval();
      Eigen::ArrayXd approx = profile(cc, xs, times[j]);
      study.err[i][j] = (approx - ref).abs().maxCoeff() / peak;
    }
  }
  return study;
}

std::vector<std::string> run_truncation(const Scenario& s, const RunOptions& opt) {
  auto counts_d = s.config.get_list("truncation.counts");
  std::vector<int> counts;
  for (double v : counts_d) counts.push_back(static_cast<int>(v));
  int reference = s.config.get_int("truncation.reference");
  auto times = s.config.get_list("truncation.times");
  int pts = s.config.get_int("truncation.points", 101);
  double nu_p = s.has_point() ? s.point().position[0] : s.exhalation().plane_x;
  TruncationStudy study = truncation_study(s.room.x, nu_p, counts, reference, times, pts);

  std::string path = out_path(opt, "truncation.csv");
  Csv csv(path);
  standard_header(csv, s, "truncation");
  csv.comment("reference", std::to_string(reference));
  csv.comment("avg-over", opt.avg_over);
  if (opt.avg_over == "time") {
    csv.row({"N", "err_rel"});
    for (size_t i = 0; i < counts.size(); ++i) {
      double sum = 0.0;
      for (double e : study.err[i]) sum += e;
      csv.row({std::to_string(counts[i]), format_double(sum / study.err[i].size())});
    }
  } else if (opt.avg_over == "space") {
    std::vector<std::string> head{"N"};
    for (double t : times) head.push_back("err_rel_t" + format_double(t));
    csv.row(head);
    for (size_t i = 0; i < counts.size(); ++i) {
      std::vector<std::string> row{std::to_string(counts[i])};
      for (double e : study.err[i]) row.push_back(format_double(e));
      csv.row(row);
    }
  } else {
    throw ValidationError("truncation: --avg-over must be 'time' or 'space'");
  }
  return {path};
}

std::vector<std::string> run_validate(const Scenario& s, const RunOptions& opt,
                                      std::ostream& log) {
  std::string path = out_path(opt, "validate.csv");
  Csv csv(path);
  standard_header(csv, s, "validate");
  csv.row({"scenario", "check", "t_min", "value"});
  const std::vector<double> minutes{5, 10, 20, 30};
  bool all_ok = true;
  log << "oracle validation (relative to peak concentration)\n";
  for (const auto& sc : verification_scenarios()) {
    EigenSpectrum spec = solve_spectrum(sc.axis, s.modes, {s.solver_tol});
    AxisCoeffs c = point_source_coeffs(spec, sc.nu_p, 1.0);
    log << "scenario " << sc.name << " (d1=" << format_double(sc.axis.deposition_lo)
        << ", d2=" << format_double(sc.axis.deposition_hi) << ")\n";
    for (double m : minutes) {
      ResidualReport r = series_residuals(c, m * 60.0);
      csv.row({sc.name, "pde", format_double(m), format_double(r.pde_rel)});
      csv.row({sc.name, "bc_lo", format_double(m), format_double(r.bc_lo_rel)});
      csv.row({sc.name, "bc_hi", format_double(m), format_double(r.bc_hi_rel)});
      log << "  t=" << m << " min: pde " << r.pde_rel << "  bc(0) " << r.bc_lo_rel << "  bc(L) "
          << r.bc_hi_rel << "\n";
      all_ok = all_ok && r.pde_rel < 1e-8 && r.bc_lo_rel < 1e-8 && r.bc_hi_rel < 1e-8;
    }
    CnComparison cmp = cn_vs_series_1d(sc.axis, c, 60.0, 600.0);
    csv.row({sc.name, "cn_rel_peak", "-", format_double(cmp.rel_to_peak)});
    csv.row({sc.name, "cn_rel_final", "-", format_double(cmp.rel_to_final)});
    log << "  crank-nicolson 60s->600s: " << cmp.rel_to_peak << " (of run peak), "
        << cmp.rel_to_final << " (of final peak)\n";
    all_ok = all_ok && cmp.rel_to_peak < 1e-3;
  }
  log << (all_ok ? "validate: PASS\n" : "validate: FAIL\n");
  if (!all_ok) throw SolverError("validate: residual thresholds exceeded");
  return {path};
}

}  // namespace aerosol
