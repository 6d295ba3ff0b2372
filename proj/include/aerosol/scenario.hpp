#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "aerosol/config.hpp"
#include "aerosol/detection.hpp"
#include "aerosol/source.hpp"

namespace aerosol {

/// Resolved scenario: geometry, source, solver settings and the optional
/// sampler/detector/evaluation blocks, validated with field paths.
struct Scenario {
  Config config;  // the raw (canonical) config, for hashing/reproducibility
  Room room;
  std::variant<PointSource, ExhalationSource> source;
  int modes = 200;
  double solver_tol = 1e-12;
  SourceQuadrature quadrature;

  bool has_point() const { return std::holds_alternative<PointSource>(source); }
  const PointSource& point() const { return std::get<PointSource>(source); }
  const ExhalationSource& exhalation() const { return std::get<ExhalationSource>(source); }
};

Scenario load_scenario(const Config& cfg);

/// Sampler/detector blocks resolved from config (pmd/sample commands).
SamplerSpec load_sampler(const Config& cfg, const Room& room, double sample_end);
DetectorSpec load_detector(const Config& cfg, double gamma_linear, double q_p);

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
  PlanarSurrogate surrogate = PlanarSurrogate::equal_area_square;
  bool circular = false;        // breath: use the exact circular integration
  std::string avg_over = "space";  // truncation: time | space
};

// Subcommand drivers; each writes deterministic CSV tables and returns the
// list of files written.
std::vector<std::string> run_spectrum(const Scenario& s, const RunOptions& opt);
std::vector<std::string> run_point(const Scenario& s, const RunOptions& opt);
std::vector<std::string> run_breath(const Scenario& s, const RunOptions& opt);
std::vector<std::string> run_sample(const Scenario& s, const RunOptions& opt);
std::vector<std::string> run_pmd(const Scenario& s, const RunOptions& opt);
std::vector<std::string> run_truncation(const Scenario& s, const RunOptions& opt);
std::vector<std::string> run_validate(const Scenario& s, const RunOptions& opt, std::ostream& log);

/// Error-vs-N table used by `truncation` and the acceptance suite: for each
/// mode count, the max-over-line absolute error against the reference-count
/// series, relative to the reference profile peak, per evaluation time.
struct TruncationStudy {
  std::vector<int> counts;
  std::vector<double> times;
  // err[i][j]: count i, time j
  std::vector<std::vector<double>> err;
};
TruncationStudy truncation_study(const AxisSpec& axis, double nu_p, const std::vector<int>& counts,
                                 int reference, const std::vector<double>& times, int line_points);

std::string format_double(double v);  // %.17g, deterministic

}  // namespace aerosol
