#include <CLI11.hpp>
#include <iostream>

#include "aerosol/parallel.hpp"
#include "aerosol/scenario.hpp"

namespace {

aerosol::PlanarSurrogate parse_surrogate(const std::string& s, bool& circular) {
  circular = false;
  if (s == "circular") {
    circular = true;
    return aerosol::PlanarSurrogate::equal_area_square;
  }
  if (s == "lower") return aerosol::PlanarSurrogate::lower_square;
  if (s == "equal") return aerosol::PlanarSurrogate::equal_area_square;
  if (s == "upper") return aerosol::PlanarSurrogate::upper_square;
  throw aerosol::ValidationError("--surrogate must be lower|equal|upper|circular");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indoor aerosol dispersion and biosensor detection model"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", surrogate = "equal", avg_over = "space";
  int modes_override = 0, threads = aerosol::default_threads();
  double tol_override = 0.0;

  app.add_option("--config", config_path, "scenario config file")->required();
  app.add_option("--out", out_dir, "output directory (default: current)");
  app.add_option("--modes", modes_override, "override solver.modes");
  app.add_option("--tol", tol_override, "override solver.tol");
  app.add_option("--threads", threads, "worker threads for sweeps");

  auto* c_spectrum = app.add_subcommand("spectrum", "dump per-axis eigenvalues and weights");
  auto* c_point = app.add_subcommand("point", "point-source concentration profiles");
  auto* c_breath = app.add_subcommand("breath", "exhalation concentration profiles");
  c_breath->add_option("--surrogate", surrogate, "lower|equal|upper|circular (default equal)");
  auto* c_sample = app.add_subcommand("sample", "sampled concentration C_samp");
  auto* c_pmd = app.add_subcommand("pmd", "miss-detection probability tables");
  auto* c_trunc = app.add_subcommand("truncation", "mode-count truncation study");
  c_trunc->add_option("--avg-over", avg_over, "time|space (default space)");
  auto* c_validate = app.add_subcommand("validate", "run the oracle validation suite");

  CLI11_PARSE(app, argc, argv);

  try {
    aerosol::Config cfg = aerosol::Config::parse_file(config_path);
    if (modes_override > 0) cfg.set("solver.modes", std::to_string(modes_override));
    if (tol_override > 0.0) cfg.set("solver.tol", aerosol::format_double(tol_override));
    aerosol::Scenario scenario = aerosol::load_scenario(cfg);

    aerosol::RunOptions opt;
    opt.out_dir = out_dir;
    opt.threads = threads;
    opt.avg_over = avg_over;
    opt.surrogate = parse_surrogate(surrogate, opt.circular);

    std::vector<std::string> files;
    if (c_spectrum->parsed()) files = run_spectrum(scenario, opt);
    if (c_point->parsed()) files = run_point(scenario, opt);
    if (c_breath->parsed()) files = run_breath(scenario, opt);
    if (c_sample->parsed()) files = run_sample(scenario, opt);
    if (c_pmd->parsed()) files = run_pmd(scenario, opt);
    if (c_trunc->parsed()) files = run_truncation(scenario, opt);
    if (c_validate->parsed()) files = run_validate(scenario, opt, std::cout);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return 0;
  } catch (const aerosol::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const aerosol::IntegrationError& e) {
    std::cerr << "integration error: " << e.what() << " (estimate " << e.estimate
              << ", error bound " << e.error_bound << ")\n";
    return 2;
  } catch (const aerosol::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
