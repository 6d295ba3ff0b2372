#pragma once

#include <vector>

#include "aerosol/fdm.hpp"
#include "aerosol/greens.hpp"

namespace aerosol {

/// The three single-axis verification scenarios of the numerical study
/// (L = 1 m, K = 2.42e-5 m^2/s, point release at 0.5 m):
/// a: d = (1e-8, 1e-2), b: (1, 1e-2), c: (1e-2, 1e-8).
struct ValidationScenario {
  const char* name;
  AxisSpec axis;
  double nu_p;
};
std::vector<ValidationScenario> verification_scenarios();

struct ResidualReport {
  double pde_rel;    // max FD residual of dC/dt - K d2C/dnu2, relative to peak |C|
  double bc_lo_rel;  // |C' - beta_lo C| at nu=0, relative to peak |C|
  double bc_hi_rel;  // |C' - beta_hi C| at nu=L, relative to peak |C| (literal sign)
};

/// Finite-difference PDE residual (central differences, spacing h and dt)
/// and analytic-derivative BC residuals of the series at elapsed time t.
ResidualReport series_residuals(const AxisCoeffs& c, double t, int nodes = 4001,
                                double fd_dt = 0.05);

struct CnComparison {
  double rel_to_peak;   // max |CN - series| / peak |series| over the run (seed peak)
  double rel_to_final;  // max |CN - series| / max |series at end|
};

/// Seeds the Crank-Nicolson oracle from the series at seed_t, evolves to
/// end_t and compares against the series at end_t.
CnComparison cn_vs_series_1d(const AxisSpec& axis, const AxisCoeffs& c, double seed_t,
                             double end_t, int nodes = 2001, double dt = 0.05);

/// 3-D LOD oracle vs the separable series product at one probe point.
double lod_vs_series_probe(const Room& room, const PointSource& src, double seed_t, double end_t,
                           int nx, int ny, int nz, double dt, const double probe[3], int modes,
                           int threads);

}  // namespace aerosol
