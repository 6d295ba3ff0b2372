#include "aerosol/validation.hpp"

#include <cmath>

#include "aerosol/parallel.hpp"

namespace aerosol {

std::vector<ValidationScenario> verification_scenarios() {
  const double K = 2.42e-5;
  auto mk = [&](const char* name, double d1, double d2) {
    return ValidationScenario{name, AxisSpec{1.0, K, d1, d2}, 0.5};
  };
  return {mk("a", 1e-8, 1e-2), mk("b", 1.0, 1e-2), mk("c", 1e-2, 1e-8)};
}

ResidualReport series_residuals(const AxisCoeffs& c, double t, int nodes, double fd_dt) {
  const AxisSpec& ax = c.spectrum->axis;
  double L = ax.length;
  double h = L / (nodes - 1);
  Eigen::ArrayXd xs(nodes - 2);
  for (int i = 1; i < nodes - 1; ++i) xs[i - 1] = i * h;
  Eigen::ArrayXd mid = profile(c, xs, t);
  Eigen::ArrayXd up = profile(c, xs, t + fd_dt);
  Eigen::ArrayXd dn = profile(c, xs, t - fd_dt);
  Eigen::ArrayXd left = profile(c, xs - h, t);
  Eigen::ArrayXd right = profile(c, xs + h, t);
  Eigen::ArrayXd resid = (up - dn) / (2.0 * fd_dt) -
                         ax.diffusivity * (left - 2.0 * mid + right) / (h * h);
  double peak = mid.abs().maxCoeff();
  ResidualReport r;
  r.pde_rel = resid.abs().maxCoeff() / peak;
  r.bc_lo_rel = std::abs(derivative_at(c, 0.0, t) - ax.beta_lo() * value_at(c, 0.0, t)) / peak;
  r.bc_hi_rel = std::abs(derivative_at(c, L, t) - ax.beta_hi() * value_at(c, L, t)) / peak;
  return r;
}

CnComparison cn_vs_series_1d(const AxisSpec& axis, const AxisCoeffs& c, double seed_t,
                             double end_t, int nodes, double dt) {
  Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(nodes, 0.0, axis.length);
  Eigen::ArrayXd seed = profile(c, xs, seed_t);
  Eigen::ArrayXd target = profile(c, xs, end_t);
  Eigen::ArrayXd evolved = fdm_evolve_1d(axis, seed, end_t - seed_t, dt);
  double diff = (evolved - target).abs().maxCoeff();
  return {diff / seed.abs().maxCoeff(), diff / target.abs().maxCoeff()};
}

double lod_vs_series_probe(const Room& room, const PointSource& src, double seed_t, double end_t,
                           int nx, int ny, int nz, double dt, const double probe[3], int modes,
                           int threads) {
  PointSourceField field(room, src, modes);
  double elapsed0 = seed_t - src.release_time;
  Eigen::ArrayXd px = profile(field.coeffs(0), Eigen::ArrayXd::LinSpaced(nx, 0.0, room.x.length),
                              elapsed0);
  Eigen::ArrayXd py = profile(field.coeffs(1), Eigen::ArrayXd::LinSpaced(ny, 0.0, room.y.length),
                              elapsed0);
  Eigen::ArrayXd pz = profile(field.coeffs(2), Eigen::ArrayXd::LinSpaced(nz, 0.0, room.z.length),
                              elapsed0);
  Field3 f(nx, ny, nz);
  parallel_for(0, nz, threads, [&](int k) {
    for (int j = 0; j < ny; ++j) {
      double yz = py[j] * pz[k];
      for (int i = 0; i < nx; ++i) f.at(i, j, k) = px[i] * yz;
    }
  });
  f = fdm_evolve_3d(room, std::move(f), end_t - seed_t, dt, threads);
  // probe must land on grid nodes
  auto idx = [](double v, double L, int n) {
    double u = v / L * (n - 1);
    return static_cast<int>(std::llround(u));
  };
  int i = idx(probe[0], room.x.length, nx);
  int j = idx(probe[1], room.y.length, ny);
  int k = idx(probe[2], room.z.length, nz);
  double got = f.at(i, j, k);
  double want = field(probe[0], probe[1], probe[2], end_t);
  return std::abs(got - want) / std::abs(want);
}

}  // namespace aerosol
