#include "aerosol/source.hpp"

#include <cmath>
#include <vector>

namespace aerosol {

double surrogate_side(PlanarSurrogate s, double radius) {
  switch (s) {
    case PlanarSurrogate::lower_square: return std::sqrt(2.0) * radius;
    case PlanarSurrogate::equal_area_square: return std::sqrt(3.14159265358979323846) * radius;
    case PlanarSurrogate::upper_square: return 2.0 * radius;
  }
  throw ValidationError("unknown surrogate");
}

double lhat_pos(const EigenSpectrum& spec_y, int n, double y_lo, double y_hi, double q) {
  if (n < 0 || n >= spec_y.count()) throw ValidationError("lhat_pos: mode index out of range");
  return interval_source_coeffs(spec_y, y_lo, y_hi, q).pos[n];
}

std::optional<double> lhat_neg(const EigenSpectrum& spec_y, double y_lo, double y_hi, double q) {
  if (!spec_y.negative_root) return std::nullopt;
  AxisCoeffs c = interval_source_coeffs(spec_y, y_lo, y_hi, q);
  return c.neg.mantissa * std::exp(c.neg.log_scale);
}

ExhalationField::ExhalationField(const Room& room, const ExhalationSource& src, int modes,
                                 const SolveOptions& opt, const SourceQuadrature& quad)
    : room_(room), src_(src), quad_(quad) {
  room.validate();
  src.validate(room);
  for (int i = 0; i < 3; ++i) spectra_[i] = solve_spectrum(room.axis(i), modes, opt);
  x_point_ = point_source_coeffs(spectra_[0], src.plane_x, src.strength_rate);
  auto [n, w] = gauss_legendre(quad.gauss_nodes);
  gl_nodes_ = n;
  gl_weights_ = w;
}

double ExhalationField::tau_integral(double t, const BoundSeries& fx, const BoundSeries& fy,
                                     const BoundSeries& fz) const {
  double hi = std::min(t, src_.end);
  if (hi <= src_.start) return 0.0;
  auto integrand = [&](double tau) {
    double dt = t - tau;
    return fx.eval(dt) * fy.eval(dt) * fz.eval(dt);
  };
  return quad_adaptive(integrand, src_.start, hi, quad_.abs_tol, quad_.max_depth).value;
}

double ExhalationField::square(PlanarSurrogate s, double x, double y, double z, double t) const {
  if (t <= src_.start) return 0.0;
  double half = 0.5 * surrogate_side(s, src_.radius);
  if (half == 0.0) return 0.0;
  AxisCoeffs cy = interval_source_coeffs(spectra_[1], src_.center_y - half, src_.center_y + half, 1.0);
  AxisCoeffs cz = interval_source_coeffs(spectra_[2], src_.center_z - half, src_.center_z + half, 1.0);
  return tau_integral(t, bind_value(x_point_, x), bind_value(cy, y), bind_value(cz, z));
}

double ExhalationField::circular(double x, double y, double z, double t) const {
  if (t <= src_.start) return 0.0;
  double rc = src_.radius;
  if (rc == 0.0) return 0.0;
  double hi = std::min(t, src_.end);
  if (hi <= src_.start) return 0.0;

  // z0 = z_p + rc sin(theta) turns the sqrt(rc^2 - (z0 - z_p)^2) half-width
  // into rc cos(theta), making the Gauss-Legendre integrand analytic.
  const Eigen::Index m = gl_nodes_.size();
  std::vector<BoundSeries> fy(m), fz(m);
  Eigen::ArrayXd jac(m);
  const double half_pi = 0.5 * 3.14159265358979323846;
  for (Eigen::Index j = 0; j < m; ++j) {
    double theta = half_pi * gl_nodes_[j];
    double z0 = src_.center_z + rc * std::sin(theta);
    double hw = rc * std::cos(theta);
    AxisCoeffs cy =
        interval_source_coeffs(spectra_[1], src_.center_y - hw, src_.center_y + hw, 1.0);
    AxisCoeffs cz = point_source_coeffs(spectra_[2], z0, 1.0);
    fy[j] = bind_value(cy, y);
    fz[j] = bind_value(cz, z);
    jac[j] = half_pi * gl_weights_[j] * rc * std::cos(theta);
  }
  BoundSeries fx = bind_value(x_point_, x);
  auto integrand = [&](double tau) {
    double dt = t - tau;
    double zsum = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) zsum += jac[j] * fy[j].eval(dt) * fz[j].eval(dt);
    return fx.eval(dt) * zsum;
  };
  return quad_adaptive(integrand, src_.start, hi, quad_.abs_tol, quad_.max_depth).value;
}

double concentration_circular(const Room& room, const ExhalationSource& src, double x, double y,
                              double z, double t, int modes, const SourceQuadrature& quad) {
  return ExhalationField(room, src, modes, {}, quad).circular(x, y, z, t);
}

double concentration_square(const Room& room, const ExhalationSource& src, PlanarSurrogate s,
                            double x, double y, double z, double t, int modes,
                            const SourceQuadrature& quad) {
  return ExhalationField(room, src, modes, {}, quad).square(s, x, y, z, t);
}

}  // namespace aerosol
