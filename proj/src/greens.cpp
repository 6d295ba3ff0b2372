#include "aerosol/greens.hpp"

#include <algorithm>
#include <cmath>

namespace aerosol {

namespace {

// Largest -x with e^{-x} still normal; beyond this the tail is dropped.
constexpr double kExpCutoff = 745.0;

// Weight normalization (4 lam^3 times the integral of Phi^2):
// (lam^2 - b1^2) sin(2 lam L) - 2 lam b1 cos(2 lam L) + rho,
// rho = 2 lam ((lam^2 + b1^2) L + b1).
Eigen::ArrayXd pos_denominator(const Eigen::ArrayXd& lam, double L, double b1) {
  Eigen::ArrayXd rho = 2.0 * lam * ((lam.square() + b1 * b1) * L + b1);
  return (lam.square() - b1 * b1) * (2.0 * lam * L).sin() -
         2.0 * b1 * lam * (2.0 * lam * L).cos() + rho;
}

// Hyperbolic-mode helpers, all scaled by the leading exponential so that
// mantissas stay O(1): V(nu) = e^{lam nu} vhat(nu), D = e^{2 lam L} dhat.
double neg_vhat(double lam, double b1, double nu) {
  double b = b1 / lam;
  return 0.5 * ((1.0 + b) + (1.0 - b) * std::exp(-2.0 * lam * nu));
}

double neg_dvhat(double lam, double b1, double nu) {
  // V'(nu) = lam e^{lam nu} dvhat(nu)
  double b = b1 / lam;
  return 0.5 * ((1.0 + b) - (1.0 - b) * std::exp(-2.0 * lam * nu));
}

double neg_dhat(double lam, double b1, double L) {
  double rho = 2.0 * lam * ((b1 * b1 - lam * lam) * L + b1);
  return 0.5 * (lam * lam + b1 * b1) * (1.0 - std::exp(-4.0 * lam * L)) +
         lam * b1 * (1.0 + std::exp(-4.0 * lam * L)) - rho * std::exp(-2.0 * lam * L);
}

// sinh(A) - sinh(B) + b (cosh(A) - cosh(B)) = e^A nhat, A >= B >= 0.
double neg_interval_nhat(double lam, double b1, double lo, double hi) {
  double b = b1 / lam;
  double A = lam * hi, B = lam * lo;
  return 0.5 * ((1.0 + b) * (1.0 - std::exp(B - A)) -
                (1.0 - b) * (std::exp(-2.0 * A) - std::exp(-A - B)));
}

double zero_norm(double b1, double L) {
  // integral of (b1 nu + 1)^2 over [0, L]
  if (b1 == 0.0) return L;
  double u = 1.0 + b1 * L;
  return (u * u * u - 1.0) / (3.0 * b1);
}

int live_modes(const Eigen::ArrayXd& rate, double elapsed) {
  if (elapsed <= 0.0) return static_cast<int>(rate.size());
  const double* begin = rate.data();
  const double* end = begin + rate.size();
  return static_cast<int>(std::upper_bound(begin, end, kExpCutoff / elapsed) - begin);
}

}  // namespace

AxisCoeffs point_source_coeffs(const EigenSpectrum& spec, double nu_p, double q) {
  const AxisSpec& ax = spec.axis;
  if (!(nu_p > 0.0 && nu_p < ax.length))
    throw ValidationError("point source position must lie strictly inside the axis");
  double b1 = ax.beta_lo();
  AxisCoeffs c;
  c.spectrum = &spec;
  const Eigen::ArrayXd& lam = spec.lambdas;
  Eigen::ArrayXd vp = (lam * nu_p).cos() + (b1 / lam) * (lam * nu_p).sin();
  c.pos = 4.0 * q * lam.cube() * vp / pos_denominator(lam, ax.length, b1);
  if (spec.negative_root) {
    double ln = *spec.negative_root;
    c.neg.mantissa = 4.0 * q * ln * ln * ln * neg_vhat(ln, b1, nu_p) / neg_dhat(ln, b1, ax.length);
    c.neg.log_scale = ln * (nu_p - 2.0 * ax.length);
  }
  if (spec.zero_mode) c.zero = q * (b1 * nu_p + 1.0) / zero_norm(b1, ax.length);
  return c;
}

AxisCoeffs interval_source_coeffs(const EigenSpectrum& spec, double lo, double hi, double q) {
  const AxisSpec& ax = spec.axis;
  if (!(lo <= hi && lo >= 0.0 && hi <= ax.length))
    throw ValidationError("source interval must satisfy 0 <= lo <= hi <= L");
  double b1 = ax.beta_lo();
  AxisCoeffs c;
  c.spectrum = &spec;
  const Eigen::ArrayXd& lam = spec.lambdas;
  Eigen::ArrayXd num = (lam * hi).sin() - (lam * lo).sin() +
                       (b1 / lam) * ((lam * lo).cos() - (lam * hi).cos());
  c.pos = 4.0 * q * lam.square() * num / pos_denominator(lam, ax.length, b1);
  if (spec.negative_root) {
    double ln = *spec.negative_root;
    c.neg.mantissa =
        4.0 * q * ln * ln * neg_interval_nhat(ln, b1, lo, hi) / neg_dhat(ln, b1, ax.length);
    c.neg.log_scale = ln * (hi - 2.0 * ax.length);
  }
  if (spec.zero_mode)
    c.zero = q * (0.5 * b1 * (hi * hi - lo * lo) + (hi - lo)) / zero_norm(b1, ax.length);
  return c;
}

BoundSeries bind_value(const AxisCoeffs& c, double nu) {
  const EigenSpectrum& spec = *c.spectrum;
  const AxisSpec& ax = spec.axis;
  if (!(nu >= 0.0 && nu <= ax.length))
    throw ValidationError("evaluation point must lie in [0, L]");
  double b1 = ax.beta_lo();
  const Eigen::ArrayXd& lam = spec.lambdas;
  BoundSeries s;
  s.amp = c.pos * ((lam * nu).cos() + (b1 / lam) * (lam * nu).sin());
  s.rate = ax.diffusivity * lam.square();
  if (spec.negative_root) {
    double ln = *spec.negative_root;
    s.neg_amp = c.neg.mantissa * neg_vhat(ln, b1, nu);
    s.neg_log = c.neg.log_scale + ln * nu;
    s.neg_rate = ax.diffusivity * ln * ln;
  }
  s.zero_amp = c.zero * (b1 * nu + 1.0);
  return s;
}

BoundSeries bind_slice(const AxisCoeffs& c, double lo, double hi) {
  const EigenSpectrum& spec = *c.spectrum;
  const AxisSpec& ax = spec.axis;
  if (!(lo <= hi && lo >= 0.0 && hi <= ax.length))
    throw ValidationError("slice must satisfy 0 <= lo <= hi <= L");
  double b1 = ax.beta_lo();
  const Eigen::ArrayXd& lam = spec.lambdas;
  BoundSeries s;
  // slice integral of the mode shape:
  // [sin(lam hi) - sin(lam lo) - (b1/lam)(cos(lam hi) - cos(lam lo))] / lam
  Eigen::ArrayXd psi = ((lam * hi).sin() - (lam * lo).sin() -
                        (b1 / lam) * ((lam * hi).cos() - (lam * lo).cos())) /
                       lam;
  s.amp = c.pos * psi;
  s.rate = ax.diffusivity * lam.square();
  if (spec.negative_root) {
    double ln = *spec.negative_root;
    // hyperbolic slice integral: same interval kernel as l-hat, over lam.
    s.neg_amp = c.neg.mantissa * neg_interval_nhat(ln, b1, lo, hi) / ln;
    s.neg_log = c.neg.log_scale + ln * hi;
    s.neg_rate = ax.diffusivity * ln * ln;
  }
  s.zero_amp = c.zero * (0.5 * b1 * (hi * hi - lo * lo) + (hi - lo));
  return s;
}

double BoundSeries::eval(double elapsed) const {
  int n = live_modes(rate, elapsed);
  double sum = zero_amp;
  if (n > 0) sum += (amp.head(n) * (-rate.head(n) * elapsed).exp()).sum();
  if (neg_amp != 0.0) {
    double e = neg_log - neg_rate * elapsed;
    if (e > -kExpCutoff) sum += neg_amp * std::exp(e);
  }
  return sum;
}

double value_at(const AxisCoeffs& c, double nu, double elapsed) {
  return bind_value(c, nu).eval(elapsed);
}

double slice_integral(const AxisCoeffs& c, double lo, double hi, double elapsed) {
  return bind_slice(c, lo, hi).eval(elapsed);
}

double derivative_at(const AxisCoeffs& c, double nu, double elapsed) {
  const EigenSpectrum& spec = *c.spectrum;
  const AxisSpec& ax = spec.axis;
  double b1 = ax.beta_lo();
  const Eigen::ArrayXd& lam = spec.lambdas;
  Eigen::ArrayXd rate = ax.diffusivity * lam.square();
  int n = live_modes(rate, elapsed);
  double sum = c.zero * b1;
  if (n > 0) {
    Eigen::ArrayXd head = lam.head(n);
    sum += (c.pos.head(n) * (b1 * (head * nu).cos() - head * (head * nu).sin()) *
            (-rate.head(n) * elapsed).exp())
               .sum();
  }
  if (spec.negative_root) {
    double ln = *spec.negative_root;
    double e = c.neg.log_scale + ln * nu - ax.diffusivity * ln * ln * elapsed;
    if (e > -kExpCutoff)
      sum += c.neg.mantissa * ln * neg_dvhat(ln, b1, nu) * std::exp(e);
  }
  return sum;
}

Eigen::ArrayXd profile(const AxisCoeffs& c, const Eigen::ArrayXd& nus, double elapsed) {
  const EigenSpectrum& spec = *c.spectrum;
  const AxisSpec& ax = spec.axis;
  double b1 = ax.beta_lo();
  const Eigen::ArrayXd& lam = spec.lambdas;
  Eigen::ArrayXd rate = ax.diffusivity * lam.square();
  int n = live_modes(rate, elapsed);
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(nus.size());
  const int chunk = 256;
  for (int m0 = 0; m0 < n; m0 += chunk) {
    int m = std::min(chunk, n - m0);
    Eigen::ArrayXd f = c.pos.segment(m0, m) * (-rate.segment(m0, m) * elapsed).exp();
    Eigen::MatrixXd theta = nus.matrix() * lam.segment(m0, m).matrix().transpose();
    out += (theta.array().cos().matrix() * f.matrix()).array();
    out += (theta.array().sin().matrix() * (f / lam.segment(m0, m) * b1).matrix()).array();
  }
  if (spec.negative_root) {
    double ln = *spec.negative_root;
    for (Eigen::Index i = 0; i < nus.size(); ++i) {
      double e = c.neg.log_scale + ln * nus[i] - ax.diffusivity * ln * ln * elapsed;
      if (e > -kExpCutoff) out[i] += c.neg.mantissa * neg_vhat(ln, b1, nus[i]) * std::exp(e);
    }
  }
  if (c.zero != 0.0) out += c.zero * (b1 * nus + 1.0);
  return out;
}

double eigenfunction_pos(const EigenSpectrum& spec, int n, double nu, double t) {
  if (n < 0 || n >= spec.count())
    throw ValidationError("eigenfunction_pos: mode index out of range");
  if (!(nu >= 0.0 && nu <= spec.axis.length) || t < 0.0)
    throw ValidationError("eigenfunction_pos: need 0 <= nu <= L and t >= 0");
  double lam = spec.lambdas[n];
  double b1 = spec.axis.beta_lo();
  return (std::cos(lam * nu) + (b1 / lam) * std::sin(lam * nu)) *
         std::exp(-spec.axis.diffusivity * lam * lam * t);
}

double weight_pos(const EigenSpectrum& spec, int n, double nu_p, double q, double t0) {
  if (n < 0 || n >= spec.count()) throw ValidationError("weight_pos: mode index out of range");
  AxisCoeffs c = point_source_coeffs(spec, nu_p, q);
  double lam = spec.lambdas[n];
  return c.pos[n] * std::exp(spec.axis.diffusivity * lam * lam * t0);
}

std::optional<double> weight_neg(const EigenSpectrum& spec, double nu_p, double q, double t0) {
  if (!spec.negative_root) return std::nullopt;
  AxisCoeffs c = point_source_coeffs(spec, nu_p, q);
  double ln = *spec.negative_root;
  return c.neg.mantissa *
         std::exp(c.neg.log_scale + spec.axis.diffusivity * ln * ln * t0);
}

double concentration_1d(const AxisCoeffs& c, double nu, double t, double t0) {
  if (t < t0) return 0.0;
  if (t == t0)
    throw std::domain_error("concentration_1d: the delta initial condition cannot be evaluated");
  return value_at(c, nu, t - t0);
}

PointSourceField::PointSourceField(const Room& room, const PointSource& src, int modes,
                                   const SolveOptions& opt)
    : t0_(src.release_time) {
  room.validate();
  src.validate(room);
  double q[3] = {src.strength, 1.0, 1.0};  // Q_x Q_y Q_z = Q_p
  for (int i = 0; i < 3; ++i) {
    spectra_[i] = solve_spectrum(room.axis(i), modes, opt);
    coeffs_[i] = point_source_coeffs(spectra_[i], src.position[i], q[i]);
  }
}

double PointSourceField::operator()(double x, double y, double z, double t) const {
  if (t < t0_) return 0.0;
  if (t == t0_)
    throw std::domain_error("PointSourceField: the delta initial condition cannot be evaluated");
  double elapsed = t - t0_;
  return value_at(coeffs_[0], x, elapsed) * value_at(coeffs_[1], y, elapsed) *
         value_at(coeffs_[2], z, elapsed);
}

double concentration_point_3d(const Room& room, const PointSource& src, double x, double y,
                              double z, double t, int modes) {
  return PointSourceField(room, src, modes)(x, y, z, t);
}

}  // namespace aerosol
