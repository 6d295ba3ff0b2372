#pragma once

#include <Eigen/Core>

#include "aerosol/eigenspectrum.hpp"
#include "aerosol/types.hpp"

namespace aerosol {

/// value = mantissa * exp(log_scale). Used for the hyperbolic-mode pieces,
/// whose bare factors (cosh(lam nu), the normalization denominator) overflow for
/// large lam even though every assembled term is bounded.
struct Scaled {
  double mantissa = 0.0;
  double log_scale = 0.0;
};

/// Per-axis series coefficients with the e^{K lam^2 t0} factor cancelled:
/// every evaluator takes the elapsed time (t - t0) and applies
/// e^{-K lam^2 (t - t0)} only. Coefficients scale linearly with Q.
struct AxisCoeffs {
  const EigenSpectrum* spectrum = nullptr;
  Eigen::ArrayXd pos;  // weight per positive mode
  Scaled neg;          // hyperbolic-mode weight (mantissa, spatial exponent)
  double zero = 0.0;   // steady-mode weight; mode shape V0 = beta1 nu + 1
};

/// Weights of a delta release at nu_p (orthogonality quotient with the
/// delta collapsed analytically).
AxisCoeffs point_source_coeffs(const EigenSpectrum& spec, double nu_p, double q);

/// Weights integrated over a source interval [lo, hi] (the l-hat forms).
AxisCoeffs interval_source_coeffs(const EigenSpectrum& spec, double lo, double hi, double q);

/// Series value sum_n w_n Phi_n(nu) e^{-K lam^2 elapsed} (+ hyperbolic and
/// steady terms).
double value_at(const AxisCoeffs& c, double nu, double elapsed);

/// Spatial derivative of the series at nu (for boundary-condition residuals).
double derivative_at(const AxisCoeffs& c, double nu, double elapsed);

/// Profile over many points; equivalent to mapping value_at.
Eigen::ArrayXd profile(const AxisCoeffs& c, const Eigen::ArrayXd& nus, double elapsed);

/// Closed-form spatial integral of the series over [lo, hi] (the Psi forms).
double slice_integral(const AxisCoeffs& c, double lo, double hi, double elapsed);

/// Series pre-bound to a fixed spatial target so that repeated evaluations
/// across elapsed times (quadrature loops) cost one exp per live mode.
struct BoundSeries {
  Eigen::ArrayXd amp;    // coefficient x spatial factor per positive mode
  Eigen::ArrayXd rate;   // K lam^2, ascending
  double neg_amp = 0.0;  // mantissa; full term = neg_amp e^{neg_log - neg_rate dt}
  double neg_log = 0.0;
  double neg_rate = 0.0;
  double zero_amp = 0.0;

  double eval(double elapsed) const;
};

BoundSeries bind_value(const AxisCoeffs& c, double nu);
BoundSeries bind_slice(const AxisCoeffs& c, double lo, double hi);

// Spec-shaped forms, primarily exercised by tests. The weight functions
// return the full weight values including e^{K lam^2 t0}, which can
// overflow for large lam * t0; production evaluation goes through
// AxisCoeffs where that factor is cancelled.
double eigenfunction_pos(const EigenSpectrum& spec, int n, double nu, double t);
double weight_pos(const EigenSpectrum& spec, int n, double nu_p, double q, double t0);
std::optional<double> weight_neg(const EigenSpectrum& spec, double nu_p, double q, double t0);

/// 1-D concentration from a delta release at absolute time t0: zero before
/// t0, undefined (domain error) at exactly t0.
double concentration_1d(const AxisCoeffs& c, double nu, double t, double t0);

/// Separable 3-D point-source field; spectra are solved once at
/// construction. Q is split as Q_x = Q_p, Q_y = Q_z = 1 (product-invariant).
class PointSourceField {
 public:
  PointSourceField(const Room& room, const PointSource& src, int modes,
                   const SolveOptions& opt = {});

  double operator()(double x, double y, double z, double t) const;
  const EigenSpectrum& spectrum(int axis) const { return spectra_[axis]; }
  const AxisCoeffs& coeffs(int axis) const { return coeffs_[axis]; }
  double release_time() const { return t0_; }

 private:
  EigenSpectrum spectra_[3];
  AxisCoeffs coeffs_[3];
  double t0_;
};

double concentration_point_3d(const Room& room, const PointSource& src, double x, double y,
                              double z, double t, int modes = 200);

}  // namespace aerosol
