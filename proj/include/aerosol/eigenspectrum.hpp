#pragma once

#include <Eigen/Core>
#include <optional>

#include "aerosol/types.hpp"

namespace aerosol {

struct SolveOptions {
  double tol = 1e-12;            // relative tolerance on lambda*L
  double degenerate_tol = 1e-12; // absolute band for the zero-mode condition
  int max_iter = 200;
};

/// Solved mode set of the per-axis Sturm-Liouville problem: the requested
/// positive roots of tan(lam L) = lam (b1 - b2) / (b1 b2 + lam^2), the
/// at-most-one root of tanh(lam L) = lam (b1 - b2) / (b1 b2 - lam^2), and
/// the steady mode V(nu) = b1 nu + 1 in the degenerate case
/// b2 = b1 / (1 + b1 L).
struct EigenSpectrum {
  AxisSpec axis;
  Eigen::ArrayXd lambdas;               // strictly increasing [1/m]
  std::optional<double> negative_root;  // lambda-tilde [1/m]
  bool zero_mode = false;

  int count() const { return static_cast<int>(lambdas.size()); }
};

EigenSpectrum solve_spectrum(const AxisSpec& axis, int count, const SolveOptions& opt = {});

Eigen::ArrayXd solve_positive_eigenvalues(const AxisSpec& axis, int count, double tol = 1e-12);
std::optional<double> solve_negative_eigenvalue(const AxisSpec& axis, double tol = 1e-12);
bool detect_zero_mode(const AxisSpec& axis, double degenerate_tol = 1e-12);

/// Closed-form existence condition for the hyperbolic root:
/// b1 < b2, or b1 > b2 and L > (b1 - b2)/(b1 b2). Equality b1 == b2 has no
/// root (the right-hand side is identically zero).
bool negative_root_exists(double beta_lo, double beta_hi, double length);

/// Bracketing interval in lambda for the k-th positive root (k is 0-based
/// over the returned ordering). Exposed for the interval-membership tests.
std::pair<double, double> positive_root_interval(const AxisSpec& axis, int k);

/// Residual of the transcendental equation at a computed root, in the
/// pole-free form sin(lam L)(b1 b2 + lam^2) - cos(lam L) lam (b1 - b2),
/// scaled by the local derivative magnitude.
double positive_root_residual(const AxisSpec& axis, double lambda);
double negative_root_residual(const AxisSpec& axis, double lambda);

}  // namespace aerosol
