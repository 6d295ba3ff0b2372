#pragma once

#include <Eigen/Core>
#include <cmath>
#include <utility>

#include "aerosol/types.hpp"

namespace aerosol {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

namespace detail {

template <class F>
QuadResult simpson_adapt(const F& f, double a, double m, double b, double fa, double fm,
                         double fb, double whole, double tol, int depth, int max_depth,
                         bool& exhausted) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double err = (left + right - whole) / 15.0;
  if (std::abs(err) <= tol || depth >= max_depth) {
    if (std::abs(err) > tol) exhausted = true;
    return {left + right + err, std::abs(err)};
  }
  QuadResult l =
      simpson_adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth, exhausted);
  QuadResult r =
      simpson_adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth, exhausted);
  return {l.value + r.value, l.error + r.error};
}

}  // namespace detail

/// Adaptive Simpson quadrature to an absolute tolerance. Throws
/// IntegrationError (carrying the full achieved estimate and error bound)
/// when the subdivision budget is exhausted before reaching tolerance.
template <class F>
QuadResult quad_adaptive(const F& f, double a, double b, double abs_tol, int max_depth = 48) {
  if (a == b) return {0.0, 0.0};
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  bool exhausted = false;
  QuadResult r =
      detail::simpson_adapt(f, a, m, b, fa, fm, fb, whole, abs_tol, 0, max_depth, exhausted);
  if (exhausted)
    throw IntegrationError("quad_adaptive: subdivision budget exhausted", r.value, r.error);
  return r;
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
std::pair<Eigen::ArrayXd, Eigen::ArrayXd> gauss_legendre(int n);

/// Fixed-order Gauss-Legendre integral over [a, b].
template <class F>
double gauss_integrate(const F& f, double a, double b, const Eigen::ArrayXd& nodes,
                       const Eigen::ArrayXd& weights) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < nodes.size(); ++i) sum += weights[i] * f(c + h * nodes[i]);
  return h * sum;
}

}  // namespace aerosol
