#include "aerosol/eigenspectrum.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace aerosol {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Pole-free form of tan(lam L) = lam (b1 - b2) / (b1 b2 + lam^2):
// s(lam) = sin(lam L)(b1 b2 + lam^2) - cos(lam L) lam (b1 - b2).
// s has exactly one simple zero in each bracketing interval and no zeros
// at the interval endpoints, so no asymptote guard is required.
double s_pos(double lam, double L, double b1, double b2) {
  return std::sin(lam * L) * (b1 * b2 + lam * lam) - std::cos(lam * L) * lam * (b1 - b2);
}

// Bounded form of the hyperbolic equation (dividing by cosh keeps it finite
// for lam L in the thousands):
// st(lam) = tanh(lam L)(b1 b2 - lam^2) - lam (b1 - b2).
double s_neg(double lam, double L, double b1, double b2) {
  return std::tanh(lam * L) * (b1 * b2 - lam * lam) - lam * (b1 - b2);
}

// Bisection with a safeguarded secant step. The bracket [lo, hi] must carry
// a sign change. Converges to rel tolerance `tol` on lambda, additionally
// capped at 1e-10 absolute in lambda*L so the residual invariant (1e-9 in
// lambda L units) holds even for roots with lambda L in the thousands.
template <class F>
double solve_bracketed(const F& f, double lo, double hi, double flo, double fhi, double tol,
                       double L, int max_iter, const char* what, int index) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    std::ostringstream os;
    os << what << ": no sign change in bracket " << index << " [" << lo << ", " << hi << "]";
    throw SolverError(os.str());
  }
  auto width_goal = [&](double h) {
    double goal = std::min(tol * std::max(1.0, h), 1e-10 / L);
    return std::max(goal, 8.0 * std::numeric_limits<double>::epsilon() * h);
  };
  for (int it = 0; it < max_iter; ++it) {
    double width = hi - lo;
    if (width <= width_goal(hi)) break;
    double mid = hi - fhi * width / (fhi - flo);  // secant
    double margin = 0.01 * width;
    if (!(mid > lo + margin && mid < hi - margin)) mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  if (hi - lo > 16.0 * width_goal(hi)) {
    std::ostringstream os;
    os << what << ": bracket " << index << " did not converge within iteration budget";
    throw SolverError(os.str());
  }
  return 0.5 * (lo + hi);
}

}  // namespace

bool negative_root_exists(double b1, double b2, double L) {
  if (b1 == b2) return false;
  if (b1 < b2) return true;
  return L * b1 * b2 > b1 - b2;
}

bool detect_zero_mode(const AxisSpec& axis, double degenerate_tol) {
  axis.validate();
  double b1 = axis.beta_lo(), b2 = axis.beta_hi();
  return std::abs(b2 - b1 / (1.0 + b1 * axis.length)) <= degenerate_tol;
}

std::pair<double, double> positive_root_interval(const AxisSpec& axis, int k) {
  double L = axis.length;
  double b1 = axis.beta_lo(), b2 = axis.beta_hi();
  if (b1 > b2) {
    // optional extra root in (0, pi/2L) when L < (b1 - b2)/(b1 b2)
    bool extra = (b2 == 0.0) || (L * b1 * b2 < b1 - b2);
    int shift = extra ? 0 : 1;
    int m = k + shift;
    if (m == 0) return {0.0, 0.5 * kPi / L};
    return {m * kPi / L, (m + 0.5) * kPi / L};
  }
  return {(k + 0.5) * kPi / L, (k + 1.0) * kPi / L};
}

Eigen::ArrayXd solve_positive_eigenvalues(const AxisSpec& axis, int count, double tol) {
  axis.validate();
  if (count < 1) throw ValidationError("solve_positive_eigenvalues: count must be >= 1");
  if (!(tol > 0.0 && tol <= 1e-6))
    throw ValidationError("solve_positive_eigenvalues: tol must be in (0, 1e-6]");
  double L = axis.length;
  double b1 = axis.beta_lo(), b2 = axis.beta_hi();
  Eigen::ArrayXd roots(count);
  if (b1 == b2) {
    // RHS is identically zero: tan(lam L) = 0 exactly at lam = k pi / L.
    for (int k = 0; k < count; ++k) roots[k] = (k + 1) * kPi / L;
    return roots;
  }
  auto f = [&](double lam) { return s_pos(lam, L, b1, b2); };
  for (int k = 0; k < count; ++k) {
    auto [lo, hi] = positive_root_interval(axis, k);
    // s(0) = 0 is the trivial zero, not a mode; nudge the left endpoint.
    if (lo == 0.0) lo = std::min(1e-18 / L, 0.5 * hi);
    roots[k] = solve_bracketed(f, lo, hi, f(lo), f(hi), tol, L, 200,
                               "solve_positive_eigenvalues", k);
  }
  return roots;
}

std::optional<double> solve_negative_eigenvalue(const AxisSpec& axis, double tol) {
  axis.validate();
  if (!(tol > 0.0 && tol <= 1e-6))
    throw ValidationError("solve_negative_eigenvalue: tol must be in (0, 1e-6]");
  double L = axis.length;
  double b1 = axis.beta_lo(), b2 = axis.beta_hi();
  if (!negative_root_exists(b1, b2, L)) return std::nullopt;
  auto f = [&](double lam) { return s_neg(lam, L, b1, b2); };
  double g = std::sqrt(b1 * b2);
  double lo, hi, flo, fhi;
  if (b1 < b2) {
    // root in (sqrt(b1 b2), inf): expand the upper end until the sign flips;
    // tanh saturates at 1 so a crossing is guaranteed.
    lo = g;
    flo = g > 0.0 ? g * (b2 - b1) : f(std::min(1e-18 / L, 1.0));
    if (g == 0.0) lo = std::min(1e-18 / L, 1.0);
    double step = 1.0 / L;
    hi = lo + step;
    fhi = f(hi);
    int doublings = 0;
    while ((fhi > 0) == (flo > 0)) {
      if (++doublings > 60)
        throw SolverError("solve_negative_eigenvalue: no sign change within expansion budget");
      lo = hi;
      flo = fhi;
      step *= 2.0;
      hi += step;
      fhi = f(hi);
    }
  } else {
    // b1 > b2 with L above threshold: root in (0, sqrt(b1 b2)).
    lo = g * 1e-18;
    hi = g;
    flo = f(lo);
    fhi = -g * (b1 - b2);
  }
  return solve_bracketed(f, lo, hi, flo, fhi, tol, L, 300, "solve_negative_eigenvalue", 0);
}

EigenSpectrum solve_spectrum(const AxisSpec& axis, int count, const SolveOptions& opt) {
  EigenSpectrum spec;
  spec.axis = axis;
  spec.zero_mode = detect_zero_mode(axis, opt.degenerate_tol);
  spec.lambdas = solve_positive_eigenvalues(axis, count, opt.tol);
  // At the degenerate point the would-be hyperbolic root merges into the
  // zero mode; keep exactly one of the two.
  spec.negative_root = spec.zero_mode ? std::nullopt : solve_negative_eigenvalue(axis, opt.tol);
  return spec;
}

double positive_root_residual(const AxisSpec& axis, double lam) {
  double L = axis.length;
  double b1 = axis.beta_lo(), b2 = axis.beta_hi();
  double s = s_pos(lam, L, b1, b2);
  double ds = L * std::cos(lam * L) * (b1 * b2 + lam * lam) + 2.0 * lam * std::sin(lam * L) +
              L * std::sin(lam * L) * lam * (b1 - b2) - std::cos(lam * L) * (b1 - b2);
  return std::abs(s) / std::max(std::abs(ds) / L, 1e-300);  // in lam*L units
}

double negative_root_residual(const AxisSpec& axis, double lam) {
  double L = axis.length;
  double b1 = axis.beta_lo(), b2 = axis.beta_hi();
  double th = std::tanh(lam * L);
  double s = s_neg(lam, L, b1, b2);
  double ds = L * (1.0 - th * th) * (b1 * b2 - lam * lam) - 2.0 * lam * th - (b1 - b2);
  return std::abs(s) / std::max(std::abs(ds) / L, 1e-300);
}

}  // namespace aerosol
