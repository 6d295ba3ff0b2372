#include "aerosol/detection.hpp"

#include <cmath>

namespace aerosol {

double psi_pos(const EigenSpectrum& spec, int n, double center, double edge, double t) {
  if (n < 0 || n >= spec.count()) throw ValidationError("psi_pos: mode index out of range");
  double lo = center - 0.5 * edge, hi = center + 0.5 * edge;
  if (!(edge >= 0.0 && lo >= 0.0 && hi <= spec.axis.length))
    throw ValidationError("psi_pos: slice must lie inside the axis");
  double lam = spec.lambdas[n];
  double b1 = spec.axis.beta_lo();
  return (std::sin(lam * hi) - std::sin(lam * lo) -
          (b1 / lam) * (std::cos(lam * hi) - std::cos(lam * lo))) /
         lam * std::exp(-spec.axis.diffusivity * lam * lam * t);
}

std::optional<double> psi_neg(const EigenSpectrum& spec, double center, double edge, double t) {
  if (!spec.negative_root) return std::nullopt;
  double lo = center - 0.5 * edge, hi = center + 0.5 * edge;
  if (!(edge >= 0.0 && lo >= 0.0 && hi <= spec.axis.length))
    throw ValidationError("psi_neg: slice must lie inside the axis");
  double lam = *spec.negative_root;
  double b1 = spec.axis.beta_lo();
  return (std::sinh(lam * hi) - std::sinh(lam * lo) +
          (b1 / lam) * (std::cosh(lam * hi) - std::cosh(lam * lo))) /
         lam * std::exp(-spec.axis.diffusivity * lam * lam * t);
}

double sampled_concentration(const Room& room, const ExhalationSource& src,
                             const SamplerSpec& sampler, PlanarSurrogate s, int modes,
                             const SourceQuadrature& quad) {
  room.validate();
  src.validate(room);
  sampler.validate(room);
  if (sampler.sampling_time == 0.0) return 0.0;
  double window_lo = sampler.sample_end - sampler.sampling_time;
  if (sampler.sample_end < src.start)
    throw ValidationError("sampler.window: sampling window ends before the source starts");

  SolveOptions opt;
  EigenSpectrum sx = solve_spectrum(room.x, modes, opt);
  EigenSpectrum sy = solve_spectrum(room.y, modes, opt);
  EigenSpectrum sz = solve_spectrum(room.z, modes, opt);
  double half = 0.5 * surrogate_side(s, src.radius);
  AxisCoeffs cx = point_source_coeffs(sx, src.plane_x, src.strength_rate);
  AxisCoeffs cy = interval_source_coeffs(sy, src.center_y - half, src.center_y + half, 1.0);
  AxisCoeffs cz = interval_source_coeffs(sz, src.center_z - half, src.center_z + half, 1.0);
  BoundSeries fx = bind_slice(cx, sampler.center[0] - 0.5 * sampler.edges[0],
                              sampler.center[0] + 0.5 * sampler.edges[0]);
  BoundSeries fy = bind_slice(cy, sampler.center[1] - 0.5 * sampler.edges[1],
                              sampler.center[1] + 0.5 * sampler.edges[1]);
  BoundSeries fz = bind_slice(cz, sampler.center[2] - 0.5 * sampler.edges[2],
                              sampler.center[2] + 0.5 * sampler.edges[2]);

  // Inner tau tolerance leaves room for the outer window integral.
  double inner_tol = 0.1 * quad.abs_tol / std::max(sampler.sampling_time, 1.0);
  auto outer = [&](double t) {
    double hi = std::min(t, src.end);
    if (hi <= src.start) return 0.0;
    auto inner = [&](double tau) {
      double dt = t - tau;
      return fx.eval(dt) * fy.eval(dt) * fz.eval(dt);
    };
    return quad_adaptive(inner, src.start, hi, inner_tol, quad.max_depth).value;
  };
  return quad_adaptive(outer, window_lo, sampler.sample_end, quad.abs_tol, quad.max_depth).value;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double ml_threshold(const DetectorSpec& det, double c_samp) {
  det.validate();
  if (c_samp < 0.0) throw ValidationError("ml_threshold: c_samp must be >= 0");
  if (det.eta && det.gamma) return 0.5 * *det.eta * *det.gamma * c_samp;
  throw ValidationError("ml_threshold: needs eta and gamma");
}

double miss_detection_probability(const DetectorSpec& det, double c_samp) {
  det.validate();
  if (c_samp < 0.0) throw ValidationError("miss_detection_probability: c_samp must be >= 0");
  // Exact tail of the equal-prior ML rule: C_r = eta gamma C + N misses when
  // N <= -eta gamma C / 2, i.e. Q(eta gamma C / (2 sigma)). In terms of
  // Gamma = q_p (eta gamma)^2 / (8 sigma^2) the argument is
  // sqrt(2 Gamma C^2 / q_p).
  if (det.eta && det.gamma && det.sigma2)
    return q_function(*det.eta * *det.gamma * c_samp / (2.0 * std::sqrt(*det.sigma2)));
  return q_function(std::sqrt(2.0 * *det.gamma_ratio * c_samp * c_samp / *det.q_p));
}

}  // namespace aerosol
