#pragma once

#include "aerosol/source.hpp"

namespace aerosol {

/// Closed-form spatial integral of mode n over the sampler slice
/// [center - edge/2, center + edge/2], including e^{-K lam^2 t} / lam.
double psi_pos(const EigenSpectrum& spec, int n, double center, double edge, double t);
std::optional<double> psi_neg(const EigenSpectrum& spec, double center, double edge, double t);

/// Space-time integral of the exhalation concentration over the sampler
/// cuboid and the window [sample_end - sampling_time, sample_end],
/// normalized by Q. The planar source uses the square surrogate so both
/// cross-section axes integrate in closed form; equal-area by default. Truncation ringing can leave
/// values of order +-1e-10 where the front has not arrived; callers feeding
/// the detector clamp at zero.
double sampled_concentration(const Room& room, const ExhalationSource& src,
                             const SamplerSpec& sampler,
                             PlanarSurrogate s = PlanarSurrogate::equal_area_square,
                             int modes = 200, const SourceQuadrature& quad = {});

/// Standard-Gaussian right tail Q(x) = erfc(x / sqrt(2)) / 2.
double q_function(double x);

/// Maximum-likelihood threshold eta gamma c_samp / 2 (equal priors).
double ml_threshold(const DetectorSpec& det, double c_samp);

/// Miss probability of the equal-prior ML rule; accepts either detector
/// parameterization and cross-validates when both are present.
double miss_detection_probability(const DetectorSpec& det, double c_samp);

double db_to_linear(double db);

}  // namespace aerosol
