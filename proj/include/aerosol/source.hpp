#pragma once

#include "aerosol/greens.hpp"
#include "aerosol/quadrature.hpp"
#include "aerosol/types.hpp"

namespace aerosol {

/// Square stand-ins for the circular exhalation plane: inscribed square
/// (lower bound), equal-area square, circumscribed square (upper bound).
enum class PlanarSurrogate { lower_square, equal_area_square, upper_square };

double surrogate_side(PlanarSurrogate s, double radius);

struct SourceQuadrature {
  double abs_tol = 1e-10;  // on C/Q
  int max_depth = 48;
  int gauss_nodes = 32;    // z0 nodes for the circular integral
};

/// l-hat closed forms (the e^{K lam^2 tau} factor is cancelled in the
/// evaluators, as in greens). Exposed for the quadrature-oracle tests.
double lhat_pos(const EigenSpectrum& spec_y, int n, double y_lo, double y_hi, double q);
std::optional<double> lhat_neg(const EigenSpectrum& spec_y, double y_lo, double y_hi, double q);

/// Concentration field of a continuous planar exhalation; spectra are
/// solved once per construction. All outputs are normalized by the emission
/// rate (C/Q).
class ExhalationField {
 public:
  ExhalationField(const Room& room, const ExhalationSource& src, int modes,
                  const SolveOptions& opt = {}, const SourceQuadrature& quad = {});

  /// Exact circular-plane integration (tau integral of a Gauss-Legendre
  /// z0 integral of the closed-form y-integrated series).
  double circular(double x, double y, double z, double t) const;

  /// Square-plane surrogate (tau integral of the fully closed-form series).
  double square(PlanarSurrogate s, double x, double y, double z, double t) const;

  const EigenSpectrum& spectrum(int axis) const { return spectra_[axis]; }
  const ExhalationSource& source() const { return src_; }
  const Room& room() const { return room_; }
  const SourceQuadrature& quadrature() const { return quad_; }

 private:
  double tau_integral(double t, const BoundSeries& fx, const BoundSeries& fy,
                      const BoundSeries& fz) const;

  Room room_;
  ExhalationSource src_;
  SourceQuadrature quad_;
  EigenSpectrum spectra_[3];
  AxisCoeffs x_point_;  // point weights at the source plane
  Eigen::ArrayXd gl_nodes_, gl_weights_;
};

double concentration_circular(const Room& room, const ExhalationSource& src, double x, double y,
                              double z, double t, int modes = 200,
                              const SourceQuadrature& quad = {});
double concentration_square(const Room& room, const ExhalationSource& src, PlanarSurrogate s,
                            double x, double y, double z, double t, int modes = 200,
                            const SourceQuadrature& quad = {});

}  // namespace aerosol
