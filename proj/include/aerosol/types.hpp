#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace aerosol {

/// Config/geometry validation failure. CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Root-finder failure (bracket or iteration budget). CLI exit code 2.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature failure; carries the best estimate and its error bound.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate(estimate), error_bound(error_bound) {}
  double estimate;
  double error_bound;
};

/// One spatial axis of the room: length, diffusivity and the two wall
/// deposition velocities (lo = nu=0 wall, hi = nu=L wall).
struct AxisSpec {
  double length = 1.0;        // L   [m]
  double diffusivity = 1.0;   // K   [m^2/s]
  double deposition_lo = 0.0; // d_1 [m/s]
  double deposition_hi = 0.0; // d_2 [m/s]

  double beta_lo() const { return deposition_lo / diffusivity; }  // [1/m]
  double beta_hi() const { return deposition_hi / diffusivity; }  // [1/m]

  void validate(const char* name = "axis") const;
};

struct Room {
  AxisSpec x, y, z;

  const AxisSpec& axis(int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double volume() const { return x.length * y.length * z.length; }
  void validate() const;
};

/// Instantaneous point release. The delta source must sit strictly inside
/// the room; a wall-sited delta contradicts the interior-source model.
struct PointSource {
  std::array<double, 3> position{};  // (x_p, y_p, z_p) [m]
  double strength = 1.0;             // Q_p
  double release_time = 0.0;         // t_0 [s]

  void validate(const Room& room) const;
};

/// Continuous planar exhalation: a disc of radius r_c on the plane x = x_p,
/// emitting uniformly over [start, end].
struct ExhalationSource {
  double plane_x = 0.0;             // x_p [m]
  double center_y = 0.0;            // y_p [m]
  double center_z = 0.0;            // z_p [m]
  double radius = 0.0;              // r_c [m]
  double strength_rate = 1.0;       // Q per unit area-time (normalized)
  double start = 0.0;               // t_0 [s]
  double end = 0.0;                 // t_e [s]

  void validate(const Room& room) const;
};

/// Cuboid air sampler; the sampling window is [sample_end - sampling_time,
/// sample_end].
struct SamplerSpec {
  std::array<double, 3> center{};   // (x_d, y_d, z_d) [m]
  std::array<double, 3> edges{};    // (a_x, a_y, a_z) [m]
  double sampling_time = 0.0;       // T_s [s]
  double sample_end = 0.0;          // t [s]

  double volume() const { return edges[0] * edges[1] * edges[2]; }
  void validate(const Room& room) const;
};

/// Detector noise/efficiency model. Either (eta, gamma, sigma2) or
/// (gamma_ratio, q_p) must be given; when both are present they must agree:
/// gamma_ratio = q_p (eta gamma)^2 / (8 sigma2).
struct DetectorSpec {
  std::optional<double> eta;          // sampling efficiency in (0,1]
  std::optional<double> gamma;        // binding probability in (0,1]
  std::optional<double> sigma2;       // noise variance > 0
  std::optional<double> gamma_ratio;  // Gamma, linear (not dB)
  std::optional<double> q_p;          // source strength paired with Gamma

  void validate() const;
};

}  // namespace aerosol
