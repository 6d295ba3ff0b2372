#include "aerosol/types.hpp"

#include <cmath>
#include <sstream>

namespace aerosol {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

std::string fmt(const char* name, const char* field, double v) {
  std::ostringstream os;
  os << name << "." << field << " = " << v;
  return os.str();
}

}  // namespace

void AxisSpec::validate(const char* name) const {
  require(std::isfinite(length) && length > 0.0, fmt(name, "length", length) + ": must be > 0");
  require(std::isfinite(diffusivity) && diffusivity > 0.0,
          fmt(name, "diffusivity", diffusivity) + ": must be > 0");
  require(std::isfinite(deposition_lo) && deposition_lo >= 0.0,
          fmt(name, "deposition_lo", deposition_lo) + ": must be >= 0");
  require(std::isfinite(deposition_hi) && deposition_hi >= 0.0,
          fmt(name, "deposition_hi", deposition_hi) + ": must be >= 0");
  require(std::isfinite(beta_lo()) && std::isfinite(beta_hi()),
          std::string(name) + ": beta = d/K must be finite");
}

void Room::validate() const {
  x.validate("room.x");
  y.validate("room.y");
  z.validate("room.z");
}

void PointSource::validate(const Room& room) const {
  require(strength > 0.0, "source.strength: must be > 0");
  const char* names[3] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) {
    double L = room.axis(i).length;
    require(position[i] > 0.0 && position[i] < L,
            std::string("source.position.") + names[i] +
                ": delta source must lie strictly inside the room");
  }
}

void ExhalationSource::validate(const Room& room) const {
  require(strength_rate > 0.0, "source.strength: must be > 0");
  require(end > start, "source.end: must be > source.start");
  require(radius >= 0.0, "source.radius: must be >= 0");
  require(plane_x > 0.0 && plane_x < room.x.length,
          "source.plane_x: source plane must lie inside the room");
  double margin = std::min(std::min(center_y, room.y.length - center_y),
                           std::min(center_z, room.z.length - center_z));
  require(radius <= margin,
          "source.radius: disc must fit inside the y-z cross-section "
          "(r_c <= min(y_p, L_y - y_p, z_p, L_z - z_p))");
}

void SamplerSpec::validate(const Room& room) const {
  require(sampling_time >= 0.0, "sampler.interval: must be >= 0");
  const char* names[3] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) {
    require(edges[i] > 0.0, std::string("sampler.edges.") + names[i] + ": must be > 0");
    double lo = center[i] - 0.5 * edges[i];
    double hi = center[i] + 0.5 * edges[i];
    require(lo >= 0.0 && hi <= room.axis(i).length,
            std::string("sampler.center.") + names[i] + ": cuboid must lie inside the room");
  }
}

void DetectorSpec::validate() const {
  bool direct = eta && gamma && sigma2;
  bool ratio = gamma_ratio && q_p;
  require(direct || ratio,
          "detector: needs either (eta, gamma, sigma2) or (gamma_ratio, q_p)");
  if (eta) require(*eta > 0.0 && *eta <= 1.0, "detector.eta: must be in (0,1]");
  if (gamma) require(*gamma > 0.0 && *gamma <= 1.0, "detector.gamma: must be in (0,1]");
  if (sigma2) require(*sigma2 > 0.0, "detector.sigma2: must be > 0");
  if (gamma_ratio) require(*gamma_ratio > 0.0, "detector.gamma_ratio: must be > 0");
  if (q_p) require(*q_p > 0.0, "detector.q_p: must be > 0");
  if (direct && ratio) {
    double implied = *q_p * (*eta * *gamma) * (*eta * *gamma) / (8.0 * *sigma2);
    require(std::abs(implied - *gamma_ratio) <= 1e-12 * std::abs(*gamma_ratio),
            "detector: gamma_ratio inconsistent with q_p (eta gamma)^2 / (8 sigma2)");
  }
}

}  // namespace aerosol
