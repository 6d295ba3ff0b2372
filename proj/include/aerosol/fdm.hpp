#pragma once

#include <Eigen/Core>

#include "aerosol/types.hpp"

namespace aerosol {

/// Crank-Nicolson evolution of the 1-D diffusion equation with deposition
/// Robin walls, closed to second order with ghost nodes:
/// C'(0) = beta_lo C(0), C'(L) = -beta_hi C(L) (outward deposition at both
/// walls; mass is removed, never injected). Node count is the field size;
/// the step is adjusted to divide t_span evenly.
Eigen::ArrayXd fdm_evolve_1d(const AxisSpec& axis, Eigen::ArrayXd field, double t_span,
                             double dt);

/// Dense 3-D field, x fastest: data[i + nx (j + ny k)].
struct Field3 {
  int nx = 0, ny = 0, nz = 0;
  Eigen::ArrayXd data;

  Field3() = default;
  Field3(int nx, int ny, int nz)
      : nx(nx), ny(ny), nz(nz), data(Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(nx) * ny * nz)) {}
  double& at(int i, int j, int k) { return data[i + static_cast<Eigen::Index>(nx) * (j + static_cast<Eigen::Index>(ny) * k)]; }
  double at(int i, int j, int k) const { return data[i + static_cast<Eigen::Index>(nx) * (j + static_cast<Eigen::Index>(ny) * k)]; }
};

/// Locally-one-dimensional splitting: one Crank-Nicolson solve per axis per
/// step. The per-axis operators commute on this constant-coefficient box,
/// so the scheme is second order and evolves tensor-product fields exactly
/// as the product of the 1-D evolutions.
Field3 fdm_evolve_3d(const Room& room, Field3 field, double t_span, double dt, int threads = 1);

/// Trapezoid-rule integrals of the discrete fields (mass checks).
double grid_mass_1d(const Eigen::ArrayXd& field, double h);
double grid_mass_3d(const Field3& field, double hx, double hy, double hz);

}  // namespace aerosol
