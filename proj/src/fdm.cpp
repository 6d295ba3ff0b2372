#include "aerosol/fdm.hpp"

#include <cmath>
#include <vector>

#include "aerosol/parallel.hpp"

namespace aerosol {

namespace {

using RowMap = Eigen::Map<Eigen::ArrayXd>;
using ConstRowMap = Eigen::Map<const Eigen::ArrayXd>;

// Tridiagonal Crank-Nicolson operator for one axis: (I - a Ah) x = (I + a Ah) c,
// where Ah is the h^2-scaled Laplacian with ghost-node Robin closure
//   row 0:    2 c1 - (2 + 2 h b1) c0
//   row n-1:  2 c_{n-2} - (2 + 2 h b2) c_{n-1}
// (deposition signs at both walls; see fdm.hpp).
struct CnLine {
  double rd0, ru0;   // RHS row 0
  double rl, rd, ru; // RHS interior rows
  double rln, rdn;   // RHS last row
  std::vector<double> cp;         // Thomas c' (scalar per row)
  std::vector<double> inv_denom;  // 1 / (diag - lower c')
  std::vector<double> lower;      // LHS sub-diagonal
  int n;

  CnLine(const AxisSpec& axis, int n_, double dt) : n(n_) {
    double h = axis.length / (n - 1);
    double a = axis.diffusivity * dt / (2.0 * h * h);
    double d0 = -(2.0 + 2.0 * h * axis.beta_lo());
    double dn = -(2.0 + 2.0 * h * axis.beta_hi());
    rd0 = 1.0 + a * d0;
    ru0 = 2.0 * a;
    rl = a;
    rd = 1.0 - 2.0 * a;
    ru = a;
    rln = 2.0 * a;
    rdn = 1.0 + a * dn;
    std::vector<double> diag(n), up(n);
    lower.assign(n, -a);
    diag[0] = 1.0 - a * d0;
    up[0] = -2.0 * a;
    for (int i = 1; i < n - 1; ++i) {
      diag[i] = 1.0 + 2.0 * a;
      up[i] = -a;
    }
    lower[n - 1] = -2.0 * a;
    diag[n - 1] = 1.0 - a * dn;
    cp.resize(n);
    inv_denom.resize(n);
    cp[0] = up[0] / diag[0];
    inv_denom[0] = 1.0 / diag[0];
    for (int i = 1; i < n; ++i) {
      double denom = diag[i] - lower[i] * cp[i - 1];
      inv_denom[i] = 1.0 / denom;
      if (i < n - 1) cp[i] = up[i] / denom;
    }
  }

  // One CN step along a contiguous line.
  void step_line(double* c, std::vector<double>& dp) const {
    dp[0] = (rd0 * c[0] + ru0 * c[1]) * inv_denom[0];
    for (int i = 1; i < n - 1; ++i) {
      double rhs = rl * c[i - 1] + rd * c[i] + ru * c[i + 1];
      dp[i] = (rhs - lower[i] * dp[i - 1]) * inv_denom[i];
    }
    dp[n - 1] = (rln * c[n - 2] + rdn * c[n - 1] - lower[n - 1] * dp[n - 2]) * inv_denom[n - 1];
    c[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) c[i] = dp[i] - cp[i] * c[i + 1];
  }

  // One CN step along the row direction for a whole pencil bundle: row j is
  // the contiguous range base[j*stride .. j*stride+m). Vectorizes the Thomas
  // recurrence across the bundle; dp must be (m x n), column-major.
  void step_rows(double* base, Eigen::Index stride, int m, Eigen::ArrayXXd& dp) const {
    auto row = [&](int j) { return ConstRowMap(base + j * stride, m); };
    dp.col(0) = (rd0 * row(0) + ru0 * row(1)) * inv_denom[0];
    for (int j = 1; j < n - 1; ++j)
      dp.col(j) = (rl * row(j - 1) + rd * row(j) + ru * row(j + 1) - lower[j] * dp.col(j - 1)) *
                  inv_denom[j];
    dp.col(n - 1) =
        (rln * row(n - 2) + rdn * row(n - 1) - lower[n - 1] * dp.col(n - 2)) * inv_denom[n - 1];
    RowMap(base + (n - 1) * stride, m) = dp.col(n - 1);
    for (int j = n - 2; j >= 0; --j)
      RowMap(base + j * stride, m) = dp.col(j) - cp[j] * ConstRowMap(base + (j + 1) * stride, m);
  }
};

int step_count(double t_span, double dt) {
  if (!(t_span > 0.0) || !(dt > 0.0)) throw ValidationError("fdm: t_span and dt must be > 0");
  return std::max(1, static_cast<int>(std::llround(t_span / dt)));
}

}  // namespace

Eigen::ArrayXd fdm_evolve_1d(const AxisSpec& axis, Eigen::ArrayXd field, double t_span,
                             double dt) {
  axis.validate();
  if (field.size() < 3) throw ValidationError("fdm_evolve_1d: need at least 3 nodes");
  if (!field.isFinite().all()) throw ValidationError("fdm_evolve_1d: initial field not finite");
  if (t_span == 0.0) return field;
  int steps = step_count(t_span, dt);
  CnLine line(axis, static_cast<int>(field.size()), t_span / steps);
  std::vector<double> dp(field.size());
  for (int s = 0; s < steps; ++s) {
    line.step_line(field.data(), dp);
    if (!std::isfinite(field[0])) throw SolverError("fdm_evolve_1d: evolution diverged");
  }
  return field;
}

Field3 fdm_evolve_3d(const Room& room, Field3 field, double t_span, double dt, int threads) {
  room.validate();
  if (field.nx < 3 || field.ny < 3 || field.nz < 3)
    throw ValidationError("fdm_evolve_3d: need at least 3 nodes per axis");
  if (static_cast<Eigen::Index>(field.nx) * field.ny * field.nz != field.data.size())
    throw ValidationError("fdm_evolve_3d: field size does not match dimensions");
  if (t_span == 0.0) return field;
  int steps = step_count(t_span, dt);
  double dte = t_span / steps;
  CnLine lx(room.x, field.nx, dte);
  CnLine ly(room.y, field.ny, dte);
  CnLine lz(room.z, field.nz, dte);
  const int nx = field.nx, ny = field.ny, nz = field.nz;
  const Eigen::Index sy = nx, sz = static_cast<Eigen::Index>(nx) * ny;
  double* base = field.data.data();

  for (int s = 0; s < steps; ++s) {
    // x: contiguous lines, parallel over (j, k)
    parallel_for(0, ny * nz, threads, [&](int jk) {
      thread_local std::vector<double> dp;
      dp.resize(nx);
      lx.step_line(base + static_cast<Eigen::Index>(jk) * nx, dp);
    });
    // y: rows of length nx with stride nx, parallel over z-planes
    parallel_for(0, nz, threads, [&](int k) {
      thread_local Eigen::ArrayXXd dp;
      dp.resize(nx, ny);
      ly.step_rows(base + sz * k, sy, nx, dp);
    });
    // z: rows are whole (x, y) planes with stride nx*ny; process the plane
    // in column blocks to bound the Thomas workspace and parallelize
    {
      const Eigen::Index block = 4096;
      int nblocks = static_cast<int>((sz + block - 1) / block);
      parallel_for(0, nblocks, threads, [&](int wblk) {
        thread_local Eigen::ArrayXXd dp;
        Eigen::Index lo = wblk * block;
        int m = static_cast<int>(std::min(block, sz - lo));
        if (m <= 0) return;
        dp.resize(m, nz);
        lz.step_rows(base + lo, sz, m, dp);
      });
    }
    if (!std::isfinite(base[0])) throw SolverError("fdm_evolve_3d: evolution diverged");
  }
  return field;
}

double grid_mass_1d(const Eigen::ArrayXd& field, double h) {
  double s = field.sum() - 0.5 * (field[0] + field[field.size() - 1]);
  return s * h;
}

double grid_mass_3d(const Field3& f, double hx, double hy, double hz) {
  double total = 0.0;
  for (int k = 0; k < f.nz; ++k) {
    double wk = (k == 0 || k == f.nz - 1) ? 0.5 : 1.0;
    for (int j = 0; j < f.ny; ++j) {
      double wj = (j == 0 || j == f.ny - 1) ? 0.5 : 1.0;
      double row = 0.0;
      for (int i = 0; i < f.nx; ++i) {
        double wi = (i == 0 || i == f.nx - 1) ? 0.5 : 1.0;
        row += wi * f.at(i, j, k);
      }
      total += wk * wj * row;
    }
  }
  return total * hx * hy * hz;
}

}  // namespace aerosol
