#include "kin/velocity_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace kin {

namespace {
constexpr double kVacuumRho = 1e-14;
}

double MacroState::speed() const { return std::sqrt(ux * ux + uy * uy); }

VelocityGrid build_grid(double vmin, double vmax, int n_axis) {
  if (vmax <= vmin) throw std::invalid_argument("build_grid: degenerate bounds");
  if (n_axis < 4 || n_axis % 2 != 0)
    throw std::invalid_argument("build_grid: N_axis must be even and >= 4");
  VelocityGrid g;
  g.vmin = vmin;
  g.vmax = vmax;
  g.n_axis = n_axis;
  g.dv = (vmax - vmin) / n_axis;
  g.w = g.dv * g.dv;
  g.axis.resize(n_axis);
  for (int i = 0; i < n_axis; ++i) g.axis[i] = vmin + (i + 0.5) * g.dv;
  const int n = g.size();
  g.vx.resize(n);
  g.vy.resize(n);
  g.vsq.resize(n);
  for (int iy = 0; iy < n_axis; ++iy)
    for (int ix = 0; ix < n_axis; ++ix) {
      const int k = g.index(ix, iy);
      g.vx[k] = g.axis[ix];
      g.vy[k] = g.axis[iy];
      g.vsq[k] = g.axis[ix] * g.axis[ix] + g.axis[iy] * g.axis[iy];
    }
  return g;
}

ConsVars conserved_moments(std::span<const double> f, const VelocityGrid& g) {
  const int n = g.size();
  double s0 = 0.0, sx = 0.0, sy = 0.0, se = 0.0;
  for (int k = 0; k < n; ++k) {
    const double fk = f[k];
    s0 += fk;
    sx += g.vx[k] * fk;
    sy += g.vy[k] * fk;
    se += g.vsq[k] * fk;
  }
  return {g.w * s0, g.w * sx, g.w * sy, 0.5 * g.w * se};
}

MacroState macro_from_conserved(const ConsVars& c) {
  if (c.rho < kVacuumRho) return {0.0, 0.0, 0.0, 0.0};
  MacroState m;
  m.rho = c.rho;
  m.ux = c.mx / c.rho;
  m.uy = c.my / c.rho;
  // d = 2: E = rho*theta + 0.5*rho*|u|^2
  m.theta = (c.E - 0.5 * (c.mx * c.mx + c.my * c.my) / c.rho) / c.rho;
  return m;
}

ConsVars conserved_from_macro(const MacroState& m) {
  return {m.rho, m.rho * m.ux, m.rho * m.uy, m.energy()};
}

MacroState moments(std::span<const double> f, const VelocityGrid& g) {
  const int n = g.size();
  double s0 = 0.0, sx = 0.0, sy = 0.0;
  for (int k = 0; k < n; ++k) {
    s0 += f[k];
    sx += g.vx[k] * f[k];
    sy += g.vy[k] * f[k];
  }
  const double rho = g.w * s0;
  if (rho < kVacuumRho) return {0.0, 0.0, 0.0, 0.0};
  MacroState m;
  m.rho = rho;
  m.ux = g.w * sx / rho;
  m.uy = g.w * sy / rho;
  // Centered second moment, second pass; non-negative for f >= 0.
  double st = 0.0;
  for (int k = 0; k < n; ++k) {
    const double cx = g.vx[k] - m.ux;
    const double cy = g.vy[k] - m.uy;
    st += (cx * cx + cy * cy) * f[k];
  }
  m.theta = g.w * st / (2.0 * rho);
  return m;
}

void discrete_maxwellian(const MacroState& U, const VelocityGrid& g, std::span<double> out) {
  const int n = g.size();
  if (U.rho == 0.0) {
    for (int k = 0; k < n; ++k) out[k] = 0.0;
    return;
  }
  if (U.theta <= 0.0)
    throw std::invalid_argument("discrete_maxwellian: theta must be positive for rho > 0");
  const double inv2t = 1.0 / (2.0 * U.theta);
  const double amp = U.rho / (2.0 * M_PI * U.theta);
  std::vector<double> gx(g.n_axis), gy(g.n_axis);
  for (int i = 0; i < g.n_axis; ++i) {
    const double dx = g.axis[i] - U.ux;
    const double dy = g.axis[i] - U.uy;
    gx[i] = std::exp(-dx * dx * inv2t);
    gy[i] = std::exp(-dy * dy * inv2t);
  }
  for (int iy = 0; iy < g.n_axis; ++iy) {
    const double ay = amp * gy[iy];
    double* row = out.data() + static_cast<std::size_t>(iy) * g.n_axis;
    for (int ix = 0; ix < g.n_axis; ++ix) row[ix] = ay * gx[ix];
  }
}

std::vector<double> discrete_maxwellian(const MacroState& U, const VelocityGrid& g) {
  std::vector<double> out(g.size());
  discrete_maxwellian(U, g, out);
  return out;
}

double max_speed(const VelocityGrid& g) {
  double m = 0.0;
  for (int k = 0; k < g.size(); ++k) m = std::max(m, g.vsq[k]);
  return std::sqrt(m);
}

}  // namespace kin
