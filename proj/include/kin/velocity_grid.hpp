#pragma once

#include <span>
#include <vector>

#include "kin/mesh.hpp"

namespace kin {

// Cell-centered Cartesian velocity nodes on [vmin,vmax]^2, with the midpoint
// quadrature weight w = dv^2 used for all discrete moments.
struct VelocityGrid {
  double vmin = 0.0, vmax = 0.0;
  int n_axis = 0;
  double dv = 0.0;
  double w = 0.0;
  std::vector<double> axis;          // per-axis node coordinates
  std::vector<double> vx, vy, vsq;   // per node (x fastest)

  int size() const { return n_axis * n_axis; }
  int index(int ix, int iy) const { return iy * n_axis + ix; }
};

struct MacroState {
  double rho = 0.0;
  double ux = 0.0, uy = 0.0;
  double theta = 0.0;  // R*T with R = 1

  double pressure() const { return rho * theta; }
  double energy() const { return rho * theta + 0.5 * rho * (ux * ux + uy * uy); }  // d = 2
  double speed() const;
};

VelocityGrid build_grid(double vmin, double vmax, int n_axis);

MacroState moments(std::span<const double> f, const VelocityGrid& grid);

// E_k = rho/(2 pi theta) exp(-|u - v_k|^2/(2 theta)), evaluated separably.
void discrete_maxwellian(const MacroState& U, const VelocityGrid& grid, std::span<double> out);
std::vector<double> discrete_maxwellian(const MacroState& U, const VelocityGrid& grid);

double max_speed(const VelocityGrid& grid);

// Conserved vector used by the stage-moment updates.
struct ConsVars {
  double rho = 0.0, mx = 0.0, my = 0.0, E = 0.0;
  ConsVars& operator+=(const ConsVars& o) {
    rho += o.rho;
    mx += o.mx;
    my += o.my;
    E += o.E;
    return *this;
  }
};
ConsVars conserved_moments(std::span<const double> f, const VelocityGrid& grid);
MacroState macro_from_conserved(const ConsVars& c);
ConsVars conserved_from_macro(const MacroState& m);

// Solver state: cell averages of f, cell-major storage.
struct DistributionField {
  const PolyMesh* mesh = nullptr;
  const VelocityGrid* grid = nullptr;
  std::vector<double> data;

  DistributionField() = default;
  DistributionField(const PolyMesh& m, const VelocityGrid& g)
      : mesh(&m), grid(&g), data(static_cast<std::size_t>(m.num_cells()) * g.size(), 0.0) {}

  std::span<double> cell(int i) {
    return {data.data() + static_cast<std::size_t>(i) * grid->size(),
            static_cast<std::size_t>(grid->size())};
  }
  std::span<const double> cell(int i) const {
    return {data.data() + static_cast<std::size_t>(i) * grid->size(),
            static_cast<std::size_t>(grid->size())};
  }
};

}  // namespace kin
