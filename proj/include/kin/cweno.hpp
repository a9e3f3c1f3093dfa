#pragma once

#include <array>
#include <span>
#include <vector>

#include "kin/mesh.hpp"
#include "kin/parallel.hpp"

namespace kin {

struct CwenoConfig {
  double lambda0 = 0.8;  // central linear weight; sectors share 1 - lambda0
  double eps_w = 1e-14;
  int r = 4;
  bool frozen_weights = false;  // omega = lambda, used by linearity tests
};

// Geometry-only reconstruction operator for one cell: conservative Taylor
// basis, least-squares pseudo-inverse on the central stencil, interpolatory
// 2x2 solves for the sector linears, and the oscillation-indicator quadratic
// form. Built once, reused for every field component and stage.
struct CellRecOp {
  int nb = 0;                      // basis size of the mesh-wide degree M
  std::vector<double> mono_mean;   // cell means of the raw scaled monomials
  std::vector<double> pinv;        // (nb-1) x (ns-1), row-major
  int nsec = 0;
  std::vector<std::array<double, 4>> sec_inv;  // per-sector inverse (row-major)
  std::vector<char> sec_ok;
  double lam0 = 1.0;
  std::vector<double> lamL;        // per sector, 0 for dropped ones
  std::vector<double> sigma_form;  // (nb-1)^2 quadratic form
  bool degraded = false;           // rank fallback to degree 1 hit this cell
};

struct RecOps {
  int M = 0;
  int nb = 0;
  std::vector<CellRecOp> cells;
  int fallback_cells = 0;  // rank-deficient stencils, logged once by callers
};

RecOps build_rec_ops(const PolyMesh& mesh, int M);

// Basis values phi_l(x) for cell i; phi[0] = 1, the rest are zero-mean.
void eval_basis(const PolyMesh& mesh, const RecOps& ops, int cell, const Point2& x, double* phi);

// Hybridized reconstruction coefficients for all cells and components.
// Layout: coef[(cell*nb + l)*ncomp + c]; row l = 0 carries the cell average.
struct RecField {
  int nb = 1;
  int ncomp = 1;
  std::vector<double> coef;
  const double* cell_coef(int cell, int l) const {
    return coef.data() + (static_cast<std::size_t>(cell) * nb + l) * ncomp;
  }
};

// data layout: data[cell*ncomp + c].
void reconstruct_field(const PolyMesh& mesh, const RecOps& ops, const CwenoConfig& cfg,
                       const double* data, int ncomp, RecField& out, const WorkerPool& pool);

double eval_rec(const PolyMesh& mesh, const RecOps& ops, const RecField& rec, int cell,
                const Point2& x, int comp);

// Scalar single-cell reference path; the vectorized kernel must match it.
struct CellPolys {
  std::vector<double> popt;                 // nb coefficients
  std::vector<std::array<double, 2>> sec;   // per-sector linear coefficients
  std::vector<double> p0;                   // nb coefficients
  std::vector<double> sigma;                // [0] central, then sectors
  std::vector<double> omega;
  std::vector<double> fw;                   // nb hybridized coefficients
};
CellPolys reconstruct_cell_reference(const PolyMesh& mesh, const RecOps& ops,
                                     const CwenoConfig& cfg, int cell, const double* data,
                                     int ncomp, int comp);

// sigma = sum_{1<=|b|<=M} h^(2|b|-2) int_P (d^b p)^2 dx for coefficients in
// the cell basis (entry 0 ignored).
double oscillation_indicator(const RecOps& ops, int cell, std::span<const double> coef);

// omega_s = (lam_s/(sigma_s+eps)^r) / sum, exactly normalized.
std::vector<double> nonlinear_weights(std::span<const double> sigma, std::span<const double> lam,
                                      const CwenoConfig& cfg);

// Basis values at face quadrature points for both sides, precomputed.
struct FaceEvalTable {
  int nb = 0;
  int nqp = 0;
  std::vector<double> left;   // [face][qp][nb]
  std::vector<double> right;  // zeros on boundary faces
  const double* at(const std::vector<double>& side, int face, int qp) const {
    return side.data() + (static_cast<std::size_t>(face) * nqp + qp) * nb;
  }
};
FaceEvalTable build_face_eval(const PolyMesh& mesh, const RecOps& ops);

}  // namespace kin
