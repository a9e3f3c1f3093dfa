#include "kin/cweno.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace kin {

namespace {

struct Expo {
  int p, q;
};
// Basis order: 1, x, y, x^2, xy, y^2 in scaled local coordinates.
const Expo kExpo[6] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Raw scaled monomial and its derivatives on cell i.
double raw_mono(const Cell& c, const Point2& x, int l) {
  const double xi = (x.x - c.barycenter.x) / c.h;
  const double eta = (x.y - c.barycenter.y) / c.h;
  return ipow(xi, kExpo[l].p) * ipow(eta, kExpo[l].q);
}

double raw_mono_deriv(const Cell& c, const Point2& x, int l, int bx, int by) {
  const int p = kExpo[l].p, q = kExpo[l].q;
  if (bx > p || by > q) return 0.0;
  double coef = 1.0;
  for (int k = 0; k < bx; ++k) coef *= (p - k);
  for (int k = 0; k < by; ++k) coef *= (q - k);
  const double xi = (x.x - c.barycenter.x) / c.h;
  const double eta = (x.y - c.barycenter.y) / c.h;
  return coef * ipow(xi, p - bx) * ipow(eta, q - by) / ipow(c.h, bx + by);
}

// Mean of cell i's basis function l over stencil member (cell j shifted).
double basis_mean_over(const PolyMesh& mesh, const CellRecOp& op, int i, int l,
                       const StencilEntry& se) {
  const Cell& ci = mesh.cells[i];
  const Cell& cj = mesh.cells[se.cell];
  double s = 0.0;
  for (const auto& qp : cj.qp) s += qp.w * raw_mono(ci, qp.p + se.shift, l);
  return s / cj.area - op.mono_mean[l];
}

}  // namespace

RecOps build_rec_ops(const PolyMesh& mesh, int M) {
  if (mesh.quad_degree < M)
    throw std::invalid_argument("build_rec_ops: quadrature degree below basis degree");
  if (mesh.stencil_M != M)
    throw std::invalid_argument("build_rec_ops: stencils were built for a different degree");
  RecOps ops;
  ops.M = M;
  ops.nb = basis_size(M);
  ops.cells.resize(mesh.num_cells());

  const int nb = ops.nb;
  for (int i = 0; i < mesh.num_cells(); ++i) {
    const Cell& cell = mesh.cells[i];
    CellRecOp& op = ops.cells[i];
    op.nb = nb;

    op.mono_mean.assign(nb, 0.0);
    for (int l = 1; l < nb; ++l) {
      double s = 0.0;
      for (const auto& qp : cell.qp) s += qp.w * raw_mono(cell, qp.p, l);
      op.mono_mean[l] = s / cell.area;
    }

    const int ns = static_cast<int>(cell.stencil.size());
    Eigen::MatrixXd A(ns - 1, nb - 1);
    for (int j = 1; j < ns; ++j)
      for (int l = 1; l < nb; ++l)
        A(j - 1, l - 1) = basis_mean_over(mesh, op, i, l, cell.stencil[j]);

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    cod.setThreshold(1e-10);
    Eigen::MatrixXd pinv;
    if (cod.rank() < nb - 1 && M == 2) {
      // Rank fallback: fit only the linear part on the same stencil.
      op.degraded = true;
      ops.fallback_cells++;
      Eigen::MatrixXd Alin = A.leftCols(2);
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> codl(Alin);
      Eigen::MatrixXd pl = codl.pseudoInverse();
      pinv = Eigen::MatrixXd::Zero(nb - 1, ns - 1);
      pinv.topRows(2) = pl;
    } else {
      pinv = cod.pseudoInverse();
    }
    op.pinv.resize(static_cast<std::size_t>(nb - 1) * (ns - 1));
    for (int r = 0; r < nb - 1; ++r)
      for (int c = 0; c < ns - 1; ++c) op.pinv[static_cast<std::size_t>(r) * (ns - 1) + c] = pinv(r, c);

    // Sector linears: interpolate the two neighbor cell averages exactly.
    op.nsec = static_cast<int>(cell.sectors.size());
    op.sec_inv.resize(op.nsec);
    op.sec_ok.assign(op.nsec, 0);
    int n_ok = 0;
    for (int s = 0; s < op.nsec; ++s) {
      double B[4];
      for (int r = 0; r < 2; ++r)
        for (int l = 0; l < 2; ++l)
          B[r * 2 + l] = basis_mean_over(mesh, op, i, l + 1, cell.sectors[s][r + 1]);
      const double det = B[0] * B[3] - B[1] * B[2];
      const double scale = std::abs(B[0]) + std::abs(B[1]) + std::abs(B[2]) + std::abs(B[3]);
      if (std::abs(det) <= 1e-10 * scale * scale) continue;
      op.sec_inv[s] = {B[3] / det, -B[1] / det, -B[2] / det, B[0] / det};
      op.sec_ok[s] = 1;
      n_ok++;
    }
    op.lamL.assign(op.nsec, 0.0);
    if (n_ok == 0) {
      op.lam0 = 1.0;
    } else {
      op.lam0 = 0.8;
      for (int s = 0; s < op.nsec; ++s)
        if (op.sec_ok[s]) op.lamL[s] = 0.2 / n_ok;
    }

    // Jiang-Shu quadratic form over the non-constant coefficients.
    op.sigma_form.assign(static_cast<std::size_t>(nb - 1) * (nb - 1), 0.0);
    std::vector<std::array<int, 2>> betas = {{1, 0}, {0, 1}};
    if (M == 2) {
      betas.push_back({2, 0});
      betas.push_back({1, 1});
      betas.push_back({0, 2});
    }
    for (const auto& b : betas) {
      const double hpow = ipow(cell.h, 2 * (b[0] + b[1]) - 2);
      for (const auto& qp : cell.qp) {
        double d[6];
        for (int l = 1; l < nb; ++l) d[l] = raw_mono_deriv(cell, qp.p, l, b[0], b[1]);
        for (int a = 1; a < nb; ++a)
          for (int c = 1; c < nb; ++c)
            op.sigma_form[static_cast<std::size_t>(a - 1) * (nb - 1) + (c - 1)] +=
                hpow * qp.w * d[a] * d[c];
      }
    }
  }
  return ops;
}

void eval_basis(const PolyMesh& mesh, const RecOps& ops, int cell, const Point2& x, double* phi) {
  const Cell& c = mesh.cells[cell];
  const CellRecOp& op = ops.cells[cell];
  phi[0] = 1.0;
  for (int l = 1; l < ops.nb; ++l) phi[l] = raw_mono(c, x, l) - op.mono_mean[l];
}

double oscillation_indicator(const RecOps& ops, int cell, std::span<const double> coef) {
  const CellRecOp& op = ops.cells[cell];
  const int nb = op.nb;
  double s = 0.0;
  for (int a = 1; a < nb; ++a)
    for (int c = 1; c < nb; ++c)
      s += op.sigma_form[static_cast<std::size_t>(a - 1) * (nb - 1) + (c - 1)] * coef[a] * coef[c];
  return s;
}

std::vector<double> nonlinear_weights(std::span<const double> sigma, std::span<const double> lam,
                                      const CwenoConfig& cfg) {
  std::vector<double> w(sigma.size());
  double tot = 0.0;
  for (std::size_t s = 0; s < sigma.size(); ++s) {
    double t = sigma[s] + cfg.eps_w;
    double tp = 1.0;
    for (int k = 0; k < cfg.r; ++k) tp *= t;
    w[s] = lam[s] / tp;
    tot += w[s];
  }
  for (auto& x : w) x /= tot;
  return w;
}

CellPolys reconstruct_cell_reference(const PolyMesh& mesh, const RecOps& ops,
                                     const CwenoConfig& cfg, int cell, const double* data,
                                     int ncomp, int comp) {
  const Cell& c = mesh.cells[cell];
  const CellRecOp& op = ops.cells[cell];
  const int nb = op.nb;
  const int ns = static_cast<int>(c.stencil.size());
  const double fbar = data[static_cast<std::size_t>(cell) * ncomp + comp];

  CellPolys out;
  out.popt.assign(nb, 0.0);
  out.popt[0] = fbar;
  for (int l = 1; l < nb; ++l) {
    double s = 0.0;
    for (int j = 1; j < ns; ++j) {
      const double dj =
          data[static_cast<std::size_t>(c.stencil[j].cell) * ncomp + comp] - fbar;
      s += op.pinv[static_cast<std::size_t>(l - 1) * (ns - 1) + (j - 1)] * dj;
    }
    out.popt[l] = s;
  }

  out.sec.assign(op.nsec, {0.0, 0.0});
  for (int s = 0; s < op.nsec; ++s) {
    if (!op.sec_ok[s]) continue;
    const double d1 =
        data[static_cast<std::size_t>(c.sectors[s][1].cell) * ncomp + comp] - fbar;
    const double d2 =
        data[static_cast<std::size_t>(c.sectors[s][2].cell) * ncomp + comp] - fbar;
    out.sec[s] = {op.sec_inv[s][0] * d1 + op.sec_inv[s][1] * d2,
                  op.sec_inv[s][2] * d1 + op.sec_inv[s][3] * d2};
  }

  out.p0.assign(nb, 0.0);
  out.p0[0] = fbar;
  for (int l = 1; l < nb; ++l) {
    double s = out.popt[l];
    if (l <= 2)
      for (int sec = 0; sec < op.nsec; ++sec) s -= op.lamL[sec] * out.sec[sec][l - 1];
    out.p0[l] = s / op.lam0;
  }

  out.sigma.assign(1 + op.nsec, 0.0);
  out.sigma[0] = oscillation_indicator(ops, cell, out.p0);
  for (int s = 0; s < op.nsec; ++s) {
    if (!op.sec_ok[s]) continue;
    std::vector<double> lin(nb, 0.0);
    lin[1] = out.sec[s][0];
    lin[2] = out.sec[s][1];
    out.sigma[1 + s] = oscillation_indicator(ops, cell, lin);
  }

  std::vector<double> lam(1 + op.nsec);
  lam[0] = op.lam0;
  for (int s = 0; s < op.nsec; ++s) lam[1 + s] = op.lamL[s];
  if (cfg.frozen_weights) {
    out.omega = lam;
  } else {
    // Dropped sectors keep omega = 0 because their lambda is 0.
    out.omega = nonlinear_weights(out.sigma, lam, cfg);
  }

  out.fw.assign(nb, 0.0);
  out.fw[0] = fbar;
  for (int l = 1; l < nb; ++l) {
    double s = out.omega[0] * out.p0[l];
    if (l <= 2)
      for (int sec = 0; sec < op.nsec; ++sec) s += out.omega[1 + sec] * out.sec[sec][l - 1];
    out.fw[l] = s;
  }
  return out;
}

void reconstruct_field(const PolyMesh& mesh, const RecOps& ops, const CwenoConfig& cfg,
                       const double* data, int ncomp, RecField& out, const WorkerPool& pool) {
  const int nb = ops.nb;
  out.nb = nb;
  out.ncomp = ncomp;
  out.coef.resize(static_cast<std::size_t>(mesh.num_cells()) * nb * ncomp);

  pool.parallel_for(mesh.num_cells(), [&](int c0, int c1) {
    std::vector<double> diffs;   // (ns-1) x ncomp
    std::vector<double> popt;    // (nb-1) x ncomp
    std::vector<double> p0;      // (nb-1) x ncomp
    std::vector<double> qsec;    // nsec x 2 x ncomp
    std::vector<double> sig;     // (1+nsec) x ncomp
    std::vector<double> wsum;    // ncomp
    for (int i = c0; i < c1; ++i) {
      const Cell& cell = mesh.cells[i];
      const CellRecOp& op = ops.cells[i];
      const int ns = static_cast<int>(cell.stencil.size());
      const int nsec = op.nsec;
      const double* fc = data + static_cast<std::size_t>(i) * ncomp;

      diffs.resize(static_cast<std::size_t>(ns - 1) * ncomp);
      for (int j = 1; j < ns; ++j) {
        const double* fj = data + static_cast<std::size_t>(cell.stencil[j].cell) * ncomp;
        double* row = diffs.data() + static_cast<std::size_t>(j - 1) * ncomp;
        for (int c = 0; c < ncomp; ++c) row[c] = fj[c] - fc[c];
      }

      popt.assign(static_cast<std::size_t>(nb - 1) * ncomp, 0.0);
      {
        using RM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        Eigen::Map<const RM> D(diffs.data(), ns - 1, ncomp);
        Eigen::Map<const RM> P(op.pinv.data(), nb - 1, ns - 1);
        Eigen::Map<RM> O(popt.data(), nb - 1, ncomp);
        O.noalias() = P * D;
      }

      qsec.assign(static_cast<std::size_t>(nsec) * 2 * ncomp, 0.0);
      for (int s = 0; s < nsec; ++s) {
        if (!op.sec_ok[s]) continue;
        const double* d1 =
            data + static_cast<std::size_t>(cell.sectors[s][1].cell) * ncomp;
        const double* d2 =
            data + static_cast<std::size_t>(cell.sectors[s][2].cell) * ncomp;
        double* q1 = qsec.data() + (static_cast<std::size_t>(s) * 2 + 0) * ncomp;
        double* q2 = qsec.data() + (static_cast<std::size_t>(s) * 2 + 1) * ncomp;
        const auto& inv = op.sec_inv[s];
        for (int c = 0; c < ncomp; ++c) {
          const double e1 = d1[c] - fc[c];
          const double e2 = d2[c] - fc[c];
          q1[c] = inv[0] * e1 + inv[1] * e2;
          q2[c] = inv[2] * e1 + inv[3] * e2;
        }
      }

      // Central candidate by difference.
      p0.resize(static_cast<std::size_t>(nb - 1) * ncomp);
      const double inv_lam0 = 1.0 / op.lam0;
      for (int l = 1; l < nb; ++l) {
        const double* src = popt.data() + static_cast<std::size_t>(l - 1) * ncomp;
        double* dst = p0.data() + static_cast<std::size_t>(l - 1) * ncomp;
        if (l <= 2) {
          for (int c = 0; c < ncomp; ++c) {
            double s = src[c];
            for (int sec = 0; sec < nsec; ++sec)
              s -= op.lamL[sec] * qsec[(static_cast<std::size_t>(sec) * 2 + (l - 1)) * ncomp + c];
            dst[c] = s * inv_lam0;
          }
        } else {
          for (int c = 0; c < ncomp; ++c) dst[c] = src[c] * inv_lam0;
        }
      }

      // Oscillation indicators.
      sig.assign(static_cast<std::size_t>(1 + nsec) * ncomp, 0.0);
      {
        double* s0 = sig.data();
        for (int a = 1; a < nb; ++a)
          for (int b = 1; b < nb; ++b) {
            const double S = op.sigma_form[static_cast<std::size_t>(a - 1) * (nb - 1) + (b - 1)];
            if (S == 0.0) continue;
            const double* ca = p0.data() + static_cast<std::size_t>(a - 1) * ncomp;
            const double* cb = p0.data() + static_cast<std::size_t>(b - 1) * ncomp;
            for (int c = 0; c < ncomp; ++c) s0[c] += S * ca[c] * cb[c];
          }
        const double S11 = op.sigma_form[0];
        const double S12 = op.sigma_form[1];
        const double S22 = op.sigma_form[static_cast<std::size_t>(nb - 1) + 1];
        for (int s = 0; s < nsec; ++s) {
          if (!op.sec_ok[s]) continue;
          const double* q1 = qsec.data() + (static_cast<std::size_t>(s) * 2 + 0) * ncomp;
          const double* q2 = qsec.data() + (static_cast<std::size_t>(s) * 2 + 1) * ncomp;
          double* ss = sig.data() + static_cast<std::size_t>(1 + s) * ncomp;
          for (int c = 0; c < ncomp; ++c)
            ss[c] = S11 * q1[c] * q1[c] + 2.0 * S12 * q1[c] * q2[c] + S22 * q2[c] * q2[c];
        }
      }

      // Nonlinear weights, turned in place into normalized omegas.
      auto wt = [&](double lam, double s) {
        if (cfg.frozen_weights) return lam;
        double t = s + cfg.eps_w;
        double tp = 1.0;
        for (int k = 0; k < cfg.r; ++k) tp *= t;
        return lam / tp;
      };
      for (int c = 0; c < ncomp; ++c) sig[c] = wt(op.lam0, sig[c]);
      for (int s = 0; s < nsec; ++s) {
        double* ss = sig.data() + static_cast<std::size_t>(1 + s) * ncomp;
        if (!op.sec_ok[s]) {
          for (int c = 0; c < ncomp; ++c) ss[c] = 0.0;
          continue;
        }
        for (int c = 0; c < ncomp; ++c) ss[c] = wt(op.lamL[s], ss[c]);
      }
      wsum.assign(ncomp, 0.0);
      for (int s = 0; s < 1 + nsec; ++s) {
        const double* ss = sig.data() + static_cast<std::size_t>(s) * ncomp;
        for (int c = 0; c < ncomp; ++c) wsum[c] += ss[c];
      }
      for (int s = 0; s < 1 + nsec; ++s) {
        double* ss = sig.data() + static_cast<std::size_t>(s) * ncomp;
        for (int c = 0; c < ncomp; ++c) ss[c] /= wsum[c];
      }

      // Hybridize.
      double* out0 = out.coef.data() + static_cast<std::size_t>(i) * nb * ncomp;
      for (int c = 0; c < ncomp; ++c) out0[c] = fc[c];
      for (int l = 1; l < nb; ++l) {
        double* dst = out0 + static_cast<std::size_t>(l) * ncomp;
        const double* c0v = p0.data() + static_cast<std::size_t>(l - 1) * ncomp;
        for (int c = 0; c < ncomp; ++c) dst[c] = sig[c] * c0v[c];
        if (l <= 2) {
          for (int s = 0; s < nsec; ++s) {
            if (!op.sec_ok[s]) continue;
            const double* ws = sig.data() + static_cast<std::size_t>(1 + s) * ncomp;
            const double* qv = qsec.data() + (static_cast<std::size_t>(s) * 2 + (l - 1)) * ncomp;
            for (int c = 0; c < ncomp; ++c) dst[c] += ws[c] * qv[c];
          }
        }
      }
    }
  });
}

double eval_rec(const PolyMesh& mesh, const RecOps& ops, const RecField& rec, int cell,
                const Point2& x, int comp) {
  double phi[6];
  eval_basis(mesh, ops, cell, x, phi);
  double s = 0.0;
  for (int l = 0; l < rec.nb; ++l) s += rec.cell_coef(cell, l)[comp] * phi[l];
  return s;
}

FaceEvalTable build_face_eval(const PolyMesh& mesh, const RecOps& ops) {
  FaceEvalTable t;
  t.nb = ops.nb;
  t.nqp = mesh.faces.empty() ? 0 : static_cast<int>(mesh.faces[0].qp.size());
  const std::size_t stride = static_cast<std::size_t>(t.nqp) * t.nb;
  t.left.assign(mesh.faces.size() * stride, 0.0);
  t.right.assign(mesh.faces.size() * stride, 0.0);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    for (int q = 0; q < t.nqp; ++q) {
      eval_basis(mesh, ops, face.left, face.qp[q].p, &t.left[f * stride + q * t.nb]);
      if (face.right >= 0)
        eval_basis(mesh, ops, face.right, face.qp[q].p - face.shift,
                   &t.right[f * stride + q * t.nb]);
    }
  }
  return t;
}

}  // namespace kin
