#include "kin/collision.hpp"

#include <fftw3.h>

#include <cassert>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace kin {

namespace {

std::mutex g_fftw_mutex;

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

int mode_of(int mu, int n) { return mu < n / 2 ? mu : mu - n; }

void check_match(const VelocityGrid& grid, const SpectralKernel& k) {
  if (grid.n_axis != k.n || std::abs(grid.vmax - k.vmax) > 1e-12 * std::abs(k.vmax))
    throw std::invalid_argument("collision: velocity grid does not match the kernel");
}

}  // namespace

SpectralKernel precompute_kernel(const VelocityGrid& grid, int A, double b0) {
  if (A < 4) throw std::invalid_argument("precompute_kernel: A must be >= 4");
  if (std::abs(grid.vmin + grid.vmax) > 1e-12 * std::abs(grid.vmax))
    throw std::invalid_argument("precompute_kernel: velocity box must be symmetric");
  SpectralKernel k;
  k.n = grid.n_axis;
  k.A = A;
  k.b0 = b0;
  k.lambda = 2.0 / (3.0 + std::sqrt(2.0));
  k.R = k.lambda * M_PI;
  k.vmax = grid.vmax;
  k.phys_scale = (grid.vmax / M_PI) * (grid.vmax / M_PI);

  const int n = k.n;
  const double btilde = 2.0 * b0;
  const double line = 2.0 * k.R;  // length of each Carleman line segment
  k.alpha.resize(static_cast<std::size_t>(A) * n * n);
  k.alpha_perp.resize(static_cast<std::size_t>(A) * n * n);
  k.diag.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int p = 0; p < A; ++p) {
    const double th = (p + 0.5) * M_PI / A;
    const double ex = std::cos(th), ey = std::sin(th);
    double* ap = k.alpha.data() + static_cast<std::size_t>(p) * n * n;
    double* aq = k.alpha_perp.data() + static_cast<std::size_t>(p) * n * n;
    for (int muy = 0; muy < n; ++muy) {
      const int ly = mode_of(muy, n);
      for (int mux = 0; mux < n; ++mux) {
        const int lx = mode_of(mux, n);
        const std::size_t idx = static_cast<std::size_t>(muy) * n + mux;
        // Two orthogonal line integrals of e^{i r xi} over [-R, R].
        ap[idx] = (M_PI / A) * btilde * line * sinc(k.R * (lx * ex + ly * ey));
        aq[idx] = line * sinc(k.R * (-lx * ey + ly * ex));
      }
    }
    // The unpaired -n/2 Nyquist row breaks the l <-> -l pairing that makes
    // the zero-frequency mode of Q cancel; drop it from the kernel so mass
    // conservation is exact for arbitrary data.
    for (int muy = 0; muy < n; ++muy)
      for (int mux = 0; mux < n; ++mux)
        if (mux == n / 2 || muy == n / 2) {
          const std::size_t idx = static_cast<std::size_t>(muy) * n + mux;
          ap[idx] = 0.0;
          aq[idx] = 0.0;
        }
    for (std::size_t idx = 0; idx < k.diag.size(); ++idx) k.diag[idx] += ap[idx] * aq[idx];
  }
  return k;
}

double kernel_mode(const SpectralKernel& k, int lx, int ly, int mx, int my) {
  const double btilde = 2.0 * k.b0;
  const double line = 2.0 * k.R;
  double s = 0.0;
  for (int p = 0; p < k.A; ++p) {
    const double th = (p + 0.5) * M_PI / k.A;
    const double ex = std::cos(th), ey = std::sin(th);
    s += (M_PI / k.A) * btilde * line * sinc(k.R * (lx * ex + ly * ey)) * line *
         sinc(k.R * (-mx * ey + my * ex));
  }
  return s;
}

SpectralWorkspace::SpectralWorkspace(int n_) : n(n_) {
  const std::size_t sz = static_cast<std::size_t>(n) * n;
  F = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(sz));
  T = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(sz));
  U = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(sz));
  W = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(sz));
  acc.resize(sz);
  std::lock_guard<std::mutex> lock(g_fftw_mutex);
  plan_fwd = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(T),
                              reinterpret_cast<fftw_complex*>(F), FFTW_FORWARD, FFTW_MEASURE);
  plan_bwd = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(T),
                              reinterpret_cast<fftw_complex*>(U), FFTW_BACKWARD, FFTW_MEASURE);
}

SpectralWorkspace::~SpectralWorkspace() {
  if (plan_fwd || plan_bwd) {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    if (plan_fwd) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd));
    if (plan_bwd) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd));
  }
  fftw_free(F);
  fftw_free(T);
  fftw_free(U);
  fftw_free(W);
}

SpectralWorkspace::SpectralWorkspace(SpectralWorkspace&& o) noexcept
    : n(o.n), F(o.F), T(o.T), U(o.U), W(o.W), acc(std::move(o.acc)), plan_fwd(o.plan_fwd),
      plan_bwd(o.plan_bwd) {
  o.F = o.T = o.U = o.W = nullptr;
  o.plan_fwd = o.plan_bwd = nullptr;
}

void bgk_operator(std::span<const double> f, const VelocityGrid& grid, std::span<double> out) {
  const MacroState U = moments(f, grid);
  if (U.rho == 0.0) {
    for (int k = 0; k < grid.size(); ++k) out[k] = 0.0;
    return;
  }
  discrete_maxwellian(U, grid, out);
  const double nu = U.rho;
  for (int k = 0; k < grid.size(); ++k) out[k] = nu * (out[k] - f[k]);
}

void boltzmann_spectral(std::span<const double> f, const VelocityGrid& grid,
                        const SpectralKernel& kernel, SpectralWorkspace& ws,
                        std::span<double> out) {
  check_match(grid, kernel);
  if (ws.n != kernel.n) throw std::invalid_argument("boltzmann_spectral: workspace mismatch");
  const int n = kernel.n;
  const std::size_t sz = static_cast<std::size_t>(n) * n;
  const double inv_n2 = 1.0 / static_cast<double>(sz);

  for (std::size_t j = 0; j < sz; ++j) ws.T[j] = f[j];
  fftw_execute_dft(static_cast<fftw_plan>(ws.plan_fwd), reinterpret_cast<fftw_complex*>(ws.T),
                   reinterpret_cast<fftw_complex*>(ws.F));

  // Gain: one filtered convolution pair per direction, multiplied pointwise
  // in velocity space. Cell-centered grid phases cancel between the forward
  // and backward transforms for real even multipliers.
  for (std::size_t j = 0; j < sz; ++j) ws.acc[j] = 0.0;
  for (int p = 0; p < kernel.A; ++p) {
    const double* ap = kernel.alpha_p(p);
    const double* aq = kernel.alpha_perp_p(p);
    for (std::size_t j = 0; j < sz; ++j) ws.T[j] = ap[j] * ws.F[j];
    fftw_execute_dft(static_cast<fftw_plan>(ws.plan_bwd), reinterpret_cast<fftw_complex*>(ws.T),
                     reinterpret_cast<fftw_complex*>(ws.U));
    for (std::size_t j = 0; j < sz; ++j) ws.T[j] = aq[j] * ws.F[j];
    fftw_execute_dft(static_cast<fftw_plan>(ws.plan_bwd), reinterpret_cast<fftw_complex*>(ws.T),
                     reinterpret_cast<fftw_complex*>(ws.W));
    for (std::size_t j = 0; j < sz; ++j) ws.acc[j] += ws.U[j] * ws.W[j];
  }
  // Loss: diagonal weights; the synthesized f itself is the input data.
  for (std::size_t j = 0; j < sz; ++j) ws.T[j] = kernel.diag[j] * ws.F[j];
  fftw_execute_dft(static_cast<fftw_plan>(ws.plan_bwd), reinterpret_cast<fftw_complex*>(ws.T),
                   reinterpret_cast<fftw_complex*>(ws.U));

  const double gain_scale = kernel.phys_scale * inv_n2 * inv_n2;
  const double loss_scale = kernel.phys_scale * inv_n2;
#ifndef NDEBUG
  double max_imag = 0.0, max_val = 0.0;
#endif
  for (std::size_t j = 0; j < sz; ++j) {
    const std::complex<double> q = gain_scale * ws.acc[j] - loss_scale * f[j] * ws.U[j];
    out[j] = q.real();
#ifndef NDEBUG
    max_imag = std::max(max_imag, std::abs(q.imag()));
    max_val = std::max(max_val, std::abs(q.real()));
#endif
  }
#ifndef NDEBUG
  assert(max_imag <= 1e-10 * std::max(max_val, 1e-30));
#endif
}

void boltzmann_direct(std::span<const double> f, const VelocityGrid& grid,
                      const SpectralKernel& kernel, std::span<double> out, bool force) {
  check_match(grid, kernel);
  const int n = kernel.n;
  if (n > 16 && !force)
    throw std::invalid_argument("boltzmann_direct: n > 16 is a cost guard; pass force to override");
  const std::size_t sz = static_cast<std::size_t>(n) * n;
  using cplx = std::complex<double>;

  // 1D phase tables for the cell-centered scaled nodes.
  std::vector<cplx> ph(static_cast<std::size_t>(n) * n);  // ph[mu][j] = e^{-i l_mu vt_j}
  for (int mu = 0; mu < n; ++mu) {
    const int l = mode_of(mu, n);
    for (int j = 0; j < n; ++j) {
      const double vt = -M_PI + (j + 0.5) * (2.0 * M_PI / n);
      ph[static_cast<std::size_t>(mu) * n + j] = std::exp(cplx(0.0, -l * vt));
    }
  }

  // fhat_l = (1/n^2) sum_j f_j e^{-i l. vt_j}, split per axis.
  std::vector<cplx> partial(static_cast<std::size_t>(n) * n);  // [mux][jy]
  for (int mux = 0; mux < n; ++mux)
    for (int jy = 0; jy < n; ++jy) {
      cplx s = 0.0;
      for (int jx = 0; jx < n; ++jx)
        s += f[static_cast<std::size_t>(jy) * n + jx] * ph[static_cast<std::size_t>(mux) * n + jx];
      partial[static_cast<std::size_t>(mux) * n + jy] = s;
    }
  std::vector<cplx> fhat(sz);
  for (int muy = 0; muy < n; ++muy)
    for (int mux = 0; mux < n; ++mux) {
      cplx s = 0.0;
      for (int jy = 0; jy < n; ++jy)
        s += partial[static_cast<std::size_t>(mux) * n + jy] *
             ph[static_cast<std::size_t>(muy) * n + jy];
      fhat[static_cast<std::size_t>(muy) * n + mux] = s / static_cast<double>(sz);
    }

  // Kernel modes B_F(l,m) from the shared tables.
  std::vector<double> bf(sz * sz);
  for (std::size_t lm = 0; lm < sz; ++lm)
    for (std::size_t mm = 0; mm < sz; ++mm) {
      double s = 0.0;
      for (int p = 0; p < kernel.A; ++p) s += kernel.alpha_p(p)[lm] * kernel.alpha_perp_p(p)[mm];
      bf[lm * sz + mm] = s;
    }

  // Wrap into [-n/2, n/2). On the cell-centered grid e^{i n vt_j} = -1, so a
  // wrapped axis flips the sign of the aliased product.
  auto wrap = [n](int d, double& sign) {
    if (d < -n / 2) {
      d += n;
      sign = -sign;
    }
    if (d >= n / 2) {
      d -= n;
      sign = -sign;
    }
    return d;
  };
  auto mu_of = [n](int l) { return l >= 0 ? l : l + n; };

  // Circular double sum, matching the no-padding FFT evaluation.
  std::vector<cplx> qhat(sz, 0.0);
  for (int ky = -n / 2; ky < n / 2; ++ky)
    for (int kx = -n / 2; kx < n / 2; ++kx) {
      cplx s = 0.0;
      for (int ly = -n / 2; ly < n / 2; ++ly)
        for (int lx = -n / 2; lx < n / 2; ++lx) {
          double sign = 1.0;
          const int mx = wrap(kx - lx, sign), my = wrap(ky - ly, sign);
          const std::size_t li = static_cast<std::size_t>(mu_of(ly)) * n + mu_of(lx);
          const std::size_t mi = static_cast<std::size_t>(mu_of(my)) * n + mu_of(mx);
          const double beta = bf[li * sz + mi] - kernel.diag[mi];
          s += sign * beta * fhat[li] * fhat[mi];
        }
      qhat[static_cast<std::size_t>(mu_of(ky)) * n + mu_of(kx)] = s;
    }

  // Synthesize at the nodes.
  for (int jy = 0; jy < n; ++jy)
    for (int jx = 0; jx < n; ++jx) {
      cplx s = 0.0;
      for (int muy = 0; muy < n; ++muy)
        for (int mux = 0; mux < n; ++mux)
          s += qhat[static_cast<std::size_t>(muy) * n + mux] *
               std::conj(ph[static_cast<std::size_t>(mux) * n + jx] *
                         ph[static_cast<std::size_t>(muy) * n + jy]);
      out[static_cast<std::size_t>(jy) * n + jx] = kernel.phys_scale * s.real();
    }
}

void penalization_gap(std::span<const double> f, const VelocityGrid& grid,
                      const SpectralKernel& kernel, SpectralWorkspace& ws,
                      std::span<double> out) {
  boltzmann_spectral(f, grid, kernel, ws, out);
  std::vector<double> bgk(grid.size());
  bgk_operator(f, grid, bgk);
  for (int k = 0; k < grid.size(); ++k) out[k] -= bgk[k];
}

}  // namespace kin
