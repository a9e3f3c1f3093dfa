#pragma once

#include <complex>
#include <span>
#include <vector>

#include "kin/velocity_grid.hpp"

namespace kin {

enum class CollisionModel { bgk, boltzmann };

struct CollisionConfig {
  CollisionModel model = CollisionModel::bgk;
  double eps = 1.0;  // Knudsen number, >= 0
};

// Angular kernel constant for which the isotropic-scattering homogeneous
// relaxation with S(t) = 1 - exp(-t/8)/2 is an exact solution.
inline double default_b0() { return 1.0 / (2.0 * M_PI); }

// Precomputed mode decomposition of the Carleman-form collision kernel for
// Maxwell pseudo-molecules: A uniformly spaced directions in [0, pi), one
// sinc-type line-integral factor per direction and side, plus the diagonal
// loss weights. Depends only on the grid shape and b0, never on f.
struct SpectralKernel {
  int n = 0;  // modes per axis, equals the velocity grid N_axis
  int A = 0;
  double b0 = 0.0;
  double lambda = 0.0;  // 2/(3+sqrt(2))
  double R = 0.0;       // support radius lambda*pi on the scaled box
  double vmax = 0.0;    // physical half-width; the grid must be symmetric
  double phys_scale = 0.0;  // (vmax/pi)^2, undoes the box scaling

  // Arrays in FFT layout (mode l = mu < n/2 ? mu : mu - n per axis), all real.
  std::vector<double> alpha;       // A * n^2 gain factors, direction-major
  std::vector<double> alpha_perp;  // A * n^2
  std::vector<double> diag;        // n^2 loss weights B_F(m,m)

  const double* alpha_p(int p) const { return alpha.data() + static_cast<std::size_t>(p) * n * n; }
  const double* alpha_perp_p(int p) const {
    return alpha_perp.data() + static_cast<std::size_t>(p) * n * n;
  }
};

SpectralKernel precompute_kernel(const VelocityGrid& grid, int A = 8, double b0 = default_b0());

// Closed-form kernel mode, shared by the fast and the direct path.
double kernel_mode(const SpectralKernel& k, int lx, int ly, int mx, int my);

// Per-worker FFT buffers and plans (plans are created under a global lock).
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(int n);
  ~SpectralWorkspace();
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;
  SpectralWorkspace(SpectralWorkspace&& o) noexcept;

  int n = 0;
  std::complex<double>*F, *T, *U, *W;
  std::vector<std::complex<double>> acc;
  void* plan_fwd = nullptr;
  void* plan_bwd = nullptr;
};

// Relaxation operator nu*(E[U(f)] - f) with nu = rho. No 1/eps factor; the
// time integrator owns the stiffness.
void bgk_operator(std::span<const double> f, const VelocityGrid& grid, std::span<double> out);

// Fast spectral evaluation of the Boltzmann operator (no 1/eps factor):
// forward FFT, A filtered convolution pairs for the gain term, one diagonal
// convolution for the loss term, inverse transforms, physical un-scaling.
void boltzmann_spectral(std::span<const double> f, const VelocityGrid& grid,
                        const SpectralKernel& kernel, SpectralWorkspace& ws,
                        std::span<double> out);

// O(N^4) direct evaluation of the same spectral quadrature with the identical
// kernel modes; the slow oracle for the FFT path. Refuses n > 16 unless forced.
void boltzmann_direct(std::span<const double> f, const VelocityGrid& grid,
                      const SpectralKernel& kernel, std::span<double> out, bool force = false);

// G_P(f) = Q_boltzmann(f) - Q_bgk(f), both without 1/eps.
void penalization_gap(std::span<const double> f, const VelocityGrid& grid,
                      const SpectralKernel& kernel, SpectralWorkspace& ws, std::span<double> out);

}  // namespace kin
