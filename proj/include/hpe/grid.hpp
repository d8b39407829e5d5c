#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

namespace hpe {

class Transforms;

// Discretization descriptor plus every precomputed table the solver needs.
//
// Horizontal: Fourier modes exp(2*pi*i*(m*x + n*y)) with m in [-M/2, M/2)
// stored in FFT order; the Nyquist column |m| = M/2 is pinned to zero so the
// retained set is closed under conjugation.  Vertical: the mixed
// Neumann(top)/Dirichlet(bottom) eigenfunctions
//     psi_k(z) = sqrt(2/h) * sin(mu_k (z+h)),   mu_k = (2k+1) pi / (2h),
// which are L2(-h,0)-orthonormal and diagonalize -d^2/dz^2.
class Grid {
  public:
    int M, N, K;      // horizontal modes per axis, vertical modes
    double h;         // channel depth
    int padM, padN;   // dealiased physical grid (>= 3M/2, even)
    int Q;            // vertical quadrature points for the product grid
    int Qd;           // Gauss-Legendre points for diagnostic integrals

    std::vector<double> mu;    // mu[k]
    std::vector<double> cbar;  // vertical average of psi_k: sqrt(2/h)*2/((2k+1)pi)
    std::vector<double> zq;    // midpoint nodes: -h + h(2j+1)/(2Q)
    std::vector<double> wq;    // midpoint weights: h/Q

    // Sampled eigenfunctions on the product grid, [k*Q + j].
    std::vector<double> sin_q;  // psi_k(zq[j])
    std::vector<double> cos_q;  // phi_k(zq[j]) = sqrt(2/h) cos(mu_k (z+h))

    // Analysis weights, each [k*Q + j]; coefficient_k = sum_j w[k*Q+j] * f(zq[j]).
    std::vector<double> w_sin;   // midpoint rule against psi_k; exact on span{psi}
    std::vector<double> w_prod;  // exact on pointwise products psi*psi and phi*phi
    std::vector<double> w_cosp;  // exact on span{phi} (cosine profiles)

    // Gauss-Legendre diagnostic grid on (-h, 0), [k*Qd + j] for the tables.
    std::vector<double> zg, wg;
    std::vector<double> sin_g, cos_g;

    double lambda(int im, int in, int k) const {
        const double kx = wave_m(im), ky = wave_n(in);
        const double four_pi_sq = 4.0 * pi * pi;
        return four_pi_sq * (kx * kx + ky * ky) + mu[k] * mu[k];
    }

    // Signed integer wavenumbers for FFT-ordered indices.
    double wave_m(int im) const { return im <= M / 2 ? im : im - M; }
    double wave_n(int in) const { return in <= N / 2 ? in : in - N; }

    // Nyquist columns carry no data; they are zeroed after every transform.
    bool is_nyquist(int im, int in) const { return im == M / 2 || in == N / 2; }

    // Index of the conjugate partner (-m, -n).
    int conj_m(int im) const { return im == 0 ? 0 : M - im; }
    int conj_n(int in) const { return in == 0 ? 0 : N - in; }

    const Transforms& tf() const;

    // Qreq = 0 picks the default product quadrature max(2K, 8); an explicit
    // value must be at least 2K.
    static std::shared_ptr<const Grid> create(int M, int N, int K, double h, int Qreq = 0);

    ~Grid();

    static constexpr double pi = 3.141592653589793238462643383279502884;

  private:
    Grid() = default;
    mutable std::unique_ptr<Transforms> tf_;
    mutable std::once_flag tf_once_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int M, int N, int K, double h, int Qreq = 0);

// Gauss-Legendre nodes/weights on (a, b), ascending nodes.
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

}  // namespace hpe
