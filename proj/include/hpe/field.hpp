#pragma once

#include <complex>
#include <vector>

#include "hpe/grid.hpp"

namespace hpe {

using cplx = std::complex<double>;

// Horizontal velocity coefficients a[c][m][n][k], c in {0,1} for (u, v).
// Wavevectors are FFT-ordered; the field is kept conjugate-symmetric in
// (m, n) and zero on the Nyquist columns.
struct SpectralField {
    GridPtr grid;
    std::vector<cplx> a;

    SpectralField() = default;
    explicit SpectralField(GridPtr g)
        : grid(std::move(g)), a(2ul * grid->M * grid->N * grid->K) {}

    size_t idx(int c, int im, int in, int k) const {
        const auto& g = *grid;
        return ((static_cast<size_t>(c) * g.M + im) * g.N + in) * g.K + k;
    }
    cplx& at(int c, int im, int in, int k) { return a[idx(c, im, in, k)]; }
    const cplx& at(int c, int im, int in, int k) const { return a[idx(c, im, in, k)]; }

    void zero() { std::fill(a.begin(), a.end(), cplx(0.0)); }
};

// Depth-averaged velocity, one complex pair per wavevector.
struct BarotropicField {
    GridPtr grid;
    std::vector<cplx> a;

    explicit BarotropicField(GridPtr g) : grid(std::move(g)), a(2ul * grid->M * grid->N) {}
    size_t idx(int c, int im, int in) const {
        return (static_cast<size_t>(c) * grid->M + im) * grid->N + in;
    }
    cplx& at(int c, int im, int in) { return a[idx(c, im, in)]; }
    const cplx& at(int c, int im, int in) const { return a[idx(c, im, in)]; }
};

// Surface pressure coefficients, one complex value per wavevector.
struct PressureField {
    GridPtr grid;
    std::vector<cplx> a;

    PressureField() = default;
    explicit PressureField(GridPtr g)
        : grid(std::move(g)), a(static_cast<size_t>(grid->M) * grid->N) {}
    size_t idx(int im, int in) const { return static_cast<size_t>(im) * grid->N + in; }
    cplx& at(int im, int in) { return a[idx(im, in)]; }
    const cplx& at(int im, int in) const { return a[idx(im, in)]; }
    void zero() { std::fill(a.begin(), a.end(), cplx(0.0)); }
};

// Vertical velocity in the cosine-profile system sqrt(2/h) cos(mu_k (z+h)).
struct WField {
    GridPtr grid;
    std::vector<cplx> a;

    explicit WField(GridPtr g)
        : grid(std::move(g)), a(static_cast<size_t>(grid->M) * grid->N * grid->K) {}
    size_t idx(int im, int in, int k) const {
        return (static_cast<size_t>(im) * grid->N + in) * grid->K + k;
    }
    cplx& at(int im, int in, int k) { return a[idx(im, in, k)]; }
    const cplx& at(int im, int in, int k) const { return a[idx(im, in, k)]; }
};

// Real collocation values on the dealiased grid, [c][i][j][q].
struct PhysicalField {
    GridPtr grid;
    int ncomp;
    std::vector<double> v;

    PhysicalField(GridPtr g, int ncomp)
        : grid(std::move(g)),
          ncomp(ncomp),
          v(static_cast<size_t>(ncomp) * grid->padM * grid->padN * grid->Q) {}
    size_t idx(int c, int i, int j, int q) const {
        const auto& g = *grid;
        return ((static_cast<size_t>(c) * g.padM + i) * g.padN + j) * g.Q + q;
    }
    double& at(int c, int i, int j, int q) { return v[idx(c, i, j, q)]; }
    double at(int c, int i, int j, int q) const { return v[idx(c, i, j, q)]; }
};

// Enforce conjugate symmetry and zero the Nyquist columns in place.
void hermitianize(SpectralField& f);

// True when a(-m,-n) = conj(a(m,n)) holds to within tol and Nyquist is zero.
bool is_hermitian(const SpectralField& f, double tol);

// Squared L2 norm over the channel, sum of |a|^2.
double norm_l2_sq(const SpectralField& f);

// Squared L2 norm of the full gradient, sum of lambda |a|^2.
double norm_grad_sq(const SpectralField& f);

// L2 inner product (f, g), real part of the coefficient pairing.
double inner_l2(const SpectralField& f, const SpectralField& g);

void vertical_average(const SpectralField& f, BarotropicField& out);

// The real degrees of freedom of the conjugate-symmetric subspace: one real
// pair per (k, component) for the self-conjugate (0,0) wavevector, a complex
// pair for every other wavevector with m > 0 or (m = 0, n > 0).  Order is
// m outer, then n, then k, then component, matching the checkpoint layout.
size_t dof_count(const Grid& g);
void pack_dofs(const SpectralField& f, std::vector<double>& x);
void unpack_dofs(const std::vector<double>& x, SpectralField& f);

}  // namespace hpe
