#pragma once

#include <vector>

#include "hpe/field.hpp"
#include "hpe/grid.hpp"

namespace hpe {

// One 2D real/half-complex FFT pair.  Plans are created unaligned so they can
// run on any buffer; creation and destruction lock the global planner.
class HalfComplexPlan {
  public:
    HalfComplexPlan(int nx, int ny);
    ~HalfComplexPlan();
    HalfComplexPlan(const HalfComplexPlan&) = delete;
    HalfComplexPlan& operator=(const HalfComplexPlan&) = delete;

    // Backward transform; overwrites the half-complex input.
    void c2r(cplx* half, double* real) const;
    // Forward transform, unnormalized; the input is preserved.
    void r2c(double* real, cplx* half) const;

    size_t half_count() const { return static_cast<size_t>(nx) * (ny / 2 + 1); }

    const int nx, ny;

  private:
    void* pc2r_;
    void* pr2c_;
};

// Spectral <-> collocation transforms on the dealiased product grid.
// Horizontal passes use the FFT pair above, vertical passes use the sampled
// eigenfunction tables from the Grid.  Calls share internal scratch, so a
// Transforms instance must not be used from two threads at once; the methods
// parallelize internally over disjoint slabs.
class Transforms {
  public:
    explicit Transforms(const Grid& g);

    // spec is (ncomp, M, N, K) complex, phys is (ncomp, padM, padN, Q) real.
    void synth_sine(const cplx* spec, int ncomp, double* phys) const;
    void synth_cosine(const cplx* spec, int ncomp, double* phys) const;

    // Vertical analysis against a (K, Q) weight table (w_sin, w_prod or
    // w_cosp from the Grid), then horizontal Fourier analysis.  The output is
    // conjugate-symmetric by construction and zero on Nyquist columns.
    void analyze(const double* phys, int ncomp, const double* wtab, cplx* spec) const;

  private:
    void synth(const cplx* spec, int ncomp, const std::vector<double>& basis,
               double* phys) const;
    void ensure_slabs(size_t n) const;

    const Grid& g_;
    HalfComplexPlan plan_;
    mutable std::vector<std::vector<cplx>> half_;  // per-slab FFT scratch
    mutable std::vector<double> slabs_;            // (ncomp K, padM, padN) scratch
};

// Collocation sampler for fluctuation norms on a quartic-exact grid: 2M x 2N
// horizontal points (alias-free for fourth powers of retained modes) and the
// Gauss-Legendre vertical nodes of the diagnostic grid.  Serial on purpose so
// the accumulation order is fixed.
class FineSampler {
  public:
    explicit FineSampler(GridPtr grid);

    // integral over the domain of |v - vbar|^4
    double vtilde_l4_4(const SpectralField& v) const;
    // integral over the domain of |v - vbar|^2
    double vtilde_l2_sq(const SpectralField& v) const;

    const GridPtr grid;

  private:
    void fill_slabs(const SpectralField& v) const;
    double accumulate(const SpectralField& v, bool fourth) const;

    HalfComplexPlan plan_;
    mutable std::vector<cplx> half_;
    mutable std::vector<double> slabs_;  // (2, K, 2M, 2N)
};

}  // namespace hpe
