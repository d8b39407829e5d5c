#include "hpe/transforms.hpp"

#include <fftw3.h>

#include <mutex>

#include "hpe/util.hpp"

namespace hpe {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

HalfComplexPlan::HalfComplexPlan(int nx, int ny) : nx(nx), ny(ny) {
    std::vector<double> r(static_cast<size_t>(nx) * ny);
    std::vector<cplx> c(half_count());
    std::lock_guard lk(planner_mutex());
    pc2r_ = fftw_plan_dft_c2r_2d(nx, ny, reinterpret_cast<fftw_complex*>(c.data()), r.data(),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    pr2c_ = fftw_plan_dft_r2c_2d(nx, ny, r.data(), reinterpret_cast<fftw_complex*>(c.data()),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!pc2r_ || !pr2c_) throw std::runtime_error("fftw plan creation failed");
}

HalfComplexPlan::~HalfComplexPlan() {
    std::lock_guard lk(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(pc2r_));
    fftw_destroy_plan(static_cast<fftw_plan>(pr2c_));
}

void HalfComplexPlan::c2r(cplx* half, double* real) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(pc2r_),
                         reinterpret_cast<fftw_complex*>(half), real);
}

void HalfComplexPlan::r2c(double* real, cplx* half) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(pr2c_), real,
                         reinterpret_cast<fftw_complex*>(half));
}

Transforms::Transforms(const Grid& g) : g_(g), plan_(g.padM, g.padN) {
    ensure_slabs(2ul * g.K);
}

void Transforms::ensure_slabs(size_t n) const {
    if (half_.size() < n) {
        half_.resize(n);
        for (auto& buf : half_) buf.resize(plan_.half_count());
        slabs_.resize(n * g_.padM * g_.padN);
    }
}

void Transforms::synth(const cplx* spec, int ncomp, const std::vector<double>& basis,
                       double* phys) const {
    const auto& g = g_;
    const int M = g.M, N = g.N, K = g.K, Q = g.Q;
    const int padM = g.padM, padN = g.padN;
    const size_t slab = static_cast<size_t>(padM) * padN;
    const int hN = padN / 2 + 1;
    ensure_slabs(static_cast<size_t>(ncomp) * K);

    parallel_for(static_cast<size_t>(ncomp) * K, [&](size_t b, size_t e) {
        for (size_t s = b; s < e; ++s) {
            const int c = static_cast<int>(s) / K, k = static_cast<int>(s) % K;
            cplx* H = half_[s].data();
            std::fill(H, H + plan_.half_count(), cplx(0.0));
            for (int im = 0; im < M; ++im) {
                if (im == M / 2) continue;
                const int ip = im <= M / 2 ? im : padM + im - M;
                const cplx* src = spec + ((static_cast<size_t>(c) * M + im) * N) * K + k;
                for (int in = 0; in < N / 2; ++in)
                    H[static_cast<size_t>(ip) * hN + in] = src[static_cast<size_t>(in) * K];
            }
            plan_.c2r(H, slabs_.data() + s * slab);
        }
    });

    parallel_for(static_cast<size_t>(ncomp) * padM, [&](size_t b, size_t e) {
        double col[64];
        for (size_t r = b; r < e; ++r) {
            const int c = static_cast<int>(r) / padM, i = static_cast<int>(r) % padM;
            for (int j = 0; j < padN; ++j) {
                for (int k = 0; k < K; ++k)
                    col[k] = slabs_[(static_cast<size_t>(c) * K + k) * slab +
                                    static_cast<size_t>(i) * padN + j];
                double* out = phys + ((static_cast<size_t>(c) * padM + i) * padN + j) * Q;
                for (int q = 0; q < Q; ++q) {
                    double s = 0.0;
                    for (int k = 0; k < K; ++k) s += col[k] * basis[k * Q + q];
                    out[q] = s;
                }
            }
        }
    });
}

void Transforms::synth_sine(const cplx* spec, int ncomp, double* phys) const {
    synth(spec, ncomp, g_.sin_q, phys);
}

void Transforms::synth_cosine(const cplx* spec, int ncomp, double* phys) const {
    synth(spec, ncomp, g_.cos_q, phys);
}

void Transforms::analyze(const double* phys, int ncomp, const double* wtab, cplx* spec) const {
    const auto& g = g_;
    const int M = g.M, N = g.N, K = g.K, Q = g.Q;
    const int padM = g.padM, padN = g.padN;
    const size_t slab = static_cast<size_t>(padM) * padN;
    const int hN = padN / 2 + 1;
    const double inv = 1.0 / (static_cast<double>(padM) * padN);
    ensure_slabs(static_cast<size_t>(ncomp) * K);

    parallel_for(static_cast<size_t>(ncomp) * padM, [&](size_t b, size_t e) {
        for (size_t r = b; r < e; ++r) {
            const int c = static_cast<int>(r) / padM, i = static_cast<int>(r) % padM;
            for (int j = 0; j < padN; ++j) {
                const double* in = phys + ((static_cast<size_t>(c) * padM + i) * padN + j) * Q;
                for (int k = 0; k < K; ++k) {
                    double s = 0.0;
                    for (int q = 0; q < Q; ++q) s += in[q] * wtab[k * Q + q];
                    slabs_[(static_cast<size_t>(c) * K + k) * slab +
                           static_cast<size_t>(i) * padN + j] = s;
                }
            }
        }
    });

    parallel_for(static_cast<size_t>(ncomp) * K, [&](size_t b, size_t e) {
        for (size_t s = b; s < e; ++s) {
            const int c = static_cast<int>(s) / K, k = static_cast<int>(s) % K;
            cplx* H = half_[s].data();
            plan_.r2c(slabs_.data() + s * slab, H);
            cplx* dst = spec + ((static_cast<size_t>(c) * M) * N) * K;
            for (int im = 0; im < M; ++im) {
                for (int in = 0; in < N; ++in) {
                    cplx v(0.0);
                    if (!g.is_nyquist(im, in)) {
                        if (in < N / 2) {
                            const int ip = im <= M / 2 ? im : padM + im - M;
                            v = inv * H[static_cast<size_t>(ip) * hN + in];
                        } else {
                            const int jm = g.conj_m(im), jn = g.conj_n(in);
                            const int ip = jm <= M / 2 ? jm : padM + jm - M;
                            v = inv * std::conj(H[static_cast<size_t>(ip) * hN + jn]);
                        }
                    }
                    dst[(static_cast<size_t>(im) * N + in) * static_cast<size_t>(K) + k] = v;
                }
            }
        }
    });
}

FineSampler::FineSampler(GridPtr grid_)
    : grid(std::move(grid_)), plan_(2 * grid->M, 2 * grid->N) {
    half_.resize(plan_.half_count());
    slabs_.resize(2ul * grid->K * plan_.nx * plan_.ny);
}

void FineSampler::fill_slabs(const SpectralField& v) const {
    const auto& g = *grid;
    const int M = g.M, N = g.N, K = g.K;
    const int fx = plan_.nx, fy = plan_.ny;
    const int hN = fy / 2 + 1;
    const size_t slab = static_cast<size_t>(fx) * fy;
    for (int c = 0; c < 2; ++c)
        for (int k = 0; k < K; ++k) {
            std::fill(half_.begin(), half_.end(), cplx(0.0));
            for (int im = 0; im < M; ++im) {
                if (im == M / 2) continue;
                const int ip = im <= M / 2 ? im : fx + im - M;
                for (int in = 0; in < N / 2; ++in)
                    half_[static_cast<size_t>(ip) * hN + in] = v.at(c, im, in, k);
            }
            plan_.c2r(half_.data(), slabs_.data() + (static_cast<size_t>(c) * K + k) * slab);
        }
}

double FineSampler::accumulate(const SpectralField& v, bool fourth) const {
    const auto& g = *grid;
    const int K = g.K, Qd = g.Qd;
    const int fx = plan_.nx, fy = plan_.ny;
    const size_t slab = static_cast<size_t>(fx) * fy;
    fill_slabs(v);
    const double horiz_w = 1.0 / (static_cast<double>(fx) * fy);
    double total = 0.0;
    for (size_t p = 0; p < slab; ++p) {
        double cell = 0.0;
        for (int q = 0; q < Qd; ++q) {
            double tx = 0.0, ty = 0.0;
            for (int k = 0; k < K; ++k) {
                // fluctuation profile: psi_k minus its vertical mean
                const double prof = g.sin_g[k * Qd + q] - g.cbar[k];
                tx += slabs_[k * slab + p] * prof;
                ty += slabs_[(static_cast<size_t>(K) + k) * slab + p] * prof;
            }
            const double sq = tx * tx + ty * ty;
            cell += g.wg[q] * (fourth ? sq * sq : sq);
        }
        total += cell;
    }
    return total * horiz_w;
}

double FineSampler::vtilde_l4_4(const SpectralField& v) const { return accumulate(v, true); }

double FineSampler::vtilde_l2_sq(const SpectralField& v) const { return accumulate(v, false); }

}  // namespace hpe
