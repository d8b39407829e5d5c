#include "hpe/field.hpp"

#include <cmath>

namespace hpe {

void hermitianize(SpectralField& f) {
    const auto& g = *f.grid;
    for (int c = 0; c < 2; ++c)
        for (int im = 0; im < g.M; ++im)
            for (int in = 0; in < g.N; ++in) {
                if (g.is_nyquist(im, in)) {
                    for (int k = 0; k < g.K; ++k) f.at(c, im, in, k) = 0.0;
                    continue;
                }
                const int jm = g.conj_m(im), jn = g.conj_n(in);
                if (im > jm || (im == jm && in > jn)) continue;
                for (int k = 0; k < g.K; ++k) {
                    if (im == jm && in == jn) {
                        f.at(c, im, in, k) = f.at(c, im, in, k).real();
                    } else {
                        const cplx avg =
                            0.5 * (f.at(c, im, in, k) + std::conj(f.at(c, jm, jn, k)));
                        f.at(c, im, in, k) = avg;
                        f.at(c, jm, jn, k) = std::conj(avg);
                    }
                }
            }
}

bool is_hermitian(const SpectralField& f, double tol) {
    const auto& g = *f.grid;
    for (int c = 0; c < 2; ++c)
        for (int im = 0; im < g.M; ++im)
            for (int in = 0; in < g.N; ++in) {
                const bool ny = g.is_nyquist(im, in);
                const int jm = g.conj_m(im), jn = g.conj_n(in);
                for (int k = 0; k < g.K; ++k) {
                    const cplx v = f.at(c, im, in, k);
                    if (ny) {
                        if (std::abs(v) > tol) return false;
                    } else if (std::abs(v - std::conj(f.at(c, jm, jn, k))) > tol) {
                        return false;
                    }
                }
            }
    return true;
}

double norm_l2_sq(const SpectralField& f) {
    double s = 0.0;
    for (const cplx& v : f.a) s += std::norm(v);
    return s;
}

double norm_grad_sq(const SpectralField& f) {
    const auto& g = *f.grid;
    double s = 0.0;
    for (int c = 0; c < 2; ++c)
        for (int im = 0; im < g.M; ++im)
            for (int in = 0; in < g.N; ++in)
                for (int k = 0; k < g.K; ++k)
                    s += g.lambda(im, in, k) * std::norm(f.at(c, im, in, k));
    return s;
}

double inner_l2(const SpectralField& f, const SpectralField& g) {
    double s = 0.0;
    for (size_t i = 0; i < f.a.size(); ++i)
        s += f.a[i].real() * g.a[i].real() + f.a[i].imag() * g.a[i].imag();
    return s;
}

void vertical_average(const SpectralField& f, BarotropicField& out) {
    const auto& g = *f.grid;
    for (int c = 0; c < 2; ++c)
        for (int im = 0; im < g.M; ++im)
            for (int in = 0; in < g.N; ++in) {
                cplx s = 0.0;
                for (int k = 0; k < g.K; ++k) s += g.cbar[k] * f.at(c, im, in, k);
                out.at(c, im, in) = s;
            }
}

namespace {

// Visit the non-redundant wavevectors in checkpoint order.  The callback
// receives FFT-ordered indices and whether the mode is self-conjugate.
template <typename F>
void for_half_set(const Grid& g, F&& fn) {
    for (int km = 0; km <= g.M / 2 - 1; ++km) {
        const int im = km;
        if (km == 0) {
            for (int kn = 0; kn <= g.N / 2 - 1; ++kn) fn(im, kn, kn == 0);
        } else {
            for (int kn = -(g.N / 2 - 1); kn <= g.N / 2 - 1; ++kn)
                fn(im, kn >= 0 ? kn : g.N + kn, false);
        }
    }
}

}  // namespace

size_t dof_count(const Grid& g) {
    const size_t half = static_cast<size_t>(g.N / 2) + (g.M / 2 - 1) * (g.N - 1);
    return 2ul * g.K * (2 * (half - 1) + 1);
}

void pack_dofs(const SpectralField& f, std::vector<double>& x) {
    const auto& g = *f.grid;
    x.clear();
    x.reserve(dof_count(g));
    for_half_set(g, [&](int im, int in, bool self) {
        for (int k = 0; k < g.K; ++k)
            for (int c = 0; c < 2; ++c) {
                const cplx v = f.at(c, im, in, k);
                x.push_back(v.real());
                if (!self) x.push_back(v.imag());
            }
    });
}

void unpack_dofs(const std::vector<double>& x, SpectralField& f) {
    const auto& g = *f.grid;
    f.zero();
    size_t p = 0;
    for_half_set(g, [&](int im, int in, bool self) {
        const int jm = g.conj_m(im), jn = g.conj_n(in);
        for (int k = 0; k < g.K; ++k)
            for (int c = 0; c < 2; ++c) {
                const double re = x[p++];
                const double imag = self ? 0.0 : x[p++];
                f.at(c, im, in, k) = cplx(re, imag);
                if (!self) f.at(c, jm, jn, k) = cplx(re, -imag);
            }
    });
}

}  // namespace hpe
