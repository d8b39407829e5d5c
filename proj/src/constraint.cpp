#include "hpe/constraint.hpp"

#include <cmath>

#include "hpe/util.hpp"

namespace hpe {

void project_inplace(SpectralField& v) {
    const auto& g = *v.grid;
    const int K = g.K;
    double csq = 0.0;
    for (int k = 0; k < K; ++k) csq += g.cbar[k] * g.cbar[k];

    for (int im = 0; im < g.M; ++im)
        for (int in = 0; in < g.N; ++in) {
            if (g.is_nyquist(im, in)) continue;
            const double m = g.wave_m(im), n = g.wave_n(in);
            if (m == 0.0 && n == 0.0) continue;
            const double kap = std::sqrt(m * m + n * n);
            const double ex = m / kap, ey = n / kap;
            cplx s = 0.0;
            for (int k = 0; k < K; ++k)
                s += g.cbar[k] * (ex * v.at(0, im, in, k) + ey * v.at(1, im, in, k));
            s /= csq;
            for (int k = 0; k < K; ++k) {
                const cplx d = s * g.cbar[k];
                v.at(0, im, in, k) -= d * ex;
                v.at(1, im, in, k) -= d * ey;
            }
        }
}

SpectralField project(const SpectralField& v) {
    SpectralField out = v;
    project_inplace(out);
    return out;
}

double constraint_residual(const SpectralField& v) {
    const auto& g = *v.grid;
    const double two_pi = 2.0 * Grid::pi;
    double worst = 0.0;
    for (int im = 0; im < g.M; ++im)
        for (int in = 0; in < g.N; ++in) {
            if (g.is_nyquist(im, in)) continue;
            const double m = g.wave_m(im), n = g.wave_n(in);
            if (m == 0.0 && n == 0.0) continue;
            cplx div = 0.0;
            for (int k = 0; k < g.K; ++k)
                div += g.cbar[k] * (m * v.at(0, im, in, k) + n * v.at(1, im, in, k));
            worst = std::max(worst, two_pi * std::abs(div));
        }
    return worst;
}

void solve_bordered(const double* d, const cplx* b, const Grid& g, cplx* a, cplx& gamma) {
    const int K = g.K;
    cplx num = 0.0;
    double den = 0.0;
    for (int k = 0; k < K; ++k) {
        num += g.cbar[k] * b[k] / d[k];
        den += g.cbar[k] * g.cbar[k] / d[k];
    }
    if (!(den > 1e-300)) throw ValidationError("degenerate constraint in bordered solve");
    gamma = num / den;
    for (int k = 0; k < K; ++k) a[k] = (b[k] - gamma * g.cbar[k]) / d[k];
}

cplx pressure_from_multiplier(cplx gamma, int m, int n, const Grid& g) {
    if (m == 0 && n == 0) throw ValidationError("pressure multiplier undefined at zero wavevector");
    const double kh = 2.0 * Grid::pi * std::sqrt(double(m) * m + double(n) * n);
    return gamma / (cplx(0.0, 1.0) * kh * g.h);
}

}  // namespace hpe
