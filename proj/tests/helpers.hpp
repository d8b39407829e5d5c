#pragma once

#include <random>

#include "hpe/field.hpp"

namespace hpe::testing {

// Random conjugate-symmetric field with O(1) coefficients.
inline SpectralField make_random_field(GridPtr grid, unsigned seed, double amp = 1.0) {
    SpectralField f(grid);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-amp, amp);
    for (auto& v : f.a) v = cplx(dist(rng), dist(rng));
    hermitianize(f);
    return f;
}

// Triple-product integrals over (-h, 0) on the diagnostic grid.
inline double triple_sss(const Grid& g, int a, int b, int k) {
    double s = 0.0;
    for (int j = 0; j < g.Qd; ++j)
        s += g.wg[j] * g.sin_g[a * g.Qd + j] * g.sin_g[b * g.Qd + j] * g.sin_g[k * g.Qd + j];
    return s;
}

inline double triple_ccs(const Grid& g, int a, int b, int k) {
    double s = 0.0;
    for (int j = 0; j < g.Qd; ++j)
        s += g.wg[j] * g.cos_g[a * g.Qd + j] * g.cos_g[b * g.Qd + j] * g.sin_g[k * g.Qd + j];
    return s;
}

inline double max_abs_diff(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double m = 0.0;
    for (size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

}  // namespace hpe::testing
