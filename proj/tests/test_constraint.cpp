#include <doctest.h>

#include <cmath>
#include <random>

#include "hpe/constraint.hpp"
#include "hpe/util.hpp"
#include "helpers.hpp"

using namespace hpe;
using namespace hpe::testing;

TEST_CASE("projection removes the divergence of the vertical average") {
    auto g = make_grid(8, 8, 6, 1.0);
    auto v = make_random_field(g, 31);
    const double before = constraint_residual(v);
    CHECK(before > 1.0);
    auto p = project(v);
    CHECK(constraint_residual(p) <= 1e-13 * std::sqrt(norm_l2_sq(v)));
    CHECK(is_hermitian(p, 1e-14));
}

TEST_CASE("projection is idempotent, self-adjoint and contractive") {
    auto g = make_grid(8, 8, 5, 0.8);
    auto u = make_random_field(g, 41);
    auto v = make_random_field(g, 42);

    auto pu = project(u);
    auto ppu = project(pu);
    CHECK(max_abs_diff(pu.a, ppu.a) <= 1e-14 * std::sqrt(norm_l2_sq(u)));

    CHECK(inner_l2(pu, v) == doctest::Approx(inner_l2(u, project(v))).epsilon(1e-13));
    CHECK(norm_l2_sq(pu) <= norm_l2_sq(u) * (1 + 1e-15));
}

TEST_CASE("projection matches a dense null-space oracle") {
    auto g = make_grid(8, 8, 7, 1.2);
    auto v = make_random_field(g, 53);
    auto p = project(v);

    // Dense oracle: at each wavevector, remove the component of the stacked
    // (a_x, a_y) column along the constraint functional (m cbar, n cbar).
    const int K = g->K;
    SpectralField want = v;
    for (int im = 0; im < g->M; ++im)
        for (int in = 0; in < g->N; ++in) {
            if (g->is_nyquist(im, in)) continue;
            const double m = g->wave_m(im), n = g->wave_n(in);
            if (m == 0.0 && n == 0.0) continue;
            std::vector<double> ell(2 * K);
            for (int k = 0; k < K; ++k) {
                ell[k] = m * g->cbar[k];
                ell[K + k] = n * g->cbar[k];
            }
            double nrm = 0.0;
            for (double x : ell) nrm += x * x;
            cplx dot = 0.0;
            for (int k = 0; k < K; ++k)
                dot += ell[k] * v.at(0, im, in, k) + ell[K + k] * v.at(1, im, in, k);
            for (int k = 0; k < K; ++k) {
                want.at(0, im, in, k) -= dot / nrm * ell[k];
                want.at(1, im, in, k) -= dot / nrm * ell[K + k];
            }
        }
    CHECK(max_abs_diff(p.a, want.a) < 1e-13);
}

TEST_CASE("constraint residual closed form for a single parallel mode") {
    auto g = make_grid(8, 8, 4, 1.0);
    SpectralField v(g);
    // x-component at (m,n) = (1,0) and its conjugate: fully parallel
    v.at(0, 1, 0, 0) = 1.0;
    v.at(0, g->M - 1, 0, 0) = 1.0;
    // |k_H . vbar| = 2 pi cbar_0 = 4 sqrt(2)
    CHECK(constraint_residual(v) == doctest::Approx(5.656854249492380).epsilon(1e-14));
    SpectralField z(g);
    CHECK(constraint_residual(z) == 0.0);
}

TEST_CASE("bordered solve") {
    auto g = make_grid(8, 8, 6, 0.9);
    const int K = g->K;

    SUBCASE("right side in the constraint direction") {
        std::vector<double> d(K, 1.0);
        std::vector<cplx> b(K), a(K);
        for (int k = 0; k < K; ++k) b[k] = g->cbar[k];
        cplx gamma;
        solve_bordered(d.data(), b.data(), *g, a.data(), gamma);
        CHECK(std::abs(gamma - 1.0) < 1e-14);
        for (int k = 0; k < K; ++k) CHECK(std::abs(a[k]) < 1e-14);
    }

    SUBCASE("right side orthogonal to the constraint") {
        std::vector<double> d(K, 1.0);
        std::vector<cplx> b(K), a(K);
        b[0] = g->cbar[1];
        b[1] = -g->cbar[0];
        cplx gamma;
        solve_bordered(d.data(), b.data(), *g, a.data(), gamma);
        CHECK(std::abs(gamma) < 1e-14);
        for (int k = 0; k < K; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-14);
    }

    SUBCASE("random system matches a dense KKT solve") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> d(K);
        std::vector<cplx> b(K), a(K);
        for (int k = 0; k < K; ++k) {
            d[k] = 1.0 + std::abs(dist(rng)) * 3.0;
            b[k] = cplx(dist(rng), dist(rng));
        }
        cplx gamma;
        solve_bordered(d.data(), b.data(), *g, a.data(), gamma);

        // Dense (K+1) x (K+1) complex Gaussian elimination.
        const int n = K + 1;
        std::vector<cplx> A(n * n, 0.0), rhs(n, 0.0);
        for (int k = 0; k < K; ++k) {
            A[k * n + k] = d[k];
            A[k * n + K] = g->cbar[k];
            A[K * n + k] = g->cbar[k];
            rhs[k] = b[k];
        }
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
            for (int c2 = 0; c2 < n; ++c2) std::swap(A[col * n + c2], A[piv * n + c2]);
            std::swap(rhs[col], rhs[piv]);
            for (int r = col + 1; r < n; ++r) {
                const cplx f = A[r * n + col] / A[col * n + col];
                for (int c2 = col; c2 < n; ++c2) A[r * n + c2] -= f * A[col * n + c2];
                rhs[r] -= f * rhs[col];
            }
        }
        std::vector<cplx> x(n);
        for (int r = n - 1; r >= 0; --r) {
            cplx s = rhs[r];
            for (int c2 = r + 1; c2 < n; ++c2) s -= A[r * n + c2] * x[c2];
            x[r] = s / A[r * n + r];
        }
        for (int k = 0; k < K; ++k) CHECK(std::abs(a[k] - x[k]) < 1e-13);
        CHECK(std::abs(gamma - x[K]) < 1e-13);

        cplx csum = 0.0;
        for (int k = 0; k < K; ++k) csum += g->cbar[k] * a[k];
        CHECK(std::abs(csum) < 1e-14);
    }
}

TEST_CASE("pressure from multiplier inverts the multiplier relation") {
    auto g = make_grid(8, 8, 4, 1.3);
    const double kh = 2.0 * Grid::pi * std::sqrt(5.0);
    const cplx gamma = cplx(0.0, 1.0) * kh * g->h;
    CHECK(std::abs(pressure_from_multiplier(gamma, 1, 2, *g) - 1.0) < 1e-14);
    CHECK(std::abs(pressure_from_multiplier(cplx(0.0), 1, 2, *g)) == 0.0);
    CHECK_THROWS_AS(pressure_from_multiplier(cplx(1.0), 0, 0, *g), ValidationError);
}
