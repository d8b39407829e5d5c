#include <doctest.h>

#include <cmath>

#include "hpe/grid.hpp"
#include "hpe/util.hpp"

using namespace hpe;

TEST_CASE("vertical eigenvalues and averages") {
    auto g = make_grid(8, 8, 4, 1.0);
    CHECK(g->mu[0] == doctest::Approx(Grid::pi / 2).epsilon(1e-15));
    CHECK(g->mu[3] == doctest::Approx(7 * Grid::pi / 2).epsilon(1e-15));
    // Depth average of the first profile at h = 1.
    CHECK(g->cbar[0] == doctest::Approx(0.9003163161571061).epsilon(1e-15));
    CHECK(g->lambda(0, 0, 0) == doctest::Approx(Grid::pi * Grid::pi / 4).epsilon(1e-14));
    CHECK(g->lambda(1, 2, 0) ==
          doctest::Approx(4 * Grid::pi * Grid::pi * 5 + Grid::pi * Grid::pi / 4).epsilon(1e-14));
    // FFT-order wavenumbers: index M-1 means -1.
    CHECK(g->wave_m(7) == -1.0);
    CHECK(g->wave_m(3) == 3.0);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(make_grid(7, 8, 4, 1.0), ValidationError);
    CHECK_THROWS_AS(make_grid(8, 8, 0, 1.0), ValidationError);
    CHECK_THROWS_AS(make_grid(8, 8, 4, -1.0), ValidationError);
    CHECK_THROWS_AS(make_grid(2, 8, 4, 1.0), ValidationError);
    CHECK_THROWS_AS(make_grid(8, 8, 4, 1.0, 7), ValidationError);
    CHECK(make_grid(8, 8, 4, 1.0, 32)->Q == 32);
    CHECK(make_grid(8, 8, 4, 1.0)->Q == 8);
}

TEST_CASE("gauss legendre rule") {
    std::vector<double> x, w;
    gauss_legendre(12, -1.0, 0.0, x, w);
    double s0 = 0.0, s5 = 0.0, sc = 0.0;
    for (int i = 0; i < 12; ++i) {
        s0 += w[i];
        s5 += w[i] * std::pow(x[i], 5);
        sc += w[i] * std::cos(3.0 * x[i]);
    }
    CHECK(s0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s5 == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
    CHECK(sc == doctest::Approx(std::sin(3.0) / 3.0).epsilon(1e-14));
}

TEST_CASE("eigenfunctions orthonormal under both quadratures") {
    const double h = 0.7;
    auto g = make_grid(8, 8, 6, h);
    for (int k = 0; k < g->K; ++k)
        for (int l = 0; l < g->K; ++l) {
            double mid = 0.0, gl = 0.0, glbar = 0.0;
            for (int j = 0; j < g->Q; ++j)
                mid += g->wq[j] * g->sin_q[k * g->Q + j] * g->sin_q[l * g->Q + j];
            for (int j = 0; j < g->Qd; ++j) {
                gl += g->wg[j] * g->sin_g[k * g->Qd + j] * g->sin_g[l * g->Qd + j];
                if (l == 0) glbar += g->wg[j] * g->sin_g[k * g->Qd + j] / h;
            }
            const double want = k == l ? 1.0 : 0.0;
            CHECK(mid == doctest::Approx(want).epsilon(1e-13));
            CHECK(gl == doctest::Approx(want).epsilon(1e-13));
            if (l == 0) CHECK(glbar == doctest::Approx(g->cbar[k]).epsilon(1e-13));
        }
}

TEST_CASE("number formatting round trips") {
    const double vals[] = {0.1, -3.0e-17, 1234567.890123456, Grid::pi};
    for (double v : vals) {
        double back = 0.0;
        CHECK(parse_double(format_g17(v), back));
        CHECK(back == v);
    }
    double out;
    CHECK_FALSE(parse_double("1.5x", out));
    CHECK_FALSE(parse_double("", out));
}
