#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "hpe/constraint.hpp"
#include "hpe/dynamics.hpp"
#include "helpers.hpp"

using namespace hpe;
using namespace hpe::testing;

namespace {

// Mode-sum evaluation of v, grad_H v, dz v and w at one physical point.
// Independent of the transform pipeline.
struct PointSample {
    double vx, vy;
    double dxvx, dyvx, dxvy, dyvy;
    double dzvx, dzvy;
    double w;
};

PointSample eval_point(const SpectralField& v, double x, double y, double z) {
    const auto& g = *v.grid;
    std::array<cplx, 9> acc{};
    const double amp = std::sqrt(2.0 / g.h);
    for (int im = 0; im < g.M; ++im)
        for (int in = 0; in < g.N; ++in) {
            if (g.is_nyquist(im, in)) continue;
            const double m = g.wave_m(im), n = g.wave_n(in);
            const cplx e = std::polar(1.0, 2.0 * Grid::pi * (m * x + n * y));
            const cplx dx(0.0, 2.0 * Grid::pi * m);
            const cplx dy(0.0, 2.0 * Grid::pi * n);
            for (int k = 0; k < g.K; ++k) {
                const double psi = amp * std::sin(g.mu[k] * (z + g.h));
                const double cosk = amp * std::cos(g.mu[k] * (z + g.h));
                const cplx ax = v.at(0, im, in, k) * e;
                const cplx ay = v.at(1, im, in, k) * e;
                acc[0] += ax * psi;
                acc[1] += ay * psi;
                acc[2] += dx * ax * psi;
                acc[3] += dy * ax * psi;
                acc[4] += dx * ay * psi;
                acc[5] += dy * ay * psi;
                acc[6] += ax * g.mu[k] * cosk;
                acc[7] += ay * g.mu[k] * cosk;
                acc[8] += (dx * ax + dy * ay) / g.mu[k] * cosk;
            }
        }
    PointSample s;
    s.vx = acc[0].real();
    s.vy = acc[1].real();
    s.dxvx = acc[2].real();
    s.dyvx = acc[3].real();
    s.dxvy = acc[4].real();
    s.dyvy = acc[5].real();
    s.dzvx = acc[6].real();
    s.dzvy = acc[7].real();
    s.w = acc[8].real();
    return s;
}

}  // namespace

TEST_CASE("vertical velocity coefficients and boundary values") {
    auto g = make_grid(8, 8, 5, 1.0);

    SUBCASE("single mode closed form") {
        SpectralField v(g);
        v.at(0, 1, 0, 0) = 1.0;
        v.at(0, g->M - 1, 0, 0) = 1.0;
        auto w = compute_w(v);
        // i 2 pi / mu_0 = 4i, and the profile value at the bottom is sqrt(2)
        CHECK(std::abs(w.at(1, 0, 0) - cplx(0.0, 4.0)) < 1e-14);
        const cplx bottom = w.at(1, 0, 0) * std::sqrt(2.0);
        CHECK(bottom.real() == doctest::Approx(0.0));
        CHECK(bottom.imag() == doctest::Approx(5.656854249492380).epsilon(1e-14));
        for (int k = 1; k < g->K; ++k)
            CHECK(std::abs(w.at(1, 0, k)) == 0.0);
    }

    SUBCASE("bottom value equals depth times mean divergence") {
        auto v = make_random_field(g, 11);
        auto w = compute_w(v);
        BarotropicField vb(g);
        vertical_average(v, vb);
        const double amp = std::sqrt(2.0 / g->h);
        double worst = 0.0;
        for (int im = 0; im < g->M; ++im)
            for (int in = 0; in < g->N; ++in) {
                cplx bottom = 0.0;
                for (int k = 0; k < g->K; ++k) bottom += w.at(im, in, k) * amp;
                const cplx div = cplx(0.0, 2.0 * Grid::pi) *
                                 (g->wave_m(im) * vb.at(0, im, in) +
                                  g->wave_n(in) * vb.at(1, im, in));
                worst = std::max(worst, std::abs(bottom - g->h * div));
            }
        CHECK(worst < 1e-12);

        // After projection the depth-averaged divergence vanishes, so the
        // bottom trace of w does too.
        auto p = project(v);
        auto wp = compute_w(p);
        double top = 0.0;
        for (int im = 0; im < g->M; ++im)
            for (int in = 0; in < g->N; ++in) {
                cplx bottom = 0.0;
                for (int k = 0; k < g->K; ++k) bottom += wp.at(im, in, k) * amp;
                top = std::max(top, std::abs(bottom));
            }
        CHECK(top < 1e-12);
    }

    SUBCASE("zero field") {
        SpectralField z(g);
        auto w = compute_w(z);
        for (const auto& c : w.a) CHECK(std::abs(c) == 0.0);
    }
}

TEST_CASE("advection vanishes on parallel shear flow") {
    auto g = make_grid(8, 8, 5, 1.0);
    SpectralField v(g);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    // v = (0, g(x, z)): divergence free pointwise, no y dependence, w = 0.
    for (int k = 0; k < g->K; ++k) {
        v.at(1, 0, 0, k) = dist(rng);
        v.at(1, 1, 0, k) = cplx(dist(rng), dist(rng));
        v.at(1, 2, 0, k) = cplx(dist(rng), dist(rng));
    }
    hermitianize(v);
    auto n = nonlinear_term(v);
    double mx = 0.0;
    for (const auto& c : n.a) mx = std::max(mx, std::abs(c));
    CHECK(mx <= 1e-15);
}

TEST_CASE("discrete skew symmetry of the advection term") {
    auto g = make_grid(8, 8, 6, 1.0);
    for (unsigned seed : {5u, 6u, 7u}) {
        auto v = project(make_random_field(g, seed));
        auto n = nonlinear_term(v);
        const double rel = std::abs(inner_l2(n, v)) /
                           (std::sqrt(norm_l2_sq(n)) * std::sqrt(norm_l2_sq(v)));
        CHECK(rel < 1e-12);
    }
}

TEST_CASE("advection duality against a test field") {
    auto g = make_grid(8, 8, 5, 0.8);
    auto v = project(make_random_field(g, 21));
    auto phi = make_random_field(g, 22);
    auto u = make_random_field(g, 23);
    auto bvp = advect(v, phi);
    auto bvu = advect(v, u);
    const double lhs = inner_l2(bvp, u);
    const double rhs = -inner_l2(bvu, phi);
    const double scale = std::sqrt(norm_l2_sq(bvp) * norm_l2_sq(u)) +
                         std::sqrt(norm_l2_sq(bvu) * norm_l2_sq(phi));
    CHECK(std::abs(lhs - rhs) < 1e-12 * scale);
}

TEST_CASE("nonlinear term matches a dense quadrature oracle") {
    auto g = make_grid(6, 6, 2, 0.9);
    auto v = make_random_field(g, 77, 0.7);
    auto n = nonlinear_term(v);
    CHECK(is_hermitian(n, 1e-13));

    const int F = 4 * g->M;
    const int GZ = 64;
    std::vector<double> zn, zw;
    gauss_legendre(GZ, -g->h, 0.0, zn, zw);

    // Sample both product components on an oversampled tensor grid.
    std::vector<double> px(static_cast<size_t>(F) * F * GZ), py(px.size());
    for (int ix = 0; ix < F; ++ix)
        for (int iy = 0; iy < F; ++iy)
            for (int j = 0; j < GZ; ++j) {
                const auto s =
                    eval_point(v, double(ix) / F, double(iy) / F, zn[j]);
                const size_t at = (static_cast<size_t>(ix) * F + iy) * GZ + j;
                px[at] = s.vx * s.dxvx + s.vy * s.dyvx + s.w * s.dzvx;
                py[at] = s.vx * s.dxvy + s.vy * s.dyvy + s.w * s.dzvy;
            }

    const double amp = std::sqrt(2.0 / g->h);
    double worst = 0.0;
    for (int im = 0; im < g->M; ++im)
        for (int in = 0; in < g->N; ++in) {
            if (g->is_nyquist(im, in)) continue;
            const double m = g->wave_m(im), wn = g->wave_n(in);
            for (int k = 0; k < g->K; ++k) {
                cplx cx = 0.0, cy = 0.0;
                for (int ix = 0; ix < F; ++ix)
                    for (int iy = 0; iy < F; ++iy) {
                        const cplx e = std::polar(
                            1.0, -2.0 * Grid::pi * (m * ix + wn * iy) / F);
                        cplx sx = 0.0, sy = 0.0;
                        const size_t base = (static_cast<size_t>(ix) * F + iy) * GZ;
                        for (int j = 0; j < GZ; ++j) {
                            const double q =
                                zw[j] * amp * std::sin(g->mu[k] * (zn[j] + g->h));
                            sx += q * px[base + j];
                            sy += q * py[base + j];
                        }
                        cx += e * sx;
                        cy += e * sy;
                    }
                cx /= double(F) * F;
                cy /= double(F) * F;
                worst = std::max(worst, std::abs(n.at(0, im, in, k) - cx));
                worst = std::max(worst, std::abs(n.at(1, im, in, k) - cy));
            }
        }
    CHECK(worst < 1e-12);
}

TEST_CASE("collocation speed scan closed form") {
    auto g = make_grid(8, 8, 4, 1.0);
    SpectralField v(g);
    v.at(0, 1, 0, 0) = 0.3;
    v.at(0, g->M - 1, 0, 0) = 0.3;
    Advector adv(g);
    SpectralField out(g);
    double mh = -1.0, mz = -1.0;
    adv.apply(v, v, out, Advector::Part::both, &mh, &mz);
    // vx = 0.6 cos(2 pi x) sqrt(2) sin(mu_0 (z+1)); the midpoint grid tops
    // out at sin(15 pi / 32), the x grid hits cos = 1 exactly.
    const double want_h = 0.6 * std::sqrt(2.0) * std::sin(15.0 * Grid::pi / 32.0);
    CHECK(mh == doctest::Approx(want_h).epsilon(1e-13));
    // w = -2.4 sin(2 pi x) sqrt(2) cos(mu_0 (z+1)); the 12-point x grid hits
    // sin = 1 exactly, the z grid tops out at cos(pi / 32).
    const double want_z = 2.4 * std::sqrt(2.0) * std::cos(Grid::pi / 32.0);
    CHECK(mz == doctest::Approx(want_z).epsilon(1e-13));
}

TEST_CASE("trilinear pairing report") {
    auto g = make_grid(8, 8, 4, 1.0);

    SUBCASE("zero fields give zero ratios") {
        SpectralField z(g);
        auto r = trilinear_estimate_report(z, z, z);
        CHECK(r.lhs_h == 0.0);
        CHECK(r.lhs_z == 0.0);
        CHECK(r.ratio_h == 0.0);
        CHECK(r.ratio_z == 0.0);
    }

    SUBCASE("pairings sum to zero when the test field repeats") {
        auto v1 = project(make_random_field(g, 31));
        auto v3 = make_random_field(g, 32);
        Advector adv(g);
        SpectralField tmp(g);
        adv.apply(v1, v3, tmp, Advector::Part::horizontal);
        const double sh = inner_l2(tmp, v3);
        adv.apply(v1, v3, tmp, Advector::Part::vertical);
        const double sz = inner_l2(tmp, v3);
        CHECK(std::abs(sh + sz) < 1e-12 * (std::abs(sh) + std::abs(sz)));

        auto r = trilinear_estimate_report(v1, v3, v3);
        CHECK(r.lhs_h == doctest::Approx(std::abs(sh)).epsilon(1e-12));
        CHECK(r.lhs_z == doctest::Approx(std::abs(sz)).epsilon(1e-12));
        CHECK(r.ratio_h == doctest::Approx(r.lhs_h / r.rhs_h));
        CHECK(r.rhs_h > 0.0);
        CHECK(r.rhs_z > 0.0);
    }
}
