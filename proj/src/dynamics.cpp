#include "hpe/dynamics.hpp"

#include <cmath>

#include "hpe/transforms.hpp"
#include "hpe/util.hpp"

namespace hpe {

WField compute_w(const SpectralField& v) {
    const auto& g = *v.grid;
    WField w(v.grid);
    const double two_pi = 2.0 * Grid::pi;
    for (int im = 0; im < g.M; ++im)
        for (int in = 0; in < g.N; ++in) {
            const double m = g.wave_m(im), n = g.wave_n(in);
            for (int k = 0; k < g.K; ++k) {
                const cplx div = cplx(0.0, two_pi) *
                                 (m * v.at(0, im, in, k) + n * v.at(1, im, in, k));
                w.at(im, in, k) = div / g.mu[k];
            }
        }
    return w;
}

Advector::Advector(GridPtr grid_) : grid(std::move(grid_)) {
    const auto& g = *grid;
    const size_t spec = static_cast<size_t>(g.M) * g.N * g.K;
    const size_t phys = static_cast<size_t>(g.padM) * g.padN * g.Q;
    grad_.resize(4 * spec);
    wdz_.resize(3 * spec);
    pv_.resize(2 * phys);
    pg_.resize(4 * phys);
    pw_.resize(3 * phys);
    prod_.resize(2 * phys);
}

void Advector::apply(const SpectralField& v, const SpectralField& phi, SpectralField& out,
                     Part part, double* max_speed_h, double* max_speed_z) {
    const auto& g = *grid;
    const auto& tf = g.tf();
    const int M = g.M, N = g.N, K = g.K;
    const size_t spec = static_cast<size_t>(M) * N * K;
    const size_t phys = static_cast<size_t>(g.padM) * g.padN * g.Q;
    const double two_pi = 2.0 * Grid::pi;

    // Horizontal gradient of phi, component-major: dx phi_x, dy phi_x, dx phi_y, dy phi_y.
    for (int c = 0; c < 2; ++c)
        for (int im = 0; im < M; ++im)
            for (int in = 0; in < N; ++in) {
                const cplx ddx(0.0, two_pi * g.wave_m(im));
                const cplx ddy(0.0, two_pi * g.wave_n(in));
                const size_t base = (static_cast<size_t>(im) * N + in) * K;
                for (int k = 0; k < K; ++k) {
                    const cplx p = phi.at(c, im, in, k);
                    grad_[(2 * c + 0) * spec + base + k] = ddx * p;
                    grad_[(2 * c + 1) * spec + base + k] = ddy * p;
                }
            }

    // w(v) and dz phi share the cosine-profile synthesis.
    for (int im = 0; im < M; ++im)
        for (int in = 0; in < N; ++in) {
            const double m = g.wave_m(im), n = g.wave_n(in);
            const size_t base = (static_cast<size_t>(im) * N + in) * K;
            for (int k = 0; k < K; ++k) {
                wdz_[base + k] = cplx(0.0, two_pi) *
                                 (m * v.at(0, im, in, k) + n * v.at(1, im, in, k)) / g.mu[k];
                wdz_[spec + base + k] = g.mu[k] * phi.at(0, im, in, k);
                wdz_[2 * spec + base + k] = g.mu[k] * phi.at(1, im, in, k);
            }
        }

    tf.synth_sine(v.a.data(), 2, pv_.data());
    tf.synth_sine(grad_.data(), 4, pg_.data());
    tf.synth_cosine(wdz_.data(), 3, pw_.data());

    if (max_speed_h) {
        double mx = 0.0;
        for (size_t i = 0; i < 2 * phys; ++i) mx = std::max(mx, std::abs(pv_[i]));
        *max_speed_h = mx;
    }
    if (max_speed_z) {
        double mx = 0.0;
        for (size_t i = 0; i < phys; ++i) mx = std::max(mx, std::abs(pw_[i]));
        *max_speed_z = mx;
    }

    const bool horiz = part != Part::vertical;
    const bool vert = part != Part::horizontal;
    parallel_for(phys, [&](size_t b, size_t e) {
        for (size_t i = b; i < e; ++i) {
            const double vx = pv_[i], vy = pv_[phys + i], wv = pw_[i];
            for (int c = 0; c < 2; ++c) {
                double s = 0.0;
                if (horiz) s += vx * pg_[(2 * c + 0) * phys + i] + vy * pg_[(2 * c + 1) * phys + i];
                if (vert) s += wv * pw_[(1 + c) * phys + i];
                prod_[c * phys + i] = s;
            }
        }
    });

    tf.analyze(prod_.data(), 2, g.w_prod.data(), out.a.data());
}

SpectralField nonlinear_term(const SpectralField& v) {
    Advector adv(v.grid);
    SpectralField out(v.grid);
    adv.apply(v, v, out);
    return out;
}

SpectralField advect(const SpectralField& v, const SpectralField& phi) {
    Advector adv(v.grid);
    SpectralField out(v.grid);
    adv.apply(v, phi, out);
    return out;
}

double norm_gradH_sq(const SpectralField& v) {
    const auto& g = *v.grid;
    const double c = 4.0 * Grid::pi * Grid::pi;
    double s = 0.0;
    for (int comp = 0; comp < 2; ++comp)
        for (int im = 0; im < g.M; ++im)
            for (int in = 0; in < g.N; ++in) {
                const double m = g.wave_m(im), n = g.wave_n(in);
                const double w = c * (m * m + n * n);
                for (int k = 0; k < g.K; ++k) s += w * std::norm(v.at(comp, im, in, k));
            }
    return s;
}

double norm_dz_sq(const SpectralField& v) {
    const auto& g = *v.grid;
    double s = 0.0;
    for (int comp = 0; comp < 2; ++comp)
        for (int im = 0; im < g.M; ++im)
            for (int in = 0; in < g.N; ++in)
                for (int k = 0; k < g.K; ++k)
                    s += g.mu[k] * g.mu[k] * std::norm(v.at(comp, im, in, k));
    return s;
}

double norm_grad_dz_sq(const SpectralField& v) {
    const auto& g = *v.grid;
    double s = 0.0;
    for (int comp = 0; comp < 2; ++comp)
        for (int im = 0; im < g.M; ++im)
            for (int in = 0; in < g.N; ++in)
                for (int k = 0; k < g.K; ++k)
                    s += g.lambda(im, in, k) * g.mu[k] * g.mu[k] *
                         std::norm(v.at(comp, im, in, k));
    return s;
}

double norm_lap_sq(const SpectralField& v) {
    const auto& g = *v.grid;
    double s = 0.0;
    for (int comp = 0; comp < 2; ++comp)
        for (int im = 0; im < g.M; ++im)
            for (int in = 0; in < g.N; ++in)
                for (int k = 0; k < g.K; ++k) {
                    const double lam = g.lambda(im, in, k);
                    s += lam * lam * std::norm(v.at(comp, im, in, k));
                }
    return s;
}

TrilinearReport trilinear_estimate_report(const SpectralField& v1, const SpectralField& v2,
                                          const SpectralField& v3) {
    TrilinearReport r;
    Advector adv(v1.grid);
    SpectralField tmp(v1.grid);
    adv.apply(v1, v3, tmp, Advector::Part::horizontal);
    r.lhs_h = std::abs(inner_l2(tmp, v2));
    adv.apply(v1, v3, tmp, Advector::Part::vertical);
    r.lhs_z = std::abs(inner_l2(tmp, v2));

    const double v1_l2 = std::sqrt(norm_l2_sq(v1));
    const double v1_h1 = std::sqrt(norm_l2_sq(v1) + norm_grad_sq(v1));
    const double v2_l2 = std::sqrt(norm_l2_sq(v2));
    const double v2_h1 = std::sqrt(norm_l2_sq(v2) + norm_grad_sq(v2));
    const double g3 = std::sqrt(norm_gradH_sq(v3));
    const double dz3_sq = norm_dz_sq(v3);
    const double dz3 = std::sqrt(dz3_sq);
    const double dz3_h1 = std::sqrt(dz3_sq + norm_grad_dz_sq(v3));
    const double g1 = std::sqrt(norm_gradH_sq(v1));

    r.rhs_h = std::sqrt(v1_l2 * v1_h1) * v2_h1 * g3;
    r.rhs_z = g1 * std::sqrt(v2_l2 * v2_h1) * std::sqrt(dz3 * dz3_h1);
    r.ratio_h = r.rhs_h > 0.0 ? r.lhs_h / r.rhs_h : 0.0;
    r.ratio_z = r.rhs_z > 0.0 ? r.lhs_z / r.rhs_z : 0.0;
    return r;
}

}  // namespace hpe
