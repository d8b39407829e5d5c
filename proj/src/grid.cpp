#include "hpe/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "hpe/transforms.hpp"
#include "hpe/util.hpp"

namespace hpe {

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    const double pi = Grid::pi;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        const double xm = 0.5 * (a + b), xl = 0.5 * (b - a);
        x[i] = xm - xl * t;
        x[n - 1 - i] = xm + xl * t;
        w[i] = 2.0 * xl / ((1.0 - t * t) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

std::shared_ptr<const Grid> Grid::create(int M, int N, int K, double h, int Qreq) {
    if (M < 4 || N < 4 || (M % 2) || (N % 2))
        throw ValidationError("M and N must be even and at least 4");
    if (K < 1 || K > 64) throw ValidationError("K must be between 1 and 64");
    if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("h must be positive and finite");
    if (Qreq != 0 && Qreq < 2 * K)
        throw ValidationError("vertical quadrature override must be at least 2K");

    auto g = std::shared_ptr<Grid>(new Grid());
    g->M = M;
    g->N = N;
    g->K = K;
    g->h = h;
    auto pad = [](int m) {
        int p = (3 * m) / 2;
        if (p % 2) ++p;
        return p;
    };
    g->padM = pad(M);
    g->padN = pad(N);
    const int Q = Qreq != 0 ? Qreq : std::max(2 * K, 8);
    g->Q = Q;
    g->Qd = std::max(64, 4 * K + 32);

    g->mu.resize(K);
    g->cbar.resize(K);
    for (int k = 0; k < K; ++k) {
        g->mu[k] = (2 * k + 1) * pi / (2.0 * h);
        g->cbar[k] = std::sqrt(2.0 / h) * 2.0 / ((2 * k + 1) * pi);
    }

    g->zq.resize(Q);
    g->wq.resize(Q);
    for (int j = 0; j < Q; ++j) {
        g->zq[j] = -h + h * (2 * j + 1) / (2.0 * Q);
        g->wq[j] = h / Q;
    }

    const double amp = std::sqrt(2.0 / h);
    g->sin_q.resize(static_cast<size_t>(K) * Q);
    g->cos_q.resize(static_cast<size_t>(K) * Q);
    g->w_sin.resize(static_cast<size_t>(K) * Q);
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < Q; ++j) {
            const double u = g->zq[j] + h;
            g->sin_q[k * Q + j] = amp * std::sin(g->mu[k] * u);
            g->cos_q[k * Q + j] = amp * std::cos(g->mu[k] * u);
            g->w_sin[k * Q + j] = g->wq[j] * g->sin_q[k * Q + j];
        }

    // Quadratic products of the sine/cosine eigenfunctions lie in
    // span{cos(l pi (z+h)/h) : l < 2K <= Q}.  On the midpoint nodes those
    // cosines form the orthogonal DCT-II system, so analysis in that system
    // followed by the closed-form integrals
    //     integral cos(l pi u/h) psi_k(u) du = sqrt(2/h) mu_k / (mu_k^2 - (l pi/h)^2)
    // gives the exact Galerkin coefficient from point samples.
    g->w_prod.assign(static_cast<size_t>(K) * Q, 0.0);
    for (int k = 0; k < K; ++k) {
        for (int l = 0; l < Q; ++l) {
            const double beta = l * pi / h;
            const double P = amp * g->mu[k] / (g->mu[k] * g->mu[k] - beta * beta);
            const double alpha = (l == 0 ? 1.0 : 2.0) / Q;
            for (int j = 0; j < Q; ++j)
                g->w_prod[k * Q + j] += alpha * std::cos(l * pi * (2 * j + 1) / (2.0 * Q)) * P;
        }
    }

    // Cosine profiles cos(mu_m (z+h)) sample to the DCT-IV system on the same
    // nodes; pairing that analysis with
    //     integral phi_m psi_k = (2/h) / (mu_k + mu_m)   (k+m even)
    //                          = (2/h) / (mu_k - mu_m)   (k+m odd)
    // projects them exactly.
    g->w_cosp.assign(static_cast<size_t>(K) * Q, 0.0);
    for (int k = 0; k < K; ++k) {
        for (int m = 0; m < Q; ++m) {
            const double mum = (2 * m + 1) * pi / (2.0 * h);
            const double icos = ((k + m) % 2 == 0) ? (2.0 / h) / (g->mu[k] + mum)
                                                   : (2.0 / h) / (g->mu[k] - mum);
            const double scale = std::sqrt(h / 2.0) * 2.0 / Q;
            for (int j = 0; j < Q; ++j)
                g->w_cosp[k * Q + j] += scale * std::cos(mum * (g->zq[j] + h)) * icos;
        }
    }

    gauss_legendre(g->Qd, -h, 0.0, g->zg, g->wg);
    g->sin_g.resize(static_cast<size_t>(K) * g->Qd);
    g->cos_g.resize(static_cast<size_t>(K) * g->Qd);
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < g->Qd; ++j) {
            const double u = g->zg[j] + h;
            g->sin_g[k * g->Qd + j] = amp * std::sin(g->mu[k] * u);
            g->cos_g[k * g->Qd + j] = amp * std::cos(g->mu[k] * u);
        }

    return g;
}

const Transforms& Grid::tf() const {
    std::call_once(tf_once_, [this] { tf_ = std::make_unique<Transforms>(*this); });
    return *tf_;
}

Grid::~Grid() = default;

GridPtr make_grid(int M, int N, int K, double h, int Qreq) {
    return Grid::create(M, N, K, h, Qreq);
}

}  // namespace hpe
