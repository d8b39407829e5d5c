#include "hpe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <utility>

#include "hpe/constraint.hpp"
#include "hpe/util.hpp"

namespace hpe {

namespace {

double vec_norm(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double vec_dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double diff_norm(const SpectralField& x, const SpectralField& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.a.size(); ++i) s += std::norm(x.a[i] - y.a[i]);
    return std::sqrt(s);
}

// One period of the fixed-step map, restarted from scratch on every
// application so S is a deterministic function of its argument alone.
struct PoincareRunner {
    static int steps_for(double T, double dt) {
        if (!(T > 0.0) || !(dt > 0.0) || !std::isfinite(T) || !std::isfinite(dt))
            throw ValidationError("period and dt must be positive");
        const double raw = std::ceil(T / dt - 1e-9);
        if (raw > 1e9) throw ValidationError("period over dt exceeds the step budget");
        return std::max(1, static_cast<int>(raw));
    }
    static IntegratorOptions options(double dtp) {
        IntegratorOptions o;
        o.dt = dtp;
        return o;
    }

    PoincareRunner(GridPtr g, const ForcingSpec& fs, double T, double dt)
        : n(steps_for(T, dt)), dtp(T / n), integ(std::move(g), fs, options(T / n)) {}

    SpectralField apply(const SpectralField& a) {
        State s = integ.make_state(a, 0.0);
        for (int i = 0; i < n; ++i) integ.step(s);
        return std::move(s.v);
    }

    int n;
    double dtp;
    Integrator integ;
};

// Restarted GMRES with modified Gram-Schmidt and Givens rotations on the
// packed degrees of freedom.  Returns the relative residual reached.
double gmres_solve(const std::function<void(const std::vector<double>&, std::vector<double>&)>& op,
                   const std::vector<double>& b, std::vector<double>& x, int m, int cycles,
                   double rtol) {
    const size_t nd = b.size();
    x.assign(nd, 0.0);
    const double bnorm = vec_norm(b);
    if (bnorm == 0.0) return 0.0;

    std::vector<std::vector<double>> V;
    std::vector<double> H(static_cast<size_t>(m + 1) * m), cs(m), sn(m), g(m + 1);
    std::vector<double> w(nd), r(nd);
    double rel = 1.0;

    for (int cycle = 0; cycle < cycles && rel > rtol; ++cycle) {
        if (cycle == 0) {
            r = b;
        } else {
            op(x, w);
            for (size_t i = 0; i < nd; ++i) r[i] = b[i] - w[i];
        }
        const double beta = vec_norm(r);
        rel = beta / bnorm;
        if (rel <= rtol || beta == 0.0) break;

        std::fill(H.begin(), H.end(), 0.0);
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        V.assign(1, r);
        for (size_t i = 0; i < nd; ++i) V[0][i] /= beta;

        int j = 0;
        bool breakdown = false;
        for (; j < m; ++j) {
            op(V[j], w);
            for (int i = 0; i <= j; ++i) {
                const double hij = vec_dot(w, V[i]);
                H[static_cast<size_t>(i) * m + j] = hij;
                for (size_t k = 0; k < nd; ++k) w[k] -= hij * V[i][k];
            }
            const double hn = vec_norm(w);
            H[static_cast<size_t>(j + 1) * m + j] = hn;
            if (hn > 0.0) {
                V.push_back(w);
                for (size_t k = 0; k < nd; ++k) V[j + 1][k] /= hn;
            } else {
                breakdown = true;
            }
            for (int i = 0; i < j; ++i) {
                const double h0 = H[static_cast<size_t>(i) * m + j];
                const double h1 = H[static_cast<size_t>(i + 1) * m + j];
                H[static_cast<size_t>(i) * m + j] = cs[i] * h0 + sn[i] * h1;
                H[static_cast<size_t>(i + 1) * m + j] = -sn[i] * h0 + cs[i] * h1;
            }
            const double a0 = H[static_cast<size_t>(j) * m + j];
            const double a1 = H[static_cast<size_t>(j + 1) * m + j];
            const double rr = std::hypot(a0, a1);
            if (rr == 0.0) {
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else {
                cs[j] = a0 / rr;
                sn[j] = a1 / rr;
            }
            H[static_cast<size_t>(j) * m + j] = rr;
            H[static_cast<size_t>(j + 1) * m + j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            rel = std::abs(g[j + 1]) / bnorm;
            if (rel <= rtol || breakdown) {
                ++j;
                break;
            }
        }

        std::vector<double> y(j, 0.0);
        for (int i = j - 1; i >= 0; --i) {
            double s = g[i];
            for (int l = i + 1; l < j; ++l) s -= H[static_cast<size_t>(i) * m + l] * y[l];
            y[i] = s / H[static_cast<size_t>(i) * m + i];
        }
        for (int l = 0; l < j; ++l)
            for (size_t k = 0; k < nd; ++k) x[k] += y[l] * V[l][k];
        if (breakdown) break;
    }
    return rel;
}

// Shared epilogue: one continuous two-period run as an independent orbit
// check, the monitored single-period ledger, and the invariant-ball data.
void finish_shoot(ShootResult& out, PoincareRunner& run, const ForcingSpec& fs, double T,
                  double tol) {
    State s = run.integ.make_state(out.a_star, 0.0);
    for (int i = 0; i < run.n; ++i) run.integ.step(s);
    SpectralField v_period(out.a_star.grid);
    v_period.a = s.v.a;
    for (int i = 0; i < run.n; ++i) run.integ.step(s);
    out.verify_2T = diff_norm(s.v, v_period);
    if (out.verify_2T > 2.0 * tol)
        throw ConvergenceError("orbit failed the two-period consistency check: " +
                                   format_g17(out.verify_2T) + " > " + format_g17(2.0 * tol),
                               out.residuals, out.iterations);

    IntegratorOptions opt;
    opt.dt = run.dtp;
    opt.monitors = true;
    auto traced = integrate(out.a_star, 0.0, T, run.dtp, fs, std::max(1, run.n / 256), opt);
    out.orbit_ledger = std::move(traced.ledger);

    out.ball_radius = ball_radius(fs, T, out.a_star.grid);
    out.ball_certified = std::sqrt(norm_l2_sq(out.a_star)) <= out.ball_radius + 2.0 * tol;
}

// Bordered stationary solve: lambda a + gamma cbar = b per wavevector with
// the depth-average constraint, pressure recovered from the multiplier.
void stokes_apply(const Grid& g, const SpectralField& b, SpectralField& a, PressureField& p) {
    const int K = g.K;
    std::vector<double> d(K);
    std::vector<cplx> bx(K), by(K), bpar(K), apar(K);

    auto solve_col = [&](int im, int in) {
        for (int k = 0; k < K; ++k) d[k] = g.lambda(im, in, k);
        for (int k = 0; k < K; ++k) {
            bx[k] = b.at(0, im, in, k);
            by[k] = b.at(1, im, in, k);
        }
        if (im == 0 && in == 0) {
            for (int k = 0; k < K; ++k) {
                a.at(0, 0, 0, k) = bx[k] / d[k];
                a.at(1, 0, 0, k) = by[k] / d[k];
            }
            p.at(0, 0) = 0.0;
            return;
        }
        const double m = g.wave_m(im), n = g.wave_n(in);
        const double kh = std::sqrt(m * m + n * n);
        const double eh = m / kh, en = n / kh;
        for (int k = 0; k < K; ++k) bpar[k] = eh * bx[k] + en * by[k];
        cplx gamma;
        solve_bordered(d.data(), bpar.data(), g, apar.data(), gamma);
        const int jm = g.conj_m(im), jn = g.conj_n(in);
        for (int k = 0; k < K; ++k) {
            const cplx aperp = (-en * bx[k] + eh * by[k]) / d[k];
            const cplx ax = eh * apar[k] - en * aperp;
            const cplx ay = en * apar[k] + eh * aperp;
            a.at(0, im, in, k) = ax;
            a.at(1, im, in, k) = ay;
            a.at(0, jm, jn, k) = std::conj(ax);
            a.at(1, jm, jn, k) = std::conj(ay);
        }
        const cplx pi_mn =
            pressure_from_multiplier(gamma, static_cast<int>(m), static_cast<int>(n), g);
        p.at(im, in) = pi_mn;
        p.at(jm, jn) = std::conj(pi_mn);
    };

    for (int in = 0; in < g.N / 2; ++in) solve_col(0, in);
    for (int im = 1; im < g.M / 2; ++im)
        for (int in = 0; in < g.N; ++in)
            if (in != g.N / 2) solve_col(im, in);
}

// Norm of lambda a + N(a) + grad_H pi - f with the multiplier chosen per
// wavevector by least squares, which is exactly the constrained stationary
// residual.  Writes the recovered pressure.
double steady_residual(const Grid& g, const SpectralField& a, const SpectralField& na,
                       const SpectralField& f, PressureField& p) {
    const int K = g.K;
    double ssum = 0.0;
    double cbar_sq = 0.0;
    for (int k = 0; k < K; ++k) cbar_sq += g.cbar[k] * g.cbar[k];

    auto column = [&](int im, int in) {
        if (im == 0 && in == 0) {
            for (int c = 0; c < 2; ++c)
                for (int k = 0; k < K; ++k)
                    ssum += std::norm(g.lambda(0, 0, k) * a.at(c, 0, 0, k) + na.at(c, 0, 0, k) -
                                      f.at(c, 0, 0, k));
            p.at(0, 0) = 0.0;
            return;
        }
        const double m = g.wave_m(im), n = g.wave_n(in);
        const double kh = std::sqrt(m * m + n * n);
        const double eh = m / kh, en = n / kh;
        cplx proj = 0.0;
        double local = 0.0;
        std::vector<cplx> rpar(K);
        for (int k = 0; k < K; ++k) {
            const double lam = g.lambda(im, in, k);
            const cplx rx = lam * a.at(0, im, in, k) + na.at(0, im, in, k) - f.at(0, im, in, k);
            const cplx ry = lam * a.at(1, im, in, k) + na.at(1, im, in, k) - f.at(1, im, in, k);
            rpar[k] = eh * rx + en * ry;
            const cplx rperp = -en * rx + eh * ry;
            local += std::norm(rperp);
            proj += g.cbar[k] * rpar[k];
        }
        const cplx gamma = -proj / cbar_sq;
        for (int k = 0; k < K; ++k) local += std::norm(rpar[k] + gamma * g.cbar[k]);
        ssum += 2.0 * local;
        const cplx pi_mn =
            pressure_from_multiplier(gamma, static_cast<int>(m), static_cast<int>(n), g);
        p.at(im, in) = pi_mn;
        p.at(g.conj_m(im), g.conj_n(in)) = std::conj(pi_mn);
    };

    for (int in = 0; in < g.N / 2; ++in) column(0, in);
    for (int im = 1; im < g.M / 2; ++im)
        for (int in = 0; in < g.N; ++in)
            if (in != g.N / 2) column(im, in);
    return std::sqrt(ssum);
}

}  // namespace

SpectralField poincare_map(const SpectralField& a, double T, double dt, const ForcingSpec& fs,
                           double* dt_used) {
    PoincareRunner run(a.grid, fs, T, dt);
    if (dt_used) *dt_used = run.dtp;
    return run.apply(a);
}

double ball_radius(const ForcingSpec& fs, double T, GridPtr grid) {
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("period must be positive");
    const double h = grid->h;
    const int panels = 64, nodes = 8;
    SpectralField f(grid);
    std::vector<double> xs, ws;
    double acc = 0.0;
    for (int pnl = 0; pnl < panels; ++pnl) {
        const double a = T * pnl / panels, b = T * (pnl + 1) / panels;
        gauss_legendre(nodes, a, b, xs, ws);
        for (int q = 0; q < nodes; ++q) {
            forcing_eval_into(fs, xs[q], f);
            acc += ws[q] * std::exp(2.0 * (xs[q] - T) / (h * h)) * std::sqrt(norm_l2_sq(f));
        }
    }
    return 2.0 * acc / (1.0 - std::exp(-2.0 * T / (h * h)));
}

BallCertificate certify_ball(const ForcingSpec& fs, double T, double dt, double R, int samples,
                             GridPtr grid, unsigned seed) {
    if (!(T > 0.0) || !(dt > 0.0)) throw ValidationError("period and dt must be positive");
    if (samples < 1) throw ValidationError("samples must be at least 1");
    if (!(R >= 0.0) || !std::isfinite(R))
        throw ValidationError("ball radius must be finite and nonnegative");
    const auto& g = *grid;

    BallCertificate cert;
    cert.R = R;
    cert.samples = samples;
    cert.slack = 1.0 + 10.0 * dt * dt * std::max(1.0, 2.0 * T / (g.h * g.h));
    cert.certified = true;
    cert.worst_margin = std::numeric_limits<double>::infinity();

    Advector adv(grid);
    SpectralField scratch(grid);
    const int nseg = 8;

    for (int si = 0; si < samples; ++si) {
        SpectralField v(grid);
        std::mt19937 rng(seed + 977u * static_cast<unsigned>(si));
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (auto& c : v.a) c = cplx(dist(rng), dist(rng));
        hermitianize(v);
        project_inplace(v);
        const double nrm = std::sqrt(norm_l2_sq(v));
        if (R > 0.0 && nrm > 0.0) {
            const double sc = R / nrm;
            for (auto& c : v.a) c *= sc;
        } else {
            v.zero();
        }

        bool noted = false;
        for (int j = 0; j < nseg; ++j) {
            const double t0 = T * j / nseg, t1 = T * (j + 1) / nseg;
            double target = 0.4;
            for (int attempt = 0;; ++attempt) {
                double sh = 0.0, sz = 0.0;
                adv.apply(v, v, scratch, Advector::Part::both, &sh, &sz);
                const double rate =
                    std::max(sh * std::max(g.padM, g.padN), sz * g.Q / g.h);
                double dtj = dt;
                if (rate > 0.0) dtj = std::min(dt, target / rate);
                const int nj = static_cast<int>(std::ceil((t1 - t0) / dtj - 1e-9));
                dtj = (t1 - t0) / nj;
                IntegratorOptions opt;
                opt.dt = dtj;
                Integrator integ(grid, fs, opt);
                State s = integ.make_state(v, t0);
                for (int i = 0; i < nj; ++i) integ.step(s);
                if (integ.cfl_advisories() == 0 || attempt == 3) {
                    if (integ.cfl_advisories() > 0 && !noted) {
                        cert.notes.push_back("sample " + std::to_string(si) +
                                             " kept Courant advisories after refinement");
                        noted = true;
                    }
                    v = std::move(s.v);
                    break;
                }
                target *= 0.5;
            }
        }

        const double exit_norm = std::sqrt(norm_l2_sq(v));
        cert.exit_norms.push_back(exit_norm);
        const double margin = (R * cert.slack - exit_norm) / (R > 0.0 ? R : 1.0);
        if (margin < cert.worst_margin) {
            cert.worst_margin = margin;
            cert.worst_sample = si;
        }
        if (exit_norm > R * cert.slack) cert.certified = false;
    }
    return cert;
}

ShootResult picard_solve(const SpectralField& a0, double T, double dt, const ForcingSpec& fs,
                         double tol, int maxit) {
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    if (maxit < 1) throw ValidationError("maxit must be at least 1");
    PoincareRunner run(a0.grid, fs, T, dt);

    ShootResult out;
    if (run.dtp != dt)
        out.notes.push_back("dt adjusted to " + format_g17(run.dtp) +
                            " so the period divides evenly");
    SpectralField a = project(a0);
    bool converged = false;
    for (int it = 0; it < maxit; ++it) {
        SpectralField next = run.apply(a);
        const double r = diff_norm(next, a);
        out.residuals.push_back(r);
        a = std::move(next);
        if (r <= tol) {
            out.iterations = it;
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("fixed-point iteration of the period map stalled above tol " +
                                   format_g17(tol) + " after " + std::to_string(maxit) +
                                   " applications",
                               out.residuals, maxit);
    out.a_star = std::move(a);
    finish_shoot(out, run, fs, T, tol);
    return out;
}

ShootResult newton_shoot(const SpectralField& a0, double T, double dt, const ForcingSpec& fs,
                         double tol, int maxit, int krylov_dim) {
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    if (maxit < 1) throw ValidationError("maxit must be at least 1");
    if (krylov_dim < 1) throw ValidationError("krylov_dim must be at least 1");
    PoincareRunner run(a0.grid, fs, T, dt);
    GridPtr grid = a0.grid;

    ShootResult out;
    if (run.dtp != dt)
        out.notes.push_back("dt adjusted to " + format_g17(run.dtp) +
                            " so the period divides evenly");

    SpectralField a = project(a0);
    SpectralField Sa = run.apply(a);
    double r = diff_norm(Sa, a);
    out.residuals.push_back(r);
    const double r0 = std::max(r, 1e-300);

    int outer = 0;
    std::vector<double> b, x;
    while (r > tol) {
        if (outer >= maxit)
            throw ConvergenceError("Newton shooting stalled above tol " + format_g17(tol) +
                                       " after " + std::to_string(maxit) + " outer iterations",
                                   out.residuals, outer);

        SpectralField F(grid);
        for (size_t i = 0; i < F.a.size(); ++i) F.a[i] = Sa.a[i] - a.a[i];
        pack_dofs(F, b);
        for (auto& e : b) e = -e;

        const double anorm = std::sqrt(norm_l2_sq(a));
        auto op = [&](const std::vector<double>& q, std::vector<double>& jq) {
            const double qn = vec_norm(q);
            if (qn == 0.0) {
                jq.assign(q.size(), 0.0);
                return;
            }
            const double eps_fd =
                std::sqrt(std::numeric_limits<double>::epsilon()) * (1.0 + anorm) / qn;
            SpectralField u(grid), ap(grid);
            unpack_dofs(q, u);
            for (size_t i = 0; i < ap.a.size(); ++i) ap.a[i] = a.a[i] + eps_fd * u.a[i];
            SpectralField Sap = run.apply(ap);
            for (size_t i = 0; i < Sap.a.size(); ++i)
                Sap.a[i] = ((Sap.a[i] - ap.a[i]) - F.a[i]) / eps_fd;
            pack_dofs(Sap, jq);
        };

        const double eta = std::min(0.1, std::sqrt(r / r0));
        const double reached = gmres_solve(op, b, x, krylov_dim, 3, eta);
        if (reached > 0.9)
            out.notes.push_back("inner solver stagnated (possible singular Jacobian) at outer " +
                                std::to_string(outer));

        SpectralField delta(grid);
        unpack_dofs(x, delta);
        double step = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 8; ++ls) {
            SpectralField atrial(grid);
            for (size_t i = 0; i < atrial.a.size(); ++i)
                atrial.a[i] = a.a[i] + step * delta.a[i];
            SpectralField Strial = run.apply(atrial);
            const double rt = diff_norm(Strial, atrial);
            if (rt <= r * (1.0 - 1e-4 * step) || rt <= tol) {
                a = std::move(atrial);
                Sa = std::move(Strial);
                r = rt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++outer;
        if (!accepted)
            throw ConvergenceError("Newton line search stalled at residual " + format_g17(r),
                                   out.residuals, outer);
        out.residuals.push_back(r);
    }
    out.iterations = outer;
    out.a_star = std::move(a);
    finish_shoot(out, run, fs, T, tol);
    return out;
}

SteadyResult steady_solve(const ForcingSpec& fs, GridPtr grid, double tol) {
    if (!fs.steady) throw ValidationError("steady solve needs a steady forcing");
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    const auto& g = *grid;

    SteadyResult out;
    out.v = SpectralField(grid);
    out.pressure = PressureField(grid);
    SpectralField f = forcing_eval(fs, 0.0, grid);
    Advector adv(grid);
    SpectralField a(grid), na(grid), rhs(grid), ga(grid), best(grid);
    PressureField pscr(grid);

    auto gval = [&](const SpectralField& xin, SpectralField& gout) {
        adv.apply(xin, xin, na);
        for (size_t i = 0; i < rhs.a.size(); ++i) rhs.a[i] = f.a[i] - na.a[i];
        stokes_apply(g, rhs, gout, pscr);
        for (size_t i = 0; i < gout.a.size(); ++i) gout.a[i] -= xin.a[i];
    };
    auto strong = [&](const SpectralField& xin) {
        adv.apply(xin, xin, na);
        return steady_residual(g, xin, na, f, pscr);
    };

    double r = strong(a);
    out.residuals.push_back(r);
    double best_r = r;
    best.a = a.a;
    int it = 0;
    const int warmup = 8, max_outer = 60;

    for (int wi = 0; wi < warmup && r > tol; ++wi) {
        gval(a, ga);
        for (size_t i = 0; i < a.a.size(); ++i) a.a[i] += 0.5 * ga.a[i];
        r = strong(a);
        out.residuals.push_back(r);
        ++it;
        if (r < best_r) {
            best_r = r;
            best.a = a.a;
        }
    }
    a.a = best.a;
    r = best_r;
    const double r0 = std::max(r, 1e-300);

    std::vector<double> b, x;
    while (r > tol) {
        if (it >= max_outer)
            throw ConvergenceError("stationary solve stalled above tol " + format_g17(tol),
                                   out.residuals, it);
        gval(a, ga);
        pack_dofs(ga, b);
        for (auto& e : b) e = -e;

        auto op = [&](const std::vector<double>& q, std::vector<double>& jq) {
            SpectralField u(grid), t1(grid), t2(grid);
            unpack_dofs(q, u);
            adv.apply(a, u, t1);
            adv.apply(u, a, t2);
            for (size_t i = 0; i < t1.a.size(); ++i) t1.a[i] += t2.a[i];
            stokes_apply(g, t1, t2, pscr);
            for (size_t i = 0; i < t2.a.size(); ++i) t2.a[i] = -t2.a[i] - u.a[i];
            pack_dofs(t2, jq);
        };

        const double eta = std::min(0.1, std::sqrt(r / r0));
        gmres_solve(op, b, x, 40, 3, eta);
        SpectralField delta(grid);
        unpack_dofs(x, delta);

        double step = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 10; ++ls) {
            SpectralField atrial(grid);
            for (size_t i = 0; i < atrial.a.size(); ++i)
                atrial.a[i] = a.a[i] + step * delta.a[i];
            const double rt = strong(atrial);
            if (rt <= r * (1.0 - 1e-4 * step) || rt <= tol) {
                a = std::move(atrial);
                r = rt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++it;
        if (!accepted)
            throw ConvergenceError("stationary Newton line search stalled at residual " +
                                       format_g17(r),
                                   out.residuals, it);
        out.residuals.push_back(r);
    }

    out.iterations = it;
    out.v = std::move(a);
    adv.apply(out.v, out.v, na);
    out.residual = steady_residual(g, out.v, na, f, out.pressure);

    SpectralField sv = poincare_map(out.v, 1.0, 1e-3, fs);
    out.fixed_point_error = diff_norm(sv, out.v);
    return out;
}

}  // namespace hpe
