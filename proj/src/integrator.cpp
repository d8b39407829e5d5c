#include "hpe/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "hpe/constraint.hpp"
#include "hpe/util.hpp"

namespace hpe {

double energy_balance_residual(const EnergyLedger& ledger) {
    if (ledger.rows.size() < 2)
        throw ValidationError("energy balance residual needs at least two ledger rows");
    double acc = 0.0;
    for (size_t i = 0; i + 1 < ledger.rows.size(); ++i) {
        const LedgerRow& r0 = ledger.rows[i];
        const LedgerRow& r1 = ledger.rows[i + 1];
        const double dt = r1.t - r0.t;
        if (!(dt > 0.0))
            throw ValidationError("ledger rows must be strictly increasing in time");
        const double defect = (r1.energy - r0.energy) / dt +
                              (r0.dissipation + r1.dissipation) - (r0.work + r1.work);
        acc += std::abs(defect) * dt;
    }
    return acc;
}

namespace {

// One implicit solve of the dt-scaled step equation
//   (1 + dt lambda / 2) a + gamma cbar = b,
//   b = (1 - dt lambda / 2) a_old - dt nab + dt (f0 + f1) / 2,
// per wavevector.  The constraint couples only the component parallel to the
// wavevector, so the system splits into one bordered solve and one diagonal
// solve after rotating into the (parallel, perpendicular) frame.  Only the
// half-set 0 < m < M/2 plus (m = 0, 0 <= n < N/2) is solved; conjugate
// partners are mirrored so symmetry holds bitwise.  vout may alias vin.
void cn_step_solve(const Grid& g, double dt, const SpectralField& vin, const SpectralField* nab,
                   const SpectralField& f0, const SpectralField& f1, SpectralField& vout,
                   PressureField& pres) {
    const int K = g.K;
    std::vector<double> d(K), ex(K);
    std::vector<cplx> bx(K), by(K), bpar(K), apar(K);

    auto solve_col = [&](int im, int in) {
        for (int k = 0; k < K; ++k) {
            const double lam = g.lambda(im, in, k);
            d[k] = 1.0 + 0.5 * dt * lam;
            ex[k] = 1.0 - 0.5 * dt * lam;
        }
        for (int c = 0; c < 2; ++c) {
            auto& b = c == 0 ? bx : by;
            for (int k = 0; k < K; ++k) {
                cplx rhs = ex[k] * vin.at(c, im, in, k) +
                           0.5 * dt * (f0.at(c, im, in, k) + f1.at(c, im, in, k));
                if (nab) rhs -= dt * nab->at(c, im, in, k);
                b[k] = rhs;
            }
        }
        if (im == 0 && in == 0) {
            for (int k = 0; k < K; ++k) {
                vout.at(0, 0, 0, k) = bx[k] / d[k];
                vout.at(1, 0, 0, k) = by[k] / d[k];
            }
            pres.at(0, 0) = 0.0;
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
            vout.at(0, im, in, k) = ax;
            vout.at(1, im, in, k) = ay;
            vout.at(0, jm, jn, k) = std::conj(ax);
            vout.at(1, jm, jn, k) = std::conj(ay);
        }
        // gamma multiplies the dt-scaled equation, so the midpoint pressure
        // corresponds to gamma / dt.
        const cplx pi_mn =
            pressure_from_multiplier(gamma / dt, static_cast<int>(m), static_cast<int>(n), g);
        pres.at(im, in) = pi_mn;
        pres.at(jm, jn) = std::conj(pi_mn);
    };

    for (int in = 0; in < g.N / 2; ++in) solve_col(0, in);
    for (int im = 1; im < g.M / 2; ++im)
        for (int in = 0; in < g.N; ++in)
            if (in != g.N / 2) solve_col(im, in);
}

}  // namespace

Integrator::Integrator(GridPtr grid_in, ForcingSpec fs, IntegratorOptions opt)
    : grid(std::move(grid_in)),
      fs_(std::move(fs)),
      opt_(opt),
      adv_(grid),
      ncur_(grid),
      fprev_(grid),
      fnext_(grid),
      fsamp_(grid),
      fnext_time_(0.0),
      vbar_(grid) {
    if (!(opt_.dt > 0.0)) throw ValidationError("dt must be positive");
    if (!fs_.steady && !(fs_.T > 0.0))
        throw ValidationError("time-dependent forcing needs a positive period");
    if (fs_.steady) {
        eval_forcing(0.0, fprev_);
        fnext_.a = fprev_.a;
    }
}

void Integrator::eval_forcing(double t, SpectralField& f) { forcing_eval_into(fs_, t, f); }

State Integrator::make_state(const SpectralField& v0, double t0,
                             std::vector<std::string>* notes) const {
    if (v0.grid.get() != grid.get())
        throw ValidationError("initial field lives on a different grid");
    State s(grid);
    s.v.a = v0.a;
    s.t_origin = t0;
    s.t = t0;
    const double scale = std::sqrt(norm_l2_sq(s.v));
    const double res = constraint_residual(s.v);
    if (res > 1e-13 * (1.0 + scale)) {
        project_inplace(s.v);
        if (notes)
            notes->push_back("initial field projected, constraint residual was " +
                             format_g17(res));
    }
    return s;
}

void Integrator::step(State& s) {
    const double dt = opt_.dt;
    const double tn = s.t_origin + static_cast<double>(s.step_index) * dt;
    const double tn1 = s.t_origin + static_cast<double>(s.step_index + 1) * dt;

    if (!fs_.steady) {
        if (fnext_valid_ && fnext_time_ == tn) {
            std::swap(fprev_.a, fnext_.a);
        } else {
            eval_forcing(tn, fprev_);
        }
        eval_forcing(tn1, fnext_);
        fnext_time_ = tn1;
        fnext_valid_ = true;
    }

    if (!opt_.nonlinearity) {
        cn_step_solve(*grid, dt, s.v, nullptr, fprev_, fnext_, s.v, s.pressure);
    } else {
        double speed_h = 0.0, speed_z = 0.0;
        adv_.apply(s.v, s.v, ncur_, Advector::Part::both, &speed_h, &speed_z);
        const double courant =
            dt * std::max(speed_h * std::max(grid->padM, grid->padN),
                          speed_z * grid->Q / grid->h);
        max_cfl_seen_ = std::max(max_cfl_seen_, courant);
        if (courant > opt_.cfl_limit) ++cfl_advisories_;

        if (!s.has_prevN) {
            // Self-starting step: advance with the frozen advection term,
            // re-evaluate it at the predicted endpoint, then redo the step
            // with the trapezoidal average of the two.
            SpectralField vpred(grid), nmid(grid);
            cn_step_solve(*grid, dt, s.v, &ncur_, fprev_, fnext_, vpred, s.pressure);
            adv_.apply(vpred, vpred, nmid);
            for (size_t i = 0; i < nmid.a.size(); ++i)
                nmid.a[i] = 0.5 * (ncur_.a[i] + nmid.a[i]);
            cn_step_solve(*grid, dt, s.v, &nmid, fprev_, fnext_, s.v, s.pressure);
            s.prevN.a = ncur_.a;
            s.has_prevN = true;
        } else {
            for (size_t i = 0; i < ncur_.a.size(); ++i)
                s.prevN.a[i] = 1.5 * ncur_.a[i] - 0.5 * s.prevN.a[i];
            cn_step_solve(*grid, dt, s.v, &s.prevN, fprev_, fnext_, s.v, s.pressure);
            std::swap(s.prevN.a, ncur_.a);
        }
    }

    s.step_index += 1;
    s.t = s.t_origin + static_cast<double>(s.step_index) * dt;

    const double energy = norm_l2_sq(s.v);
    if (!std::isfinite(energy) || energy > opt_.blow_up_energy) {
        const auto& g = *grid;
        size_t worst = 0;
        double best = -1.0;
        for (size_t i = 0; i < s.v.a.size(); ++i) {
            const double mag = std::abs(s.v.a[i]);
            if (!(mag <= best)) {
                best = mag;
                worst = i;
            }
        }
        size_t rem = worst;
        const int k = static_cast<int>(rem % g.K);
        rem /= g.K;
        const int in = static_cast<int>(rem % g.N);
        rem /= g.N;
        const int im = static_cast<int>(rem % g.M);
        rem /= g.M;
        throw BlowUpError(
            "energy " + format_g17(energy) + " left the trusted regime at t = " +
                format_g17(s.t) + "; largest coefficient " + format_g17(best) +
                " in component " + std::to_string(rem) + " at mode (" +
                std::to_string(static_cast<int>(g.wave_m(im))) + ", " +
                std::to_string(static_cast<int>(g.wave_n(in))) + ", " + std::to_string(k) + ")",
            s.t);
    }
}

void Integrator::sample(const State& s, EnergyLedger& ledger) {
    const auto& g = *grid;
    LedgerRow row;
    row.t = s.t;
    row.energy = norm_l2_sq(s.v);
    row.dissipation = norm_grad_sq(s.v);

    const SpectralField* f = &fprev_;
    if (!fs_.steady) {
        eval_forcing(s.t, fsamp_);
        f = &fsamp_;
    }
    row.work = inner_l2(*f, s.v);

    if (ledger.monitors) {
        row.dz_sq = norm_dz_sq(s.v);
        row.gradH_sq = norm_gradH_sq(s.v);
        row.lap_sq = norm_lap_sq(s.v);
        vertical_average(s.v, vbar_);
        double gh = 0.0, h1 = 0.0;
        for (int c = 0; c < 2; ++c)
            for (int im = 0; im < g.M; ++im)
                for (int in = 0; in < g.N; ++in) {
                    const double kx = g.wave_m(im), ky = g.wave_n(in);
                    const double s2 = 4.0 * Grid::pi * Grid::pi * (kx * kx + ky * ky);
                    const double p = std::norm(vbar_.at(c, im, in));
                    gh += s2 * p;
                    h1 += (1.0 + s2) * p;
                }
        row.gradH_vbar_G_sq = gh;
        row.vbar_H1G_sq = h1;
        if (!fine_) fine_ = std::make_unique<FineSampler>(grid);
        row.vtilde_l4_4 = fine_->vtilde_l4_4(s.v);
        row.gradH_vtilde_sq = row.gradH_sq - g.h * gh;
        double gp = 0.0;
        for (int im = 0; im < g.M; ++im)
            for (int in = 0; in < g.N; ++in) {
                const double kx = g.wave_m(im), ky = g.wave_n(in);
                gp += 4.0 * Grid::pi * Grid::pi * (kx * kx + ky * ky) *
                      std::norm(s.pressure.at(im, in));
            }
        row.gradH_p_G_sq = gp;
        row.grad_dz_sq = norm_grad_dz_sq(s.v);
        row.f_l2_sq = norm_l2_sq(*f);
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.dz_sq = row.gradH_sq = row.lap_sq = nan;
        row.gradH_vbar_G_sq = row.vbar_H1G_sq = nan;
        row.vtilde_l4_4 = row.gradH_vtilde_sq = nan;
        row.gradH_p_G_sq = row.grad_dz_sq = row.f_l2_sq = nan;
    }
    ledger.rows.push_back(row);
}

IntegrateResult integrate(const SpectralField& v0, double t0, double t1, double dt,
                          const ForcingSpec& fs, int sample_every, const IntegratorOptions& opt,
                          int snapshot_every) {
    if (!v0.grid) throw ValidationError("initial field has no grid");
    if (sample_every < 1) throw ValidationError("sample_every must be at least 1");
    if (!(dt > 0.0)) throw ValidationError("dt must be positive");
    if (!(t1 >= t0)) throw ValidationError("t1 must not precede t0");
    const double span = t1 - t0;
    const long long n = std::llround(span / dt);
    if (std::abs(static_cast<double>(n) * dt - span) > 1e-9 * std::max(1.0, std::abs(span)))
        throw ValidationError("dt must divide the interval t1 - t0");

    IntegratorOptions local = opt;
    local.dt = dt;
    Integrator integ(v0.grid, fs, local);

    EnergyLedger ledger;
    ledger.monitors = local.monitors;
    for (const auto& warn : forcing_validate(fs, *v0.grid)) ledger.notes.push_back(warn);

    State s = integ.make_state(v0, t0, &ledger.notes);
    Trajectory traj;
    for (long long i = 0; i < n; ++i) {
        if (i % sample_every == 0) integ.sample(s, ledger);
        if (snapshot_every > 0 && i % snapshot_every == 0) {
            traj.times.push_back(s.t);
            traj.snapshots.push_back(s.v);
        }
        integ.step(s);
    }
    integ.sample(s, ledger);
    if (snapshot_every > 0) {
        traj.times.push_back(s.t);
        traj.snapshots.push_back(s.v);
    }
    if (integ.cfl_advisories() > 0)
        ledger.notes.push_back("advective Courant number exceeded " +
                               format_g17(local.cfl_limit) + " on " +
                               std::to_string(integ.cfl_advisories()) + " of " +
                               std::to_string(n) + " steps (max " +
                               format_g17(integ.max_cfl_seen()) + ")");
    return {std::move(s), std::move(ledger), std::move(traj)};
}

}  // namespace hpe
