#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hpe/dynamics.hpp"
#include "hpe/forcing.hpp"
#include "hpe/transforms.hpp"

namespace hpe {

// Full integration state.  The time is always derived as
// t = t_origin + step_index * dt so a resumed run reproduces the original
// step times bitwise.
struct State {
    SpectralField v;
    SpectralField prevN;     // nonlinear term at the previous step
    bool has_prevN = false;
    PressureField pressure;  // multiplier of the latest step (midpoint value)
    double t_origin = 0.0;
    uint64_t step_index = 0;
    double t = 0.0;

    explicit State(GridPtr g) : v(g), prevN(g), pressure(g) {}
};

// One ledger sample.  The monitor columns are filled only when the ledger has
// monitors enabled and are quiet NaN otherwise.
struct LedgerRow {
    double t = 0.0;
    double energy = 0.0;       // ||v||_2^2
    double dissipation = 0.0;  // ||grad v||_2^2
    double work = 0.0;         // (f, v)
    double dz_sq = 0.0;
    double gradH_sq = 0.0;
    double lap_sq = 0.0;
    double gradH_vbar_G_sq = 0.0;
    double vbar_H1G_sq = 0.0;
    double vtilde_l4_4 = 0.0;
    double gradH_vtilde_sq = 0.0;
    double gradH_p_G_sq = 0.0;
    double grad_dz_sq = 0.0;
    double f_l2_sq = 0.0;
};

struct EnergyLedger {
    bool monitors = false;
    std::vector<LedgerRow> rows;
    std::vector<std::string> notes;
};

// Sum over consecutive rows of |r_n| dt with
//   r_n = (E_{n+1} - E_n)/dt + (D_n + D_{n+1}) - (W_n + W_{n+1}),
// the trapezoidal defect of the energy balance.  Needs at least two rows.
double energy_balance_residual(const EnergyLedger& ledger);

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> snapshots;
};

struct IntegratorOptions {
    double dt = 1e-3;
    bool nonlinearity = true;     // off: linear diffusion + forcing only
    bool monitors = false;        // fill the extra ledger columns
    double cfl_limit = 0.5;       // advisory threshold, never fatal
    double blow_up_energy = 1e12; // ||v||_2^2 above this aborts
};

// Crank-Nicolson diffusion with Adams-Bashforth-2 advection and trapezoidal
// forcing.  The first step self-starts at second order with one
// predictor-corrector pass over the advection term, so restarted runs carry
// no order-one transient.  Every step solves the constraint exactly through
// one bordered system per wavevector and records the pressure multiplier.
class Integrator {
  public:
    Integrator(GridPtr grid, ForcingSpec fs, IntegratorOptions opt);

    // Projects v0 onto the constraint; appends a note when that changed it.
    State make_state(const SpectralField& v0, double t0,
                     std::vector<std::string>* notes = nullptr) const;

    void step(State& s);

    // Appends one ledger row for the current state.
    void sample(const State& s, EnergyLedger& ledger);

    uint64_t cfl_advisories() const { return cfl_advisories_; }
    double max_cfl_seen() const { return max_cfl_seen_; }
    const IntegratorOptions& options() const { return opt_; }
    const GridPtr grid;

  private:
    void eval_forcing(double t, SpectralField& f);

    ForcingSpec fs_;
    IntegratorOptions opt_;
    Advector adv_;
    SpectralField ncur_, fprev_, fnext_, fsamp_;
    double fnext_time_;
    bool fnext_valid_ = false;
    std::unique_ptr<FineSampler> fine_;
    BarotropicField vbar_;
    uint64_t cfl_advisories_ = 0;
    double max_cfl_seen_ = 0.0;
};

struct IntegrateResult {
    State state;
    EnergyLedger ledger;
    Trajectory trajectory;
};

// Fixed-step run from t0 to t1.  dt must divide t1 - t0; the ledger gets a
// row every sample_every steps plus the final state, snapshot_every > 0
// retains fields in the trajectory on the same pattern.
IntegrateResult integrate(const SpectralField& v0, double t0, double t1, double dt,
                          const ForcingSpec& fs, int sample_every,
                          const IntegratorOptions& opt = {}, int snapshot_every = 0);

}  // namespace hpe
