#pragma once

#include <string>
#include <vector>

#include "hpe/integrator.hpp"

namespace hpe {

// Result of a periodic-orbit shot: the fixed point of the period map S,
// the history of ||S(a) - a||_2, the invariant-ball data, and an energy
// ledger sampled along the converged orbit.
struct ShootResult {
    SpectralField a_star;
    std::vector<double> residuals;
    int iterations = 0;
    double ball_radius = 0.0;
    bool ball_certified = false;  // ||a*||_2 <= R within the solver tolerance
    double verify_2T = 0.0;       // ||v(2T) - v(T)||_2 from one continuous run
    EnergyLedger orbit_ledger;
    std::vector<std::string> notes;
};

struct BallCertificate {
    bool certified = false;
    double R = 0.0;
    double slack = 1.0;  // allowed exit norm is R * slack
    int samples = 0;
    double worst_margin = 0.0;  // min over samples of (R slack - ||S(a)||)/R
    int worst_sample = -1;
    std::vector<double> exit_norms;
    std::vector<std::string> notes;
};

struct SteadyResult {
    SpectralField v;
    PressureField pressure;
    double residual = 0.0;           // stationary-equation norm at the solution
    double fixed_point_error = 0.0;  // ||S(v) - v||_2 over one unit period
    int iterations = 0;
    std::vector<double> residuals;
    std::vector<std::string> notes;
};

// v(T) from a fixed-step run started at a.  dt is rounded down to the
// nearest exact divisor of T; the value actually used is written to dt_used
// when given.
SpectralField poincare_map(const SpectralField& a, double T, double dt, const ForcingSpec& fs,
                           double* dt_used = nullptr);

// Radius of the invariant ball,
//   R = 2 integral_0^T exp(2(tau - T)/h^2) ||f(tau)||_2 dtau / (1 - exp(-2T/h^2)),
// evaluated with composite Gauss-Legendre quadrature in the stable
// exponent form.  Constant ||f|| = F gives R = h^2 F exactly.
double ball_radius(const ForcingSpec& fs, double T, GridPtr grid);

// Integrates `samples` random initial fields with ||a||_2 = R over one
// period and checks ||S(a)||_2 <= R * slack with
// slack = 1 + 10 dt^2 max(1, 2T/h^2).  Large-amplitude runs shorten the
// internal step to keep the advective Courant number moderate, which only
// sharpens the map being certified.
BallCertificate certify_ball(const ForcingSpec& fs, double T, double dt, double R, int samples,
                             GridPtr grid, unsigned seed = 1);

// Fixed-point iteration a <- S(a) until ||S(a) - a||_2 <= tol.  On success
// the orbit is re-verified over two continuous periods.  Throws
// ConvergenceError carrying the residual history when maxit is exhausted.
ShootResult picard_solve(const SpectralField& a0, double T, double dt, const ForcingSpec& fs,
                         double tol, int maxit);

// Matrix-free Newton on F(a) = S(a) - a with restarted GMRES inner solves
// on the packed degrees of freedom, forward-difference Jacobian products,
// and residual-decrease line search.  Same verification and errors as
// picard_solve.
ShootResult newton_shoot(const SpectralField& a0, double T, double dt, const ForcingSpec& fs,
                         double tol, int maxit, int krylov_dim);

// Stationary solution of the forced system: damped fixed-point warmup on
// the preconditioned form Stokes(f - N(v)) = v, then Newton with the exact
// bilinear Jacobian.  Convergence is measured on the stationary-equation
// residual with the least-squares pressure; the result is cross-checked as
// a fixed point of the period-1 map.
SteadyResult steady_solve(const ForcingSpec& fs, GridPtr grid, double tol);

}  // namespace hpe
