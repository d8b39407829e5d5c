#include "hpe/forcing.hpp"

#include <cmath>

#include "hpe/util.hpp"

namespace hpe {

ForcingSpec forcing_preset(const std::string& name, double amplitude, double T) {
    ForcingSpec fs;
    fs.T = T;
    if (name == "zero") {
        fs.steady = true;
        return fs;
    }
    if (name == "single_harmonic" || name == "steady_single") {
        ForcingMode mode;
        mode.m = 1;
        mode.n = 0;
        mode.profile = ForcingMode::Profile::sine_mode;
        mode.k = 0;
        mode.ay = amplitude;  // perpendicular to the wavevector
        if (name == "single_harmonic") {
            fs.steady = false;
            mode.q = 1;
        }
        fs.modes.push_back(mode);
        return fs;
    }
    if (name == "two_mode") {
        fs.steady = false;
        ForcingMode a;
        a.m = 1;
        a.n = 0;
        a.profile = ForcingMode::Profile::sine_mode;
        a.k = 0;
        a.ay = amplitude;
        a.q = 1;
        ForcingMode b;
        b.m = 1;
        b.n = 1;
        b.profile = ForcingMode::Profile::constant;
        b.ax = cplx(0.35, 0.1) * amplitude;
        b.ay = cplx(-0.35, -0.1) * amplitude;  // perpendicular to (1,1)
        b.q = 2;
        b.phase = 0.7;
        fs.modes.push_back(a);
        fs.modes.push_back(b);
        return fs;
    }
    throw ValidationError("unknown forcing preset: " + name);
}

std::vector<std::string> forcing_validate(const ForcingSpec& fs, const Grid& g) {
    std::vector<std::string> warnings;
    if (!fs.steady && !(fs.T > 0.0))
        throw ValidationError("forcing period must be positive");
    for (size_t i = 0; i < fs.modes.size(); ++i) {
        const auto& fm = fs.modes[i];
        const bool m_ok = std::abs(fm.m) <= g.M / 2 - 1;
        const bool n_ok = std::abs(fm.n) <= g.N / 2 - 1;
        if (!m_ok || !n_ok)
            warnings.push_back("forcing mode " + std::to_string(i) + " at (" +
                               std::to_string(fm.m) + "," + std::to_string(fm.n) +
                               ") is outside the grid and is truncated");
        if (fm.profile == ForcingMode::Profile::sine_mode && (fm.k < 0 || fm.k >= g.K))
            warnings.push_back("forcing mode " + std::to_string(i) + " vertical index " +
                               std::to_string(fm.k) + " is outside the grid and is truncated");
        if (fm.profile == ForcingMode::Profile::monomial && fm.degree < 0)
            throw ValidationError("monomial forcing degree must be nonnegative");
        if (fs.steady && fm.q != 0)
            throw ValidationError("steady forcing cannot carry a temporal harmonic");
    }
    return warnings;
}

void monomial_profile_integrals(const Grid& g, int k, int dmax, std::vector<double>& out) {
    // I_d = integral of z^d sin(mu (z+h)) over (-h, 0), by parts:
    //   I_d = (-h)^d / mu + (d/mu) C_{d-1},   C_d = -(d/mu) I_{d-1},
    // with I_0 = 1/mu and C_0 = (-1)^k/mu.  Coefficient = sqrt(2/h) I_d.
    const double mu = g.mu[k];
    const double amp = std::sqrt(2.0 / g.h);
    out.assign(dmax + 1, 0.0);
    double I = 1.0 / mu;
    double C = (k % 2 == 0 ? 1.0 : -1.0) / mu;
    out[0] = amp * I;
    double hp = 1.0;  // (-h)^d
    for (int d = 1; d <= dmax; ++d) {
        hp *= -g.h;
        const double In = hp / mu + (d / mu) * C;
        const double Cn = -(d / mu) * I;
        I = In;
        C = Cn;
        out[d] = amp * I;
    }
}

SpectralField forcing_eval(const ForcingSpec& fs, double t, GridPtr grid) {
    SpectralField f(std::move(grid));
    forcing_eval_into(fs, t, f);
    return f;
}

void forcing_eval_into(const ForcingSpec& fs, double t, SpectralField& f) {
    const Grid& g = *f.grid;
    f.zero();
    std::vector<double> mono;
    for (const auto& fm : fs.modes) {
        if (std::abs(fm.m) > g.M / 2 - 1 || std::abs(fm.n) > g.N / 2 - 1) continue;
        const int im = fm.m >= 0 ? fm.m : g.M + fm.m;
        const int in = fm.n >= 0 ? fm.n : g.N + fm.n;
        const int jm = g.conj_m(im), jn = g.conj_n(in);
        double arg = fm.phase;
        // fmod keeps the phase reduction exact, so f(t+T) = f(t) bitwise
        // whenever t+T is representable.
        if (!fs.steady && fm.q != 0)
            arg += 2.0 * Grid::pi * fm.q * std::fmod(t, fs.T) / fs.T;
        const cplx rot(std::cos(arg), std::sin(arg));
        for (int k = 0; k < g.K; ++k) {
            double prof;
            switch (fm.profile) {
                case ForcingMode::Profile::sine_mode:
                    if (fm.k < 0 || fm.k >= g.K) continue;
                    prof = (k == fm.k) ? 1.0 : 0.0;
                    break;
                case ForcingMode::Profile::constant:
                    prof = g.h * g.cbar[k];
                    break;
                case ForcingMode::Profile::monomial:
                    monomial_profile_integrals(g, k, fm.degree, mono);
                    prof = mono[fm.degree];
                    break;
                default:
                    prof = 0.0;
            }
            if (prof == 0.0) continue;
            const cplx cx = fm.ax * rot * prof, cy = fm.ay * rot * prof;
            f.at(0, im, in, k) += cx;
            f.at(1, im, in, k) += cy;
            f.at(0, jm, jn, k) += std::conj(cx);
            f.at(1, jm, jn, k) += std::conj(cy);
        }
    }
}

}  // namespace hpe
