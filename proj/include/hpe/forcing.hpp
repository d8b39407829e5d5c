#pragma once

#include <string>
#include <vector>

#include "hpe/field.hpp"

namespace hpe {

// One forcing mode: horizontal wavevector, vertical profile, complex
// amplitude per velocity component, temporal harmonic q and phase.  The
// synthesized forcing always includes the conjugate term at (-m,-n), so the
// physical field is real.
struct ForcingMode {
    int m = 0, n = 0;
    enum class Profile { sine_mode, constant, monomial };
    Profile profile = Profile::sine_mode;
    int k = 0;       // index for sine_mode
    int degree = 0;  // exponent for monomial z^degree
    cplx ax{0.0}, ay{0.0};
    int q = 0;
    double phase = 0.0;
};

struct ForcingSpec {
    bool steady = true;
    double T = 0.0;  // period; ignored when steady
    std::vector<ForcingMode> modes;
};

// Named canonical forcings scaled by amplitude.  Available:
//   "zero"            no forcing
//   "single_harmonic" mode (1,0), y-component, first vertical profile, q=1
//   "steady_single"   the same mode with no time dependence
//   "two_mode"        modes (1,0) and (1,1) with mixed profiles, q=1 and q=2
ForcingSpec forcing_preset(const std::string& name, double amplitude, double T = 1.0);

// Checks every mode against the grid; returns one message per mode that the
// grid cannot represent (such modes contribute nothing to forcing_eval).
std::vector<std::string> forcing_validate(const ForcingSpec& fs, const Grid& g);

// Basis projection of f at time t.  Profiles that leave the sine span
// (constant, monomial) enter through their exact integrals against the basis.
SpectralField forcing_eval(const ForcingSpec& fs, double t, GridPtr grid);
void forcing_eval_into(const ForcingSpec& fs, double t, SpectralField& f);

// Exact integrals of z^d against the vertical basis, all degrees 0..dmax.
void monomial_profile_integrals(const Grid& g, int k, int dmax, std::vector<double>& out);

}  // namespace hpe
