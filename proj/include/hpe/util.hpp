#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hpe {

// Input or configuration rejected before any computation ran.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iterative solver exhausted its budget without reaching its tolerance.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual(residual), iterations(iterations) {}
    ConvergenceError(const std::string& what, std::vector<double> hist, int iterations)
        : std::runtime_error(what),
          residual(hist.empty() ? 0.0 : hist.back()),
          iterations(iterations),
          history(std::move(hist)) {}
    double residual;
    int iterations;
    std::vector<double> history;
};

// The state left the trusted regime: non-finite values or runaway energy.
struct BlowUpError : std::runtime_error {
    BlowUpError(const std::string& what, double t) : std::runtime_error(what), t(t) {}
    double t;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Worker threads for embarrassingly parallel loops (disjoint writes only,
// no shared reductions). The count comes from HPE_THREADS; 0 or unset picks
// a hardware default. Chunks are assigned statically, so results never
// depend on scheduling.
int worker_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

// Locale-independent decimal formatting with 17 significant digits, enough
// for exact double round trips.
std::string format_g17(double x);
bool parse_double(std::string_view s, double& out);

}  // namespace hpe
