#pragma once

#include "hpe/field.hpp"

namespace hpe {

// Diagnostic vertical velocity from the depth-integrated divergence:
// w = integral_z^0 div_H v.  Coefficients live on the normalized cosine
// profiles sqrt(2/h) cos(mu_k (z+h)); w(0) = 0 per mode by construction.
WField compute_w(const SpectralField& v);

// Pseudospectral advection B(v, phi) = v . grad_H phi + w(v) dz phi with an
// exact Galerkin projection of the products.  Holds its own scratch, so one
// instance must not be shared between threads; repeated calls reuse buffers.
class Advector {
  public:
    enum class Part { both, horizontal, vertical };

    explicit Advector(GridPtr grid);

    // out = projection of B(v, phi).  Optionally reports the largest
    // horizontal and vertical collocation speeds seen in v.
    void apply(const SpectralField& v, const SpectralField& phi, SpectralField& out,
               Part part = Part::both, double* max_speed_h = nullptr,
               double* max_speed_z = nullptr);

    const GridPtr grid;

  private:
    std::vector<cplx> grad_;    // (4, M, N, K) spectral scratch
    std::vector<cplx> wdz_;     // (3, M, N, K): w and dz phi
    std::vector<double> pv_;    // (2, padM, padN, Q) v samples
    std::vector<double> pg_;    // (4, padM, padN, Q) grad_H phi samples
    std::vector<double> pw_;    // (3, padM, padN, Q) w and dz phi samples
    std::vector<double> prod_;  // (2, padM, padN, Q) assembled products
};

// Convenience wrappers that allocate a fresh workspace.
SpectralField nonlinear_term(const SpectralField& v);
SpectralField advect(const SpectralField& v, const SpectralField& phi);

// Both advective pairings against a test field, next to the norm products
// that bound them (universal constants set to 1).
struct TrilinearReport {
    double lhs_h = 0.0;    // |(v1 . grad_H v3, v2)|
    double lhs_z = 0.0;    // |(w(v1) dz v3, v2)|
    double rhs_h = 0.0;    // ||v1||^1/2 ||v1||_H1^1/2 ||v2||_H1 ||grad_H v3||
    double rhs_z = 0.0;    // ||grad_H v1|| (||v2|| ||v2||_H1 ||dz v3|| ||dz v3||_H1)^1/2
    double ratio_h = 0.0;
    double ratio_z = 0.0;
};
TrilinearReport trilinear_estimate_report(const SpectralField& v1, const SpectralField& v2,
                                          const SpectralField& v3);

// Spectral building blocks shared with the diagnostics.
double norm_gradH_sq(const SpectralField& v);   // sum 4 pi^2 (m^2+n^2) |a|^2
double norm_dz_sq(const SpectralField& v);      // sum mu_k^2 |a|^2
double norm_grad_dz_sq(const SpectralField& v); // sum (4 pi^2 (m^2+n^2) + mu^2) mu^2 |a|^2
double norm_lap_sq(const SpectralField& v);     // sum lambda^2 |a|^2

}  // namespace hpe
