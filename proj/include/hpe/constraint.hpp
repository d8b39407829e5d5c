#pragma once

#include "hpe/field.hpp"

namespace hpe {

// L2-orthogonal projection onto the subspace with divergence-free vertical
// average.  Per wavevector, only the velocity component parallel to the
// wavevector participates; the projection removes its component along the
// depth-average weights cbar.
void project_inplace(SpectralField& v);
SpectralField project(const SpectralField& v);

// Max over wavevectors of |k_H . vbar|, the divergence of the vertical
// average in Fourier space.  Zero (to roundoff) on projected fields.
double constraint_residual(const SpectralField& v);

// Solves d[k] a[k] + gamma cbar[k] = b[k] subject to sum_k cbar[k] a[k] = 0
// for one wavevector's parallel component.  Diagonal-plus-rank-one, exact.
void solve_bordered(const double* d, const cplx* b, const Grid& g, cplx* a, cplx& gamma);

// The pressure coefficient whose projected horizontal gradient reproduces
// the constraint multiplier: pi = gamma / (i |k_H| h).
cplx pressure_from_multiplier(cplx gamma, int m, int n, const Grid& g);

}  // namespace hpe
