#pragma once

#include "dtnmap/grid.hpp"

namespace dtn {

// w(z) = exp(-z^2) erfc(-iz).
// Weideman's rational approximation (40 terms) in Im z >= 0; the lower half
// plane uses w(z) = 2 exp(-z^2) - w(-z), which overflows once Re(-z^2)
// exceeds ~709. No scaled representation is offered.
cplx faddeeva(cplx z);

cplx erfc(cplx z);
cplx erf(cplx z);
// Erfi(z) = -i erf(iz)
cplx erfi(cplx z);

// Integral of exp(-i lambda^2) over [lambda0, inf).
cplx fresnel_tail(double lambda0);

// The same integral written through Erfi(e^{3 pi i/4} lambda0); kept for
// cross-checking the Faddeeva route.
cplx fresnel_tail_erfi(double lambda0);

// Integral of exp(i a k^2 - b k) over [0, inf); a > 0, b >= 0.
// DegenerateScale if a <= 0.
cplx halfline_quadratic_phase(double a, double b);

// sqrt(a) * halfline_quadratic_phase(a, b) as a function of u = b / (2 sqrt(a)).
// Stays finite as a -> 0.
cplx halfline_quadratic_phase_scaled(double u);

// exp(C) * integral over [0, inf) of exp(-alpha y^2 + beta y), Re alpha >= 0,
// alpha != 0. The factor exp(C) is folded in before any exponential is formed,
// so large cancelling exponents stay finite.
cplx gaussian_halfline(cplx alpha, cplx beta, cplx C = 0.0);

// exp(C) * integral over [0, inf) of y exp(-alpha y^2 + beta y).
cplx gaussian_halfline_moment(cplx alpha, cplx beta, cplx C = 0.0);

}  // namespace dtn
