#pragma once

#include <vector>

#include "dtnmap/dtn.hpp"

namespace dtn {

using SpectralFunction = std::function<cplx(cplx)>;

// F(k) = int_0^T exp(i k^2 s - i k l(s)) f(s) ds
cplx forward_transform(const ComplexFunction& f, const BoundaryCurve& curve, cplx k, double final_time,
                       double abs_tol = 1e-10);
// Same integral by composite Gauss-Legendre with panel doubling.
cplx forward_transform_gauss(const ComplexFunction& f, const BoundaryCurve& curve, cplx k, double final_time,
                             double abs_tol = 1e-10);

struct TransformSample {
    ComplexFunction f;
    BoundaryCurve curve;
    double final_time;
    std::vector<cplx> k;
    std::vector<cplx> F;

    // max |F_i - forward_transform_gauss(k_i)|
    double recheck() const;
};

TransformSample sample_transform(const ComplexFunction& f, const BoundaryCurve& curve, double final_time,
                                 const std::vector<cplx>& k);

// int_0^inf (a + r d) exp(-alpha (a + r d)^2 + beta (a + r d) - eps r^2) d dr
// DomainError when the damped Gaussian does not decay.
cplx ray_integral(double a, cplx d, cplx alpha, cplx beta, double eps);

// Damped integral of k E(k, s, t) over the two rays of the lower contour at t:
// a - i r and a - r with a = l'(t)/2, r >= 0.
cplx contour_kernel_damped(double s, double t, const KernelContext& ctx, double eps);

// Damping levels: interior t uses eps_j = min(max_epsilon, edge_ratio d) / 2^j with d the
// distance to the nearer end of [0, T], extrapolated in eps. At t = 0 and t = T the
// limit has a sqrt(eps) term and uses max_epsilon / 4^j extrapolated in sqrt(eps).
struct InversionOptions {
    double max_epsilon = 1e-3;
    double edge_ratio = 0.03;
    int levels = 4;
    int endpoint_levels = 6;
    double tolerance = 1e-5;  // NoConvergence above this extrapolation change
    double quad_tol = 1e-11;
};

struct ForcingValue {
    cplx value;
    double local = 1.0;  // weight of f(t) in the limit: 1 inside, 1/2 at t = 0 and t = T
    std::vector<double> epsilons;
    std::vector<cplx> levels;
    double extrapolation_change = 0.0;
};

// eps -> 0 of (1/pi) int_0^T D_eps(s, t) f(s) ds = local f(t) - (1/pi) int_0^t J f
ForcingValue inversion_forcing(const ComplexFunction& f, const BoundaryCurve& curve, double t, double final_time,
                               const InversionOptions& options = {});

// Damped contour quadrature at fixed eps of (1/pi) int k E(k, ., t) f dk with the
// inner s-integral done pointwise in k. Equals inversion_forcing's level at eps.
cplx inversion_forcing_contour(const ComplexFunction& f, const BoundaryCurve& curve, double t, double final_time,
                               double eps);

struct InversionResult {
    TimeGrid grid;
    ComplexSignal forcing;
    ComplexSignal reconstruction;
    double max_extrapolation_change = 0.0;
};

// Reconstructs f from its contour data: f = forcing + (1/pi) int J f.
InversionResult invert_via_volterra(const ComplexFunction& f, const BoundaryCurve& curve, const TimeGrid& grid,
                                    const InversionOptions& options = {});

struct DbarGeometry {
    BoundaryCurve curve;
    double t;
    double final_time;
    // slopes halved at 0, t and T: the corners of the contours
    double a0() const;
    double at() const;
    double aT() const;
    void validate() const;
};

struct FformOptions {
    std::vector<double> epsilons{4e-3, 2e-3, 1e-3};
    double k_max_factor = 40.0;  // K_max = sqrt(k_max_factor / eps)
    double tolerance = 5e-3;
    double quad_tol = 1e-9;
};

struct FformTerms {
    cplx gamma12, gamma13, gamma23, omega3;
};

struct FformResult {
    cplx value;
    FformTerms terms;            // at the smallest eps
    std::vector<cplx> levels;
    double k_max = 0.0;          // at the smallest eps
    double certificate_change = 0.0;  // change of the value when K_max doubles
    double extrapolation_change = 0.0;
};

// Brute-force reconstruction of f(t) from the jump contours and the 2D d-bar term.
FformResult eval_fform(const ComplexFunction& f, const DbarGeometry& geometry, const FformOptions& options = {});

// Elementary pair without a moving boundary.
cplx baseline_forward(const ComplexFunction& f, double final_time, cplx k, double abs_tol = 1e-10);
// (1/pi) int over the first-quadrant boundary, evaluated by exchanging the order:
// the damped kernel is eps / (pi (eps^2 + (s - t)^2)).
cplx baseline_inverse(const ComplexFunction& f, double final_time, double t);
// Damped quadrature of (1/pi) int exp(-i k^2 t) k F(k) dk along both legs.
DampedResult baseline_inverse_damped(const SpectralFunction& F, double t,
                                     const DampedOscillatoryRule& rule = DampedOscillatoryRule::algebraic());

}  // namespace dtn
