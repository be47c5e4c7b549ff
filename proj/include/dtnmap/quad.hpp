#pragma once

#include <functional>
#include <vector>

#include "dtnmap/grid.hpp"

namespace dtn {

using ComplexIntegrand = std::function<cplx(double)>;
using RealFunction = std::function<double(double)>;

struct QuadratureResult {
    cplx value;
    double error = 0.0;
    int evaluations = 0;
};

struct GaussRule {
    Eigen::VectorXd nodes;    // on [-1, 1]
    Eigen::VectorXd weights;
};

// n-point Gauss-Legendre rule (Golub-Welsch); cached per n.
const GaussRule& gauss_legendre(int n);

// Fixed Gauss-Legendre quadrature on [a, b] split into `panels` equal pieces.
cplx integrate_gauss(const ComplexIntegrand& f, double a, double b, int n, int panels = 1);

// Globally adaptive 21-point Gauss-Kronrod on [a, b], starting from
// `initial_panels` equal pieces. NoConvergence when the interval budget is
// exhausted before the estimate drops below max(abs_tol, rel_tol |I|).
QuadratureResult integrate_adaptive(const ComplexIntegrand& f, double a, double b, double abs_tol,
                                    double rel_tol = 0.0, int initial_panels = 1, int max_intervals = 20000);

// Neville evaluation at x = 0 of the interpolant through (x_i, y_i).
cplx neville_at_zero(const Eigen::VectorXd& x, const Eigen::VectorXcd& y);

enum class ExtrapolationVariable {
    epsilon,       // integrands whose damped value is analytic in eps
    sqrt_epsilon,  // algebraically decaying amplitudes: expansion in sqrt(eps)
};

struct DampedOscillatoryRule {
    std::vector<double> epsilons{2e-3, 1e-3, 5e-4, 2.5e-4, 1.25e-4, 6.25e-5};
    double truncation_radius = 0.0;  // 0: chosen from eps and abs_tol
    double abs_tol = 1e-10;
    ExtrapolationVariable variable = ExtrapolationVariable::epsilon;

    // Six levels 1e-2 / 4^j, extrapolated in sqrt(eps), abs_tol 1e-9.
    static DampedOscillatoryRule algebraic();
    void validate() const;
};

struct DampedResult {
    cplx value;
    std::vector<cplx> levels;   // damped integrals per eps
    double extrapolation_change = 0.0;
};

// Extrapolation eps -> 0 of damped(eps) computed at rule.epsilons.
DampedResult extrapolate_damped(const std::function<cplx(double)>& damped, const DampedOscillatoryRule& rule);

// eps -> 0 limit of int_0^inf amplitude(k) exp(i phase(k)) exp(-eps k^2) dk.
DampedResult damped_oscillatory_integral(const ComplexIntegrand& amplitude, const RealFunction& phase,
                                         const DampedOscillatoryRule& rule = {});

struct DecayEnvelope {
    RealFunction pointwise;  // |amplitude(x)| <= pointwise(x) for x >= cutoff
    RealFunction tail;       // integral of pointwise over [M, inf)
};

struct TruncatedResult {
    cplx value;
    double cutoff = 0.0;
    double tail_estimate = 0.0;
    double quadrature_error = 0.0;
};

// int_0^inf amplitude(x) exp(i phase(x)) dx: adaptive quadrature on [0, M] with
// M the first power-of-two multiple of 1 at which envelope.tail(M) <= tail_bound.
// BadDecayCertificate if |amplitude| exceeds the envelope at sampled x >= M.
TruncatedResult truncated_decaying_oscillatory(const ComplexIntegrand& amplitude, const RealFunction& phase,
                                               const DecayEnvelope& envelope, double tail_bound,
                                               double quad_tol = 1e-12);

// Exact moments of piecewise-linear hat functions against (t_n - s)^(-1/2).
// Row n holds the weights of nodes 0..n; entries above the diagonal are zero.
struct AbelWeightTable {
    TimeGrid grid;
    Eigen::MatrixXd weights;
};

AbelWeightTable abel_weights(const TimeGrid& grid);

// Weights of a single cell [s_m, s_{m+1}] seen from t >= s_{m+1}:
// first -> node m, second -> node m+1.
std::pair<double, double> abel_cell_weights(double t, double sm, double sm1);

}  // namespace dtn
