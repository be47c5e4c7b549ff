#pragma once

#include <functional>
#include <optional>

#include "dtnmap/kernel.hpp"
#include "dtnmap/quad.hpp"
#include "dtnmap/volterra.hpp"

namespace dtn {

using ComplexFunction = std::function<cplx(double)>;

// Constants of the boundary Volterra equation
//   f1 = memory * int J f1 + forcing_scale * [boundary_sign * int K_b f0' + int K_i q0'].
struct VolterraConstants {
    double memory;
    double forcing_scale;
    double boundary_sign;

    // 1/pi, 1, +1: the equation verified against exact solutions.
    static VolterraConstants derived() { return {1.0 / 3.141592653589793238, 1.0, 1.0}; }
    // 2/(3 pi), 2/3 and the opposite sign on the f0' term.
    static VolterraConstants two_thirds() { return {2.0 / (3.0 * 3.141592653589793238), 2.0 / 3.0, -1.0}; }
};

// Data on the half line x >= x0 with envelopes valid for all x >= x0.
struct HalfLineProfile {
    ComplexFunction value;
    ComplexFunction derivative;
    DecayEnvelope value_envelope;
    DecayEnvelope derivative_envelope;
    double origin = 0.0;
};

struct DirichletData {
    ComplexFunction value;       // f0(t) = q(l(t), t)
    ComplexFunction derivative;  // f0'(t)
};

struct DtnProblem {
    BoundaryCurve curve;
    DirichletData dirichlet;
    HalfLineProfile initial;

    double final_time() const { return curve.final_time(); }
    // ConstraintViolation on |q0(0) - f0(0)| > 1e-10; BadDecayCertificate if
    // |q0'| or |q0| exceed their envelopes at sampled x.
    void validate() const;
};

struct DtnOptions {
    VolterraConstants constants = VolterraConstants::derived();
    double tail_tol = 1e-10;
    double quad_tol = 1e-12;
};

// Forcing on the grid. g(0) is the exact t -> 0 limit forcing_scale * q0'(0).
ComplexSignal assemble_forcing(const DtnProblem& problem, const TimeGrid& grid, const DtnOptions& options = {});

// Only the q0' part, t > 0: int_0^inf K_i(t, x) q0'(x) dx.
cplx initial_forcing_term(const DtnProblem& problem, double t, const KernelContext& ctx, const DtnOptions& options);

struct NeumannTrace {
    TimeGrid grid;
    ComplexSignal f1;
    double residual_norm = 0.0;
};

NeumannTrace solve_dtn(const DtnProblem& problem, const TimeGrid& grid, const DtnOptions& options = {});

// q(x, t) = (t0 + i t)^{-1/2} exp(-(x - shift - 2 boost t)^2 / (4 (t0 + i t))) exp(i (boost x - boost^2 t))
struct ManufacturedSolution {
    double t0 = 1.0;
    double shift = 0.0;
    double boost = 0.0;
    double amplitude = 1.0;

    cplx q(double x, double t) const;
    cplx q_x(double x, double t) const;
    cplx q_xx(double x, double t) const;
    cplx q_t(double x, double t) const;

    // q(., t) on [x0, inf) with envelopes
    HalfLineProfile profile(double t, double x0) const;
    // int_{x0}^inf exp(-i k (x - x0)) q(x, t) dx, closed form
    cplx halfline_transform(cplx k, double t, double x0) const;

    DtnProblem problem(const BoundaryCurve& curve) const;
};

struct ManufacturedTraces {
    TimeGrid grid;
    ComplexSignal f0, f0_prime, f1;
    HalfLineProfile q0;
    HalfLineProfile q_at_T;  // on [l(T), inf)
};

ManufacturedTraces manufactured_traces(const ManufacturedSolution& sol, const BoundaryCurve& curve,
                                       const TimeGrid& grid);

// Piecewise-cubic Lagrange interpolant of grid samples.
ComplexFunction interpolate_signal(const TimeGrid& grid, const ComplexSignal& values);

struct GlobalRelationTerms {
    cplx neumann;    // i int_0^T e^{i k^2 s - i k l(s)} f1(s) ds
    cplx dirichlet;  // int_0^T e^{i k^2 s - i k l(s)} (k - l'(s)) f0(s) ds
    cplx initial;    // int_0^inf e^{-i k x} q0(x) dx
    cplx final;      // e^{i k^2 T} int_{l(T)}^inf e^{-i k x} q(x, T) dx
    cplx residual;   // neumann - dirichlet - initial + final
    double scale;    // largest term modulus
    double weight_sup = 0.0;  // max_s |e^{i k^2 s - i k l(s)}|
};

// DomainError if Im k > 0.
GlobalRelationTerms global_relation_residual(const DtnProblem& problem, const ComplexFunction& f1,
                                             const HalfLineProfile& q_at_T, cplx k, double quad_tol = 1e-13);
GlobalRelationTerms global_relation_residual(const DtnProblem& problem, const NeumannTrace& f1,
                                             const HalfLineProfile& q_at_T, cplx k, double quad_tol = 1e-13);

// (1/pi) int over dOmega2^-(t) of k exp(i k^2 (T - t) - i k (l(T) - l(t))) Qhat(k) dk with
// Qhat(k) = int_{l(T)}^inf exp(-i k (x - l(T))) q(x, T) dx, damped on both rays.
DampedResult final_state_contour_contribution(const std::function<cplx(cplx)>& Qhat, const BoundaryCurve& curve,
                                              double t);

}  // namespace dtn
