#include "dtnmap/dtn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dtnmap/errors.hpp"
#include "dtnmap/specfun.hpp"

namespace dtn {

namespace {

const cplx kI(0.0, 1.0);

// int_{x0}^inf of exp(i phase) * amplitude against the profile's envelope,
// in the shifted variable y = x - x0.
cplx halfline_integral(const ComplexFunction& amplitude, const RealFunction& phase, const DecayEnvelope& env,
                       double x0, double tail_tol, double quad_tol) {
    DecayEnvelope shifted{[&](double y) { return env.pointwise(x0 + y); },
                          [&](double M) { return env.tail(x0 + M); }};
    return truncated_decaying_oscillatory([&](double y) { return amplitude(x0 + y); },
                                          [&](double y) { return phase(x0 + y); }, shifted, tail_tol, quad_tol)
        .value;
}

}  // namespace

void DtnProblem::validate() const {
    const cplx q00 = initial.value(0.0), f00 = dirichlet.value(0.0);
    if (std::abs(q00 - f00) > 1e-10)
        throw ConstraintViolation(format_message("dtn: q0(0) = %.6g%+.6gi and f0(0) = %.6g%+.6gi are incompatible",
                                                 q00.real(), q00.imag(), f00.real(), f00.imag()));
    for (int i = 0; i <= 200; ++i) {
        const double x = initial.origin + 0.2 * i;
        if (std::abs(initial.derivative(x)) > initial.derivative_envelope.pointwise(x) * (1 + 1e-12) + 1e-300)
            throw BadDecayCertificate(format_message("dtn: |q0'| exceeds its envelope at x = %.6g", x));
        if (std::abs(initial.value(x)) > initial.value_envelope.pointwise(x) * (1 + 1e-12) + 1e-300)
            throw BadDecayCertificate(format_message("dtn: |q0| exceeds its envelope at x = %.6g", x));
    }
}

cplx initial_forcing_term(const DtnProblem& problem, double t, const KernelContext& ctx, const DtnOptions& options) {
    const double lt = ctx.curve.value(t);
    const cplx pref = forcing_kernel_initial(t, lt, ctx);  // phase-free part
    const cplx integral = halfline_integral(
        problem.initial.derivative, [&](double x) { return (lt - x) * (lt - x) / (4.0 * t); },
        problem.initial.derivative_envelope, 0.0, options.tail_tol, options.quad_tol);
    return pref * integral;
}

ComplexSignal assemble_forcing(const DtnProblem& problem, const TimeGrid& grid, const DtnOptions& options) {
    const KernelContext ctx(problem.curve, grid);
    const AbelWeightTable w = abel_weights(grid);
    const int N = grid.size();
    ComplexSignal fp(N);
    for (int n = 0; n < N; ++n) fp[n] = problem.dirichlet.derivative(grid[n]);
    const auto& c = options.constants;
    ComplexSignal g(N);
    g[0] = c.forcing_scale * problem.initial.derivative(0.0);
    for (int n = 1; n < N; ++n) {
        cplx boundary = 0.0;
        for (int m = 0; m <= n; ++m)
            boundary += w.weights(n, m) * forcing_kernel_boundary_regularised(grid[m], grid[n], ctx) * fp[m];
        g[n] = c.forcing_scale * (c.boundary_sign * boundary + initial_forcing_term(problem, grid[n], ctx, options));
    }
    return g;
}

NeumannTrace solve_dtn(const DtnProblem& problem, const TimeGrid& grid, const DtnOptions& options) {
    problem.validate();
    if (std::abs(grid.final_time() - problem.final_time()) > 1e-12 * problem.final_time())
        throw GridError("solve_dtn: grid does not end at the curve's final time");
    const KernelContext ctx(problem.curve, grid);
    VolterraProblem vp{grid, assemble_forcing(problem, grid, options), assemble_kernel_matrix(grid, ctx),
                       options.constants.memory, {}};
    VolterraSolution sol = solve_volterra(vp);
    return {grid, sol.values, sol.residual_norm};
}

cplx ManufacturedSolution::q(double x, double t) const {
    const cplx z(t0, t);
    const double c = shift + 2.0 * boost * t;
    return amplitude / std::sqrt(z) * std::exp(-(x - c) * (x - c) / (4.0 * z) + kI * (boost * x - boost * boost * t));
}

cplx ManufacturedSolution::q_x(double x, double t) const {
    const cplx z(t0, t);
    return (-(x - shift - 2.0 * boost * t) / (2.0 * z) + kI * boost) * q(x, t);
}

cplx ManufacturedSolution::q_xx(double x, double t) const {
    const cplx z(t0, t);
    const cplx d = -(x - shift - 2.0 * boost * t) / (2.0 * z) + kI * boost;
    return (d * d - 1.0 / (2.0 * z)) * q(x, t);
}

cplx ManufacturedSolution::q_t(double x, double t) const { return kI * q_xx(x, t); }

HalfLineProfile ManufacturedSolution::profile(double t, double x0) const {
    const double az = std::abs(cplx(t0, t));
    const double kappa = t0 / (4.0 * az * az);
    const double c = shift + 2.0 * boost * t;
    const double A = std::abs(amplitude) / std::sqrt(az);
    const double sk = std::sqrt(kappa), sp = std::sqrt(std::numbers::pi);
    const double b = std::abs(boost);
    auto mag = [=](double x) { return A * std::exp(-kappa * (x - c) * (x - c)); };
    HalfLineProfile p;
    p.origin = x0;
    p.value = [*this, t](double x) { return q(x, t); };
    p.derivative = [*this, t](double x) { return q_x(x, t); };
    p.value_envelope = {mag, [=](double M) { return A * sp / (2.0 * sk) * std::erfc(sk * (M - c)); }};
    p.derivative_envelope = {
        [=](double x) { return (std::abs(x - c) / (2.0 * az) + b) * mag(x); },
        [=](double M) {
            // int_M^inf |x - c| e^{-kappa (x-c)^2} dx <= 1/kappa for M < c
            const double lin = M >= c ? std::exp(-kappa * (M - c) * (M - c)) / (2.0 * kappa) : 1.0 / kappa;
            return A * (lin / (2.0 * az) + b * sp / (2.0 * sk) * std::erfc(sk * (M - c)));
        }};
    return p;
}

cplx ManufacturedSolution::halfline_transform(cplx k, double t, double x0) const {
    // y = x - x0: exponent -alpha y^2 + beta y + C
    const cplx z(t0, t);
    const double d = x0 - shift - 2.0 * boost * t;
    const cplx alpha = 1.0 / (4.0 * z);
    const cplx beta = -d / (2.0 * z) + kI * (boost - k);
    const cplx C = -d * d / (4.0 * z) + kI * (boost * x0 - boost * boost * t);
    return amplitude / std::sqrt(z) * gaussian_halfline(alpha, beta, C);
}

DtnProblem ManufacturedSolution::problem(const BoundaryCurve& curve) const {
    const ManufacturedSolution s = *this;
    const BoundaryCurve c = curve;
    DirichletData dir{[s, c](double t) { return s.q(c.value(t), t); },
                      [s, c](double t) {
                          const double x = c.value(t);
                          return s.q_x(x, t) * c.slope(t) + s.q_t(x, t);
                      }};
    return {curve, dir, profile(0.0, 0.0)};
}

ManufacturedTraces manufactured_traces(const ManufacturedSolution& sol, const BoundaryCurve& curve,
                                       const TimeGrid& grid) {
    const DtnProblem p = sol.problem(curve);
    ManufacturedTraces tr;
    tr.grid = grid;
    const int N = grid.size();
    tr.f0.resize(N);
    tr.f0_prime.resize(N);
    tr.f1.resize(N);
    for (int n = 0; n < N; ++n) {
        const double t = grid[n];
        tr.f0[n] = p.dirichlet.value(t);
        tr.f0_prime[n] = p.dirichlet.derivative(t);
        tr.f1[n] = sol.q_x(curve.value(t), t);
    }
    tr.q0 = p.initial;
    const double T = curve.final_time();
    tr.q_at_T = sol.profile(T, curve.value(T));
    return tr;
}

ComplexFunction interpolate_signal(const TimeGrid& grid, const ComplexSignal& values) {
    return [grid, values](double s) {
        const Eigen::VectorXd& t = grid.nodes();
        const int N = grid.size();
        int i = static_cast<int>(std::upper_bound(t.data(), t.data() + N, s) - t.data()) - 1;
        i = std::clamp(i, 0, N - 2);
        const int lo = std::clamp(i - 1, 0, std::max(0, N - 4));
        const int hi = std::min(N - 1, lo + 3);
        cplx r = 0.0;
        for (int a = lo; a <= hi; ++a) {
            double L = 1.0;
            for (int b = lo; b <= hi; ++b)
                if (b != a) L *= (s - t[b]) / (t[a] - t[b]);
            r += L * values[a];
        }
        return r;
    };
}

namespace {

GlobalRelationTerms relation_terms(const DtnProblem& problem, const std::function<cplx(const ComplexFunction&)>& over_time,
                                   const ComplexFunction& f1, const HalfLineProfile& q_at_T, cplx k,
                                   double quad_tol) {
    if (k.imag() > 0.0) throw DomainError("global relation: requires Im k <= 0");
    const BoundaryCurve& c = problem.curve;
    const double T = c.final_time();
    auto weight = [&](double s) { return std::exp(kI * k * k * s - kI * k * c.value(s)); };
    GlobalRelationTerms g;
    g.neumann = kI * over_time([&](double s) { return weight(s) * f1(s); });
    g.dirichlet = integrate_adaptive([&](double s) { return weight(s) * (k - c.slope(s)) * problem.dirichlet.value(s); },
                                     0.0, T, quad_tol, 1e-14, 8)
                      .value;
    // |e^{-ikx}| = e^{Im k x} <= 1 keeps the envelopes valid
    const double kr = k.real(), ki = k.imag();
    g.initial = halfline_integral(
        [&](double x) { return problem.initial.value(x) * std::exp(ki * x); }, [&](double x) { return -kr * x; },
        problem.initial.value_envelope, 0.0, 1e-14, quad_tol);
    const double lT = c.value(T);
    g.final = std::exp(kI * k * k * T) *
              halfline_integral([&](double x) { return q_at_T.value(x) * std::exp(ki * x); },
                                [&](double x) { return -kr * x; }, q_at_T.value_envelope, lT, 1e-14, quad_tol);
    g.residual = g.neumann - g.dirichlet - g.initial + g.final;
    g.scale = std::max({std::abs(g.neumann), std::abs(g.dirichlet), std::abs(g.initial), std::abs(g.final)});
    for (int i = 0; i <= 1000; ++i) g.weight_sup = std::max(g.weight_sup, std::abs(weight(T * i / 1000.0)));
    return g;
}

}  // namespace

GlobalRelationTerms global_relation_residual(const DtnProblem& problem, const ComplexFunction& f1,
                                             const HalfLineProfile& q_at_T, cplx k, double quad_tol) {
    const double T = problem.final_time();
    return relation_terms(
        problem, [&](const ComplexFunction& h) { return integrate_adaptive(h, 0.0, T, quad_tol, 1e-14, 8).value; }, f1,
        q_at_T, k, quad_tol);
}

GlobalRelationTerms global_relation_residual(const DtnProblem& problem, const NeumannTrace& f1,
                                             const HalfLineProfile& q_at_T, cplx k, double quad_tol) {
    const ComplexFunction interp = interpolate_signal(f1.grid, f1.f1);
    const TimeGrid& grid = f1.grid;
    // Gauss-Legendre per cell: the interpolant is a cubic on each cell
    auto cells = [&](const ComplexFunction& h) {
        cplx sum = 0.0;
        for (int n = 0; n + 1 < grid.size(); ++n) sum += integrate_gauss(h, grid[n], grid[n + 1], 10);
        return sum;
    };
    return relation_terms(problem, cells, interp, q_at_T, k, quad_tol);
}

DampedResult final_state_contour_contribution(const std::function<cplx(cplx)>& Qhat, const BoundaryCurve& curve,
                                              double t) {
    const double T = curve.final_time();
    const double tau = T - t;
    if (!(tau > 0.0)) throw DegenerateScale("final-state contour term: need t < T");
    const double a = 0.5 * curve.slope(t);
    const double dl = curve.value(T) - curve.value(t);
    auto h = [&](cplx k) { return k * std::exp(kI * k * k * tau - kI * k * dl) * Qhat(k); };
    DampedOscillatoryRule rule;
    rule.epsilons.clear();
    for (int j = 0; j < 5; ++j) rule.epsilons.push_back(tau * 1e-2 / std::pow(2.0, j));
    rule.abs_tol = 1e-9;
    return extrapolate_damped(
        [&](double eps) {
            const double R = std::sqrt(std::log(1e13) / eps);
            auto vertical = [&](double r) { return h(cplx(a, -r)) * std::exp(-eps * r * r); };
            auto horizontal = [&](double r) { return h(cplx(a - r, 0.0)) * std::exp(-eps * r * r); };
            const int panels = std::max(1, static_cast<int>(std::ceil(R)));
            const cplx v = integrate_adaptive(vertical, 0.0, R, 1e-12, 0.0, panels, 1000000).value;
            const cplx w = integrate_adaptive(horizontal, 0.0, R, 1e-12, 0.0, panels, 1000000).value;
            return (kI * v - w) / std::numbers::pi;
        },
        rule);
}

}  // namespace dtn
