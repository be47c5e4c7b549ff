#include "dtnmap/kernel.hpp"

#include <cmath>
#include <numbers>

#include "dtnmap/errors.hpp"
#include "dtnmap/specfun.hpp"

namespace dtn {

namespace {

const cplx kI(0.0, 1.0);
const double kSqrtPi = std::sqrt(std::numbers::pi);
const cplx kRot = std::polar(1.0, -std::numbers::pi / 4.0);  // e^{-i pi/4}

void require_ordered(double s, double t, const char* who) {
    if (!(s < t)) throw DegenerateScale(format_message("%s: need s < t (s = %.17g, t = %.17g)", who, s, t));
}

// The Gaussian-phase damping levels, in units of the phase scale.
DampedOscillatoryRule scaled_rule(double scale) {
    DampedOscillatoryRule r;
    r.epsilons.clear();
    for (int j = 0; j < 5; ++j) r.epsilons.push_back(scale * 1e-2 / std::pow(2.0, j));
    r.abs_tol = 1e-10;
    return r;
}

}  // namespace

KernelContext::KernelContext(BoundaryCurve c, const TimeGrid& grid) : curve(std::move(c)) {
    l_samples.resize(grid.size());
    slope_samples.resize(grid.size());
    for (int n = 0; n < grid.size(); ++n) {
        l_samples[n] = curve.value(grid[n]);
        slope_samples[n] = curve.slope(grid[n]);
    }
}

cplx E(cplx k, double s, double t, const KernelContext& ctx) {
    const double dl = ctx.curve.value(s) - ctx.curve.value(t);
    return std::exp(kI * k * k * (s - t) - kI * k * dl);
}

cplx G(double s, double t, const KernelContext& ctx) {
    // -l'^2 tau/4 + l' tau m/2 with tau = t - s and m the mean slope
    const double tau = t - s, ls = ctx.curve.slope(s);
    const double m = ctx.curve.mean_slope(s, t);
    return std::polar(1.0, tau * ls * (2.0 * m - ls) / 4.0);
}

double lambda0(double s, double t, const KernelContext& ctx) {
    require_ordered(s, t, "lambda0");
    return -0.5 * std::sqrt(t - s) * ctx.curve.slope_excess(s, t);
}

double a_coefficient(double t, double s, const KernelContext& ctx) {
    require_ordered(s, t, "a_coefficient");
    return 0.5 * std::sqrt(t - s) * ctx.curve.slope_deficit(s, t);
}

double b_coefficient(double t, double x, const KernelContext& ctx) {
    if (!(t > 0.0)) throw DegenerateScale("b_coefficient: t must be positive");
    return 0.5 * std::sqrt(t) * (ctx.curve.slope(t) - (ctx.curve.value(t) - x) / t);
}

double second_decay_rate(double s, double t, const KernelContext& ctx) {
    return (t - s) * ctx.curve.slope_excess(s, t);
}

cplx second_exponent(double k, double s, double t, const KernelContext& ctx) {
    return kI * (t - s) * k * k - k * second_decay_rate(s, t, ctx);
}

cplx J_diagonal_limit(double t, const KernelContext& ctx) {
    return 0.5 * ctx.curve.slope(t) * kSqrtPi * kRot;
}

cplx J_regularised(double s, double t, const KernelContext& ctx) {
    if (s == t) return J_diagonal_limit(t, ctx);
    require_ordered(s, t, "J_regularised");
    const double tau = t - s;
    const double m = ctx.curve.mean_slope(s, t);
    const double l0 = lambda0(s, t, ctx);
    // sqrt(tau) * hqp(tau, rate) with rate / (2 sqrt(tau)) = -lambda0
    const cplx first = std::polar(1.0, tau * m * m / 4.0) * fresnel_tail(l0);
    const cplx second = kI * G(s, t, ctx) * halfline_quadratic_phase_scaled(-l0);
    return 0.5 * m * (first - second);
}

cplx J_closed(double s, double t, const KernelContext& ctx) {
    require_ordered(s, t, "J_closed");
    return J_regularised(s, t, ctx) / std::sqrt(t - s);
}

cplx J_direct(double s, double t, const KernelContext& ctx, const std::optional<DampedOscillatoryRule>& rule) {
    require_ordered(s, t, "J_direct");
    const double tau = t - s;
    const DampedOscillatoryRule r = rule ? *rule : scaled_rule(tau);
    const double k0 = 0.5 * ctx.curve.slope(s);
    const double dl = ctx.curve.value(t) - ctx.curve.value(s);
    // first: int_{l'(s)/2}^inf exp(-i tau k^2 + i dl k) dk, shifted to [0, inf)
    auto one = [](double) { return cplx(1.0); };
    const cplx first = damped_oscillatory_integral(
        one, [&](double u) { return -tau * (u + k0) * (u + k0) + dl * (u + k0); }, r).value;
    const double rate = second_decay_rate(s, t, ctx);
    const cplx second = damped_oscillatory_integral(
        [&](double k) { return cplx(std::exp(-rate * k)); }, [&](double k) { return tau * k * k; }, r).value;
    const double m = ctx.curve.mean_slope(s, t);
    return 0.5 * m * (first - kI * G(s, t, ctx) * second);
}

cplx forcing_kernel_boundary_regularised(double s, double t, const KernelContext& ctx) {
    const double m = ctx.curve.mean_slope(s, t);
    return -kRot / kSqrtPi * std::polar(1.0, (t - s) * m * m / 4.0);
}

cplx forcing_kernel_boundary(double s, double t, const KernelContext& ctx) {
    require_ordered(s, t, "forcing_kernel_boundary");
    return forcing_kernel_boundary_regularised(s, t, ctx) / std::sqrt(t - s);
}

cplx forcing_kernel_initial(double t, double x, const KernelContext& ctx) {
    if (!(t > 0.0)) throw DegenerateScale("forcing_kernel_initial: t must be positive");
    const double d = ctx.curve.value(t) - x;
    return kRot / kSqrtPi * std::polar(1.0, d * d / (4.0 * t)) / std::sqrt(t);
}

KernelMatrix assemble_kernel_matrix(const TimeGrid& grid, const KernelContext& ctx) {
    const int n = grid.size();
    KernelMatrix K{grid, Eigen::MatrixXcd::Zero(n, n), Eigen::VectorXcd(n)};
    for (int r = 0; r < n; ++r) {
        for (int m = 0; m < r; ++m) K.jreg(r, m) = J_regularised(grid[m], grid[r], ctx);
        K.diag[r] = J_diagonal_limit(grid[r], ctx);
        K.jreg(r, r) = K.diag[r];
    }
    return K;
}

}  // namespace dtn
