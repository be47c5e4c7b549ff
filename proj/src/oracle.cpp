#include "dtnmap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dtnmap/errors.hpp"
#include "dtnmap/specfun.hpp"

namespace dtn {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr double PI = std::numbers::pi;

cplx extrapolate(const std::vector<double>& eps, const std::vector<cplx>& values, double* change) {
    const Eigen::Index n = static_cast<Eigen::Index>(eps.size());
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(eps.data(), n);
    Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(values.data(), n);
    const cplx v = neville_at_zero(x, y);
    if (change) *change = n > 1 ? std::abs(v - neville_at_zero(x.head(n - 1), y.head(n - 1))) : 0.0;
    return v;
}

// Adaptive integral over [a, b] split at the given interior points.
cplx integrate_split(const ComplexIntegrand& f, double a, double b, std::vector<double> cuts, double tol) {
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cplx sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = std::clamp(cuts[i], a, b), hi = std::clamp(cuts[i + 1], a, b);
        if (hi > lo) sum += integrate_adaptive(f, lo, hi, tol, 0.0, 1, 200000).value;
    }
    return sum;
}

// Cuts clustering at t on the scales of the damped peak.
std::vector<double> peak_cuts(double t, double eps) {
    std::vector<double> cuts{t};
    for (double w : {eps, 10 * eps, 100 * eps, std::sqrt(eps)}) {
        cuts.push_back(t - w);
        cuts.push_back(t + w);
    }
    return cuts;
}

}  // namespace

cplx forward_transform(const ComplexFunction& f, const BoundaryCurve& curve, cplx k, double final_time,
                       double abs_tol) {
    auto g = [&](double s) { return std::exp(I * k * k * s - I * k * curve.value(s)) * f(s); };
    const int panels = 1 + static_cast<int>(std::norm(k) * final_time);
    return integrate_adaptive(g, 0.0, final_time, abs_tol, 0.0, panels, 200000).value;
}

cplx forward_transform_gauss(const ComplexFunction& f, const BoundaryCurve& curve, cplx k, double final_time,
                             double abs_tol) {
    auto g = [&](double s) { return std::exp(I * k * k * s - I * k * curve.value(s)) * f(s); };
    int panels = 1 + static_cast<int>(std::norm(k) * final_time);
    cplx prev = integrate_gauss(g, 0.0, final_time, 16, panels);
    for (int it = 0; it < 12; ++it) {
        panels *= 2;
        const cplx next = integrate_gauss(g, 0.0, final_time, 16, panels);
        if (std::abs(next - prev) <= abs_tol) return next;
        prev = next;
    }
    throw NoConvergence("forward_transform_gauss: panel doubling did not settle");
}

double TransformSample::recheck() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i)
        worst = std::max(worst, std::abs(F[i] - forward_transform_gauss(f, curve, k[i], final_time)));
    return worst;
}

TransformSample sample_transform(const ComplexFunction& f, const BoundaryCurve& curve, double final_time,
                                 const std::vector<cplx>& k) {
    TransformSample out{f, curve, final_time, k, {}};
    for (cplx kk : k) out.F.push_back(forward_transform(f, curve, kk, final_time));
    return out;
}

cplx ray_integral(double a, cplx d, cplx alpha, cplx beta, double eps) {
    const cplx gamma = alpha * d * d + eps;
    const cplx delta = beta * d - 2.0 * alpha * a * d;
    const cplx C = -alpha * a * a + beta * a;
    if (gamma.real() <= 0.0) throw DomainError("ray_integral: damped exponent does not decay");
    return d * (a * gaussian_halfline(gamma, delta, C) + d * gaussian_halfline_moment(gamma, delta, C));
}

cplx contour_kernel_damped(double s, double t, const KernelContext& ctx, double eps) {
    const auto& c = ctx.curve;
    const double a = 0.5 * c.slope(t);
    const cplx alpha = I * (t - s), beta = I * (c.value(t) - c.value(s));
    return -ray_integral(a, -I, alpha, beta, eps) + ray_integral(a, -1.0, alpha, beta, eps);
}

ForcingValue inversion_forcing(const ComplexFunction& f, const BoundaryCurve& curve, double t, double final_time,
                               const InversionOptions& options) {
    if (t < 0.0 || t > final_time) throw OutOfDomain(format_message("inversion_forcing: t = %g outside [0, T]", t));
    KernelContext ctx(curve);
    ForcingValue out;
    const bool at_end = t == 0.0 || t == final_time;
    const double d = std::min(t, final_time - t);
    double e = at_end ? options.max_epsilon : std::min(options.max_epsilon, options.edge_ratio * d);
    const int n = at_end ? options.endpoint_levels : options.levels;
    std::vector<double> x;
    for (int j = 0; j < n; ++j, e /= at_end ? 4.0 : 2.0) {
        out.epsilons.push_back(e);
        x.push_back(at_end ? std::sqrt(e) : e);
        auto g = [&](double s) { return contour_kernel_damped(s, t, ctx, e) * f(s); };
        out.levels.push_back(integrate_split(g, 0.0, final_time, peak_cuts(t, e), options.quad_tol) / PI);
    }
    out.value = extrapolate(x, out.levels, &out.extrapolation_change);
    out.local = at_end ? 0.5 : 1.0;
    if (out.extrapolation_change > options.tolerance)
        throw NoConvergence(format_message("inversion_forcing: extrapolants differ by %.3e at t = %g",
                                           out.extrapolation_change, t));
    return out;
}

cplx inversion_forcing_contour(const ComplexFunction& f, const BoundaryCurve& curve, double t, double final_time,
                               double eps) {
    if (!(eps > 0.0)) throw DomainError("inversion_forcing_contour: eps must be positive");
    const double a = 0.5 * curve.slope(t), lt = curve.value(t);
    // int_0^T E(k, s, t) f(s) ds
    auto H = [&](cplx k) {
        auto g = [&](double s) { return std::exp(-I * k * k * (t - s) + I * k * (lt - curve.value(s))) * f(s); };
        const int panels = 1 + static_cast<int>(std::norm(k) * final_time / 4.0);
        return integrate_split(g, 0.0, final_time, {t}, 1e-12 / panels);
    };
    auto ray = [&](double r) {
        const cplx kv = a - I * r, kh = a - r;
        return (I * kv * H(kv) - kh * H(kh)) * std::exp(-eps * r * r);
    };
    const double R = std::sqrt(std::log(1e13) / eps);
    return integrate_adaptive(ray, 0.0, R, 1e-10, 0.0, 1 + static_cast<int>(R), 200000).value / PI;
}

InversionResult invert_via_volterra(const ComplexFunction& f, const BoundaryCurve& curve, const TimeGrid& grid,
                                    const InversionOptions& options) {
    const int N = grid.size();
    const double T = grid.final_time();
    KernelContext ctx(curve, grid);
    InversionResult out{grid, ComplexSignal(N), ComplexSignal(N), 0.0};
    Eigen::VectorXd local(N);
    for (int n = 0; n < N; ++n) {
        const ForcingValue g = inversion_forcing(f, curve, grid[n], T, options);
        out.forcing[n] = g.value;
        local[n] = g.local;
        out.max_extrapolation_change = std::max(out.max_extrapolation_change, g.extrapolation_change);
    }
    VolterraProblem vp{grid, out.forcing, assemble_kernel_matrix(grid, ctx), 1.0 / PI, local};
    out.reconstruction = solve_volterra(vp).values;
    return out;
}

double DbarGeometry::a0() const { return 0.5 * curve.slope(0.0); }
double DbarGeometry::at() const { return 0.5 * curve.slope(t); }
double DbarGeometry::aT() const { return 0.5 * curve.slope(final_time); }

void DbarGeometry::validate() const {
    if (!(t > 0.0 && t < final_time))
        throw OutOfDomain(format_message("dbar geometry: t = %g not inside (0, %g)", t, final_time));
}

namespace {

// int_{k1}^{k2} k E(k, s, t) dk on the real axis
cplx real_segment(double k1, double k2, cplx alpha, cplx beta) {
    if (k2 <= k1) return 0.0;
    auto g = [&](double k) { return k * std::exp(-alpha * k * k + beta * k); };
    return integrate_gauss(g, k1, k2, 40, 1 + static_cast<int>((k2 - k1) * (k2 - k1) * std::abs(alpha)));
}

// Truncated 2D d-bar term at one damping level: -int ds f(s) int_0^K k E(k, s, t) e^{-eps y^2} i dy
// with k = l'(s)/2 + i y.
cplx omega3_term(const ComplexFunction& f, const DbarGeometry& g, double eps, double K, double tol) {
    const auto& c = g.curve;
    const double t = g.t, lt = c.value(t);
    auto outer = [&](double s) {
        const double as = 0.5 * c.slope(s);
        const cplx alpha = I * (t - s), beta = I * (lt - c.value(s));
        auto inner = [&](double y) {
            const cplx k(as, y);
            return I * k * std::exp(-alpha * k * k + beta * k - eps * y * y);
        };
        const int panels = 1 + std::min(4000, static_cast<int>(std::abs(t - s) * K * K / 20.0));
        return -integrate_adaptive(inner, 0.0, K, 1e-2 * tol, 0.0, panels, 400000).value * f(s);
    };
    return integrate_split(outer, 0.0, g.final_time, peak_cuts(t, eps), tol);
}

}  // namespace

FformResult eval_fform(const ComplexFunction& f, const DbarGeometry& geometry, const FformOptions& options) {
    geometry.validate();
    if (options.epsilons.empty()) throw ConfigError("eval_fform: no damping levels");
    const auto& c = geometry.curve;
    const double t = geometry.t, T = geometry.final_time, lt = c.value(t);
    const double a0 = geometry.a0(), at = geometry.at(), aT = geometry.aT();
    FformResult out;
    auto line_terms = [&](double eps) {
        FformTerms terms;
        auto part = [&](int which) {
            auto g = [&](double s) {
                const cplx alpha = I * (t - s), beta = I * (lt - c.value(s));
                const double as = 0.5 * c.slope(s);
                cplx v;
                if (which == 0)
                    v = -ray_integral(a0, -1.0, alpha, beta, eps) + ray_integral(at, -I, alpha, beta, eps) -
                        ray_integral(aT, 1.0, alpha, beta, eps);
                else if (which == 1)
                    v = -real_segment(std::max(at, as), aT, alpha, beta);
                else
                    v = real_segment(a0, std::min(at, as), alpha, beta);
                return v * f(s);
            };
            return integrate_split(g, 0.0, T, peak_cuts(t, eps), options.quad_tol);
        };
        terms.gamma12 = part(0);
        terms.gamma13 = part(1);
        terms.gamma23 = part(2);
        return terms;
    };
    auto combine = [](const FformTerms& x) {
        return (-x.gamma12 - x.gamma13 - x.gamma23 + x.omega3) / (2.0 * PI);
    };
    for (double eps : options.epsilons) {
        const double K = std::sqrt(options.k_max_factor / eps);
        FformTerms terms = line_terms(eps);
        terms.omega3 = omega3_term(f, geometry, eps, K, options.quad_tol);
        out.levels.push_back(combine(terms));
        out.terms = terms;
        out.k_max = K;
    }
    const double eps_min = options.epsilons.back();
    FformTerms doubled = out.terms;
    doubled.omega3 = omega3_term(f, geometry, eps_min, 2.0 * out.k_max, options.quad_tol);
    out.certificate_change = std::abs(combine(doubled) - out.levels.back());
    out.value = extrapolate(options.epsilons, out.levels, &out.extrapolation_change);
    if (out.certificate_change > options.tolerance)
        throw NoConvergence(format_message("eval_fform: doubling K_max changed the value by %.3e",
                                           out.certificate_change));
    if (out.extrapolation_change > options.tolerance)
        throw NoConvergence(format_message("eval_fform: eps extrapolation changed by %.3e", out.extrapolation_change));
    return out;
}

cplx baseline_forward(const ComplexFunction& f, double final_time, cplx k, double abs_tol) {
    auto g = [&](double s) { return std::exp(I * k * k * s) * f(s); };
    const int panels = 1 + static_cast<int>(std::norm(k) * final_time);
    return integrate_adaptive(g, 0.0, final_time, abs_tol, 0.0, panels, 200000).value;
}

cplx baseline_inverse(const ComplexFunction& f, double final_time, double t) {
    if (!(t > 0.0 && t < final_time))
        throw OutOfDomain(format_message("baseline_inverse: t = %g not inside (0, %g)", t, final_time));
    const double d = std::min(t, final_time - t);
    const cplx ft = f(t);
    std::vector<double> eps;
    std::vector<cplx> levels;
    for (double e = std::min(1e-3, 0.03 * d); eps.size() < 4; e /= 2.0) {
        auto g = [&](double s) { return (f(s) - ft) * (e / (e * e + (s - t) * (s - t))); };
        const cplx smooth = integrate_split(g, 0.0, final_time, peak_cuts(t, e), 1e-12);
        eps.push_back(e);
        levels.push_back((ft * (std::atan((final_time - t) / e) + std::atan(t / e)) + smooth) / PI);
    }
    return extrapolate(eps, levels, nullptr);
}

DampedResult baseline_inverse_damped(const SpectralFunction& F, double t, const DampedOscillatoryRule& rule) {
    return extrapolate_damped(
        [&](double eps) {
            const double R = rule.truncation_radius > 0.0 ? rule.truncation_radius
                                                          : std::sqrt(std::log(1e3 / rule.abs_tol) / eps);
            auto g = [&](double r) {
                const cplx legs = std::exp(cplx(0.0, -r * r * t)) * F(r) + std::exp(cplx(0.0, r * r * t)) * F(I * r);
                return r * legs * std::exp(-eps * r * r);
            };
            const int panels = 1 + static_cast<int>(R * R * t / 20.0);
            return integrate_adaptive(g, 0.0, R, rule.abs_tol, 0.0, panels, 2000000).value / PI;
        },
        rule);
}

}  // namespace dtn
