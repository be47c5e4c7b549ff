#include "dtnmap/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "dtnmap/errors.hpp"

namespace dtn {

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077712881431860, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a, b;
    cplx value;
    double error;
    double roundoff;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk21(const ComplexIntegrand& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx kron = kWgk[10] * fc, gauss = 0.0;
    double resabs = kWgk[10] * std::abs(fc);
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        const cplx f1 = f(c - dx), f2 = f(c + dx);
        kron += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    kron *= h;
    gauss *= h;
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(h) * resabs;
    return {a, b, kron, std::max(std::abs(kron - gauss), roundoff), roundoff};
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // Jacobi matrix of the Legendre three-term recurrence
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussRule r;
    r.nodes = es.eigenvalues();
    r.weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
    return cache.emplace(n, std::move(r)).first->second;
}

cplx integrate_gauss(const ComplexIntegrand& f, double a, double b, int n, int panels) {
    const GaussRule& g = gauss_legendre(n);
    const double w = (b - a) / panels;
    cplx sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * w;
        for (int i = 0; i < n; ++i) sum += g.weights[i] * f(c + 0.5 * w * g.nodes[i]);
    }
    return 0.5 * w * sum;
}

QuadratureResult integrate_adaptive(const ComplexIntegrand& f, double a, double b, double abs_tol, double rel_tol,
                                    int initial_panels, int max_intervals) {
    QuadratureResult out;
    if (a == b) return out;
    std::vector<Segment> heap;
    heap.reserve(static_cast<size_t>(initial_panels) * 2);
    cplx total = 0.0;
    double err = 0.0;
    const double w = (b - a) / initial_panels;
    for (int p = 0; p < initial_panels; ++p) {
        heap.push_back(gk21(f, a + p * w, p + 1 == initial_panels ? b : a + (p + 1) * w));
        total += heap.back().value;
        err += heap.back().error;
    }
    std::make_heap(heap.begin(), heap.end());
    int evaluations = initial_panels;
    while (!(err <= std::max(abs_tol, rel_tol * std::abs(total)))) {
        if (!std::isfinite(err) || static_cast<int>(heap.size()) >= max_intervals)
            throw NoConvergence(format_message("integrate_adaptive: no convergence on [%.6g, %.6g], error estimate %.3e",
                                               a, b, err));
        // the worst segment is already at rounding level: nothing left to gain
        if (heap.front().error <= heap.front().roundoff) break;
        std::pop_heap(heap.begin(), heap.end());
        const Segment s = heap.back();
        heap.pop_back();
        const double m = 0.5 * (s.a + s.b);
        const Segment l = gk21(f, s.a, m), r = gk21(f, m, s.b);
        evaluations += 2;
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end());
        if (evaluations % 4096 == 0) {
            total = 0.0;
            err = 0.0;
            for (const auto& seg : heap) {
                total += seg.value;
                err += seg.error;
            }
        }
    }
    out.value = total;
    out.error = err;
    out.evaluations = 21 * evaluations;
    return out;
}

cplx neville_at_zero(const Eigen::VectorXd& x, const Eigen::VectorXcd& y) {
    const Eigen::Index n = x.size();
    Eigen::VectorXcd p = y;
    for (Eigen::Index m = 1; m < n; ++m)
        for (Eigen::Index i = 0; i < n - m; ++i)
            p[i] = (-x[i + m] * p[i] + x[i] * p[i + 1]) / (x[i] - x[i + m]);
    return p[0];
}

DampedOscillatoryRule DampedOscillatoryRule::algebraic() {
    DampedOscillatoryRule r;
    r.epsilons.clear();
    for (int j = 0; j < 6; ++j) r.epsilons.push_back(1e-2 / std::pow(4.0, j));
    r.variable = ExtrapolationVariable::sqrt_epsilon;
    r.abs_tol = 1e-9;
    return r;
}

void DampedOscillatoryRule::validate() const {
    if (epsilons.size() < 3) throw ConfigError("damped rule: need at least three damping levels");
    for (size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0)) throw ConfigError("damped rule: damping levels must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw ConfigError("damped rule: damping levels must decrease strictly");
    }
    if (!(abs_tol > 0.0)) throw ConfigError("damped rule: abs_tol must be positive");
}

DampedResult extrapolate_damped(const std::function<cplx(double)>& damped, const DampedOscillatoryRule& rule) {
    rule.validate();
    const Eigen::Index n = static_cast<Eigen::Index>(rule.epsilons.size());
    Eigen::VectorXd x(n);
    Eigen::VectorXcd y(n);
    DampedResult out;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double e = rule.epsilons[j];
        x[j] = rule.variable == ExtrapolationVariable::epsilon ? e : std::sqrt(e);
        y[j] = damped(e);
        out.levels.push_back(y[j]);
    }
    out.value = neville_at_zero(x, y);
    const cplx coarser = neville_at_zero(x.head(n - 1), y.head(n - 1));
    out.extrapolation_change = std::abs(out.value - coarser);
    if (out.extrapolation_change > 10.0 * rule.abs_tol)
        throw NoConvergence(format_message("damped extrapolation: successive extrapolants differ by %.3e (limit %.3e)",
                                           out.extrapolation_change, 10.0 * rule.abs_tol));
    return out;
}

DampedResult damped_oscillatory_integral(const ComplexIntegrand& amplitude, const RealFunction& phase,
                                         const DampedOscillatoryRule& rule) {
    return extrapolate_damped(
        [&](double eps) {
            // e^{-eps R^2} below abs_tol / 1e3
            double R = std::sqrt(std::log(1e3 / rule.abs_tol) / eps);
            if (rule.truncation_radius > 0.0) R = std::min(R, rule.truncation_radius);
            auto f = [&](double k) {
                return amplitude(k) * std::exp(cplx(-eps * k * k, phase(k)));
            };
            const int panels = std::max(1, static_cast<int>(std::ceil(R)));
            return integrate_adaptive(f, 0.0, R, 1e-2 * rule.abs_tol, 0.0, panels, 1000000).value;
        },
        rule);
}

TruncatedResult truncated_decaying_oscillatory(const ComplexIntegrand& amplitude, const RealFunction& phase,
                                               const DecayEnvelope& envelope, double tail_bound, double quad_tol) {
    if (!(tail_bound > 0.0)) throw ConfigError("truncated integral: tail_bound must be positive");
    TruncatedResult out;
    double M = 1.0;
    while (envelope.tail(M) > tail_bound) {
        M *= 2.0;
        if (M > 1e8) throw BadDecayCertificate("truncated integral: envelope tail never drops below the bound");
    }
    for (int i = 0; i <= 64; ++i) {
        const double x = M * (1.0 + 3.0 * i / 64.0);
        const double a = std::abs(amplitude(x));
        if (a > envelope.pointwise(x) * (1.0 + 1e-12) + 1e-300)
            throw BadDecayCertificate("truncated integral: |amplitude| exceeds envelope at x = " + std::to_string(x));
    }
    auto f = [&](double x) { return amplitude(x) * std::exp(cplx(0.0, phase(x))); };
    const int panels = std::max(4, static_cast<int>(std::ceil(M)));
    QuadratureResult q = integrate_adaptive(f, 0.0, M, quad_tol, 0.0, panels, 200000);
    out.value = q.value;
    out.cutoff = M;
    out.tail_estimate = envelope.tail(M);
    out.quadrature_error = q.error;
    return out;
}

std::pair<double, double> abel_cell_weights(double t, double sm, double sm1) {
    const double A = t - sm, B = t - sm1, h = sm1 - sm;
    const double ra = std::sqrt(A), rb = std::sqrt(std::max(B, 0.0));
    const double d = (ra + rb) * (ra + rb);
    return {2.0 / 3.0 * h * (ra + 2.0 * rb) / d, 2.0 / 3.0 * h * (2.0 * ra + rb) / d};
}

AbelWeightTable abel_weights(const TimeGrid& grid) {
    const int n = grid.size();
    for (int i = 1; i < n; ++i)
        if (!(grid[i] > grid[i - 1])) throw GridError("abel_weights: grid must be strictly increasing");
    AbelWeightTable tab{grid, Eigen::MatrixXd::Zero(n, n)};
    for (int r = 1; r < n; ++r) {
        for (int m = 0; m < r; ++m) {
            auto [w0, w1] = abel_cell_weights(grid[r], grid[m], grid[m + 1]);
            tab.weights(r, m) += w0;
            tab.weights(r, m + 1) += w1;
        }
    }
    return tab;
}

}  // namespace dtn
