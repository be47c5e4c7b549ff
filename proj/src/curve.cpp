#include "dtnmap/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dtnmap/errors.hpp"

namespace dtn {

namespace {

constexpr int kValidationSamples = 1000;

}  // namespace

const char* BoundaryCurve::kind_name() const {
    return kind_ == CurveKind::polynomial ? "polynomial" : "tabulated";
}

int BoundaryCurve::piece(double t) const {
    const int n = static_cast<int>(x_.size()) - 1;
    auto it = std::upper_bound(x_.data(), x_.data() + x_.size(), t);
    int i = static_cast<int>(it - x_.data()) - 1;
    return std::clamp(i, 0, n - 1);
}

double BoundaryCurve::value(double t) const {
    if (kind_ == CurveKind::polynomial) {
        double r = 0.0;
        for (Eigen::Index k = coeffs_.size() - 1; k >= 0; --k) r = r * t + coeffs_[k];
        return r;
    }
    const int i = piece(t);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h, B = (t - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] + ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double BoundaryCurve::slope(double t) const {
    if (kind_ == CurveKind::polynomial) {
        double r = 0.0;
        for (Eigen::Index k = coeffs_.size() - 1; k >= 1; --k) r = r * t + k * coeffs_[k];
        return r;
    }
    const int i = piece(t);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h, B = (t - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h - (3 * A * A - 1) / 6.0 * h * m_[i] + (3 * B * B - 1) / 6.0 * h * m_[i + 1];
}

double BoundaryCurve::curvature(double t) const {
    if (kind_ == CurveKind::polynomial) {
        double r = 0.0;
        for (Eigen::Index k = coeffs_.size() - 1; k >= 2; --k) r = r * t + k * (k - 1) * coeffs_[k];
        return r;
    }
    const int i = piece(t);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h, B = (t - x_[i]) / h;
    return A * m_[i] + B * m_[i + 1];
}

double BoundaryCurve::mean_slope(double s, double t) const {
    if (s == t) return slope(s);
    if (kind_ == CurveKind::polynomial) {
        // (t^k - s^k)/(t - s) = sum_j t^j s^(k-1-j)
        double r = 0.0;
        for (Eigen::Index k = 1; k < coeffs_.size(); ++k) {
            double q = 0.0, tj = 1.0;
            for (Eigen::Index j = 0; j < k; ++j) {
                q += tj * std::pow(s, static_cast<double>(k - 1 - j));
                tj *= t;
            }
            r += coeffs_[k] * q;
        }
        return r;
    }
    // l' is quadratic on each piece: two-point Gauss is exact.
    const double lo = std::min(s, t), hi = std::max(s, t);
    const double g = 0.5 / std::sqrt(3.0);
    double acc = 0.0, a = lo;
    while (a < hi) {
        const int i = piece(a);
        double b = (i + 1 < x_.size() - 1) ? std::min(hi, x_[i + 1]) : hi;
        if (b <= a) b = hi;
        const double mid = 0.5 * (a + b), w = b - a;
        acc += 0.5 * w * (slope(mid - g * w) + slope(mid + g * w));
        a = b;
    }
    return acc / (hi - lo);
}

double BoundaryCurve::slope_excess(double s, double t) const {
    if (kind_ == CurveKind::tabulated) return mean_slope(s, t) - slope(s);
    // (t - s) l[s, s, t];  l[s, s, t] of t^k is sum_{i+j=k-2} (i+1) s^i t^j
    double r = 0.0;
    for (Eigen::Index k = 2; k < coeffs_.size(); ++k) {
        double q = 0.0;
        for (Eigen::Index i = 0; i <= k - 2; ++i)
            q += (i + 1) * std::pow(s, static_cast<double>(i)) * std::pow(t, static_cast<double>(k - 2 - i));
        r += coeffs_[k] * q;
    }
    return (t - s) * r;
}

double BoundaryCurve::slope_deficit(double s, double t) const {
    if (kind_ == CurveKind::tabulated) return slope(t) - mean_slope(s, t);
    // (t - s) l[s, t, t];  l[s, t, t] of t^k is sum_{i+j=k-2} (j+1) s^i t^j
    double r = 0.0;
    for (Eigen::Index k = 2; k < coeffs_.size(); ++k) {
        double q = 0.0;
        for (Eigen::Index i = 0; i <= k - 2; ++i)
            q += (k - 1 - i) * std::pow(s, static_cast<double>(i)) * std::pow(t, static_cast<double>(k - 2 - i));
        r += coeffs_[k] * q;
    }
    return (t - s) * r;
}

void BoundaryCurve::validate() const {
    if (!(T_ > 0.0) || !std::isfinite(T_)) throw ConstraintViolation("curve: final time must be positive");
    if (std::abs(value(0.0)) > 1e-12) throw ConstraintViolation("curve: l(0) must vanish");
    double prev = -INFINITY;
    for (int i = 0; i <= kValidationSamples; ++i) {
        const double t = T_ * i / kValidationSamples;
        const double c = curvature(t);
        if (!(c > 0.0))
            throw ConstraintViolation("curve: l'' <= 0 at t = " + std::to_string(t));
        const double d = slope(t);
        if (!(d > prev)) throw ConstraintViolation("curve: l' not strictly increasing at t = " + std::to_string(t));
        prev = d;
    }
}

BoundaryCurve make_polynomial_curve(const std::vector<double>& coeffs, double T) {
    if (coeffs.empty()) throw ConstraintViolation("curve: empty coefficient list");
    BoundaryCurve c;
    c.kind_ = CurveKind::polynomial;
    c.T_ = T;
    c.coeffs_ = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    c.validate();
    return c;
}

BoundaryCurve make_tabulated_curve(const std::vector<double>& nodes, const std::vector<double>& values) {
    const int np = static_cast<int>(nodes.size());
    if (np < 4 || values.size() != nodes.size())
        throw ConstraintViolation("curve: tabulated kind needs >= 4 nodes and matching values");
    if (nodes[0] != 0.0) throw ConstraintViolation("curve: first node must be t = 0");
    for (int i = 1; i < np; ++i)
        if (!(nodes[i] > nodes[i - 1])) throw ConstraintViolation("curve: nodes must be strictly increasing");

    BoundaryCurve c;
    c.kind_ = CurveKind::tabulated;
    c.x_ = Eigen::Map<const Eigen::VectorXd>(nodes.data(), np);
    c.y_ = Eigen::Map<const Eigen::VectorXd>(values.data(), np);
    c.T_ = nodes.back();

    const int n = np - 1;
    Eigen::VectorXd h = c.x_.tail(n) - c.x_.head(n);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(np, np);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(np);
    // not-a-knot: l''' continuous at the second and penultimate nodes
    A(0, 0) = h[1];
    A(0, 1) = -(h[0] + h[1]);
    A(0, 2) = h[0];
    for (int i = 1; i < n; ++i) {
        A(i, i - 1) = h[i - 1];
        A(i, i) = 2.0 * (h[i - 1] + h[i]);
        A(i, i + 1) = h[i];
        rhs[i] = 6.0 * ((c.y_[i + 1] - c.y_[i]) / h[i] - (c.y_[i] - c.y_[i - 1]) / h[i - 1]);
    }
    A(n, n - 2) = h[n - 1];
    A(n, n - 1) = -(h[n - 2] + h[n - 1]);
    A(n, n) = h[n - 2];
    c.m_ = A.partialPivLu().solve(rhs);
    for (int i = 0; i < np; ++i)
        if (!(c.m_[i] > 0.0))
            throw ConstraintViolation("curve: spline second derivative <= 0 at node " + std::to_string(i));
    c.validate();
    return c;
}

double slope_inverse(const BoundaryCurve& curve, double kR) {
    const double T = curve.final_time();
    const double lo_k = 0.5 * curve.slope(0.0), hi_k = 0.5 * curve.slope(T);
    const double tol = 1e-12 * (1.0 + std::abs(kR));
    if (kR < lo_k - tol || kR > hi_k + tol)
        throw OutOfDomain("slope_inverse: kR = " + std::to_string(kR) + " outside [" + std::to_string(lo_k) +
                          ", " + std::to_string(hi_k) + "]");
    if (kR <= lo_k) return 0.0;
    if (kR >= hi_k) return T;
    double a = 0.0, b = T;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double r = 0.5 * curve.slope(m) - kR;
        if (std::abs(r) <= tol * 1e-2 || b - a <= 4e-16 * T) return m;
        (r < 0.0 ? a : b) = m;
    }
    return 0.5 * (a + b);
}

double slope_inverse_derivative(const BoundaryCurve& curve, double kR) {
    return 2.0 / curve.curvature(slope_inverse(curve, kR));
}

}  // namespace dtn
