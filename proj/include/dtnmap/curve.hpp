#pragma once

#include <Eigen/Dense>
#include <vector>

namespace dtn {

enum class CurveKind { polynomial, tabulated };

// Moving boundary x = l(t) on [0, T], strictly convex with l(0) = 0.
// Immutable after construction.
class BoundaryCurve {
public:
    double final_time() const { return T_; }
    CurveKind kind() const { return kind_; }
    const char* kind_name() const;

    double value(double t) const;
    double slope(double t) const;
    double curvature(double t) const;
    // (l(t) - l(s)) / (t - s), free of cancellation for polynomial curves;
    // falls back to l'(s) when s == t.
    double mean_slope(double s, double t) const;
    // mean_slope(s, t) - l'(s) >= 0 and l'(t) - mean_slope(s, t) >= 0 without
    // cancellation for polynomial curves (second divided differences).
    double slope_excess(double s, double t) const;
    double slope_deficit(double s, double t) const;

    // l'(0) < 0: convex but initially moving left. Accepted, reported.
    bool initially_decreasing() const { return slope(0.0) < 0.0; }

    const Eigen::VectorXd& coefficients() const { return coeffs_; }
    const Eigen::VectorXd& nodes() const { return x_; }
    const Eigen::VectorXd& node_values() const { return y_; }

    friend BoundaryCurve make_polynomial_curve(const std::vector<double>& coeffs, double T);
    friend BoundaryCurve make_tabulated_curve(const std::vector<double>& nodes,
                                              const std::vector<double>& values);

private:
    BoundaryCurve() = default;
    void validate() const;
    int piece(double t) const;

    CurveKind kind_ = CurveKind::polynomial;
    double T_ = 0.0;
    Eigen::VectorXd coeffs_;      // polynomial: c_0 + c_1 t + ...
    Eigen::VectorXd x_, y_, m_;   // tabulated: knots, values, second derivatives
};

// Throws ConstraintViolation unless p(0) = 0 and p'' > 0 on [0, T].
BoundaryCurve make_polynomial_curve(const std::vector<double>& coeffs, double T);

// Not-a-knot cubic spline through (nodes, values); nodes[0] must be 0.
// Rejected (ConstraintViolation) if any nodal second derivative is <= 0.
BoundaryCurve make_tabulated_curve(const std::vector<double>& nodes,
                                   const std::vector<double>& values);

// S(kR): the s in [0, T] with l'(s)/2 = kR. Bisection to 1e-12 (1 + |kR|).
// OutOfDomain outside [l'(0)/2, l'(T)/2].
double slope_inverse(const BoundaryCurve& curve, double kR);

// dS/dkR = 2 / l''(S(kR)).
double slope_inverse_derivative(const BoundaryCurve& curve, double kR);

}  // namespace dtn
