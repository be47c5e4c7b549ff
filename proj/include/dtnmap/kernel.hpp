#pragma once

#include <optional>

#include "dtnmap/curve.hpp"
#include "dtnmap/grid.hpp"
#include "dtnmap/quad.hpp"

namespace dtn {

struct KernelContext {
    explicit KernelContext(BoundaryCurve c) : curve(std::move(c)) {}
    KernelContext(BoundaryCurve c, const TimeGrid& grid);

    BoundaryCurve curve;
    Eigen::VectorXd l_samples;      // l(t_n), filled when built on a grid
    Eigen::VectorXd slope_samples;  // l'(t_n)
};

// exp(i k^2 (s - t) - i k (l(s) - l(t)))
cplx E(cplx k, double s, double t, const KernelContext& ctx);

// exp(i l'(s)^2 (s - t)/4 - i l'(s) (l(s) - l(t))/2), unimodular
cplx G(double s, double t, const KernelContext& ctx);

// sqrt(t - s) [l'(s)/2 - (l(t) - l(s)) / (2 (t - s))] <= 0; DegenerateScale at s = t
double lambda0(double s, double t, const KernelContext& ctx);

// a(t, s) = sqrt(t - s) [l'(t) - (l(t) - l(s)) / (t - s)] / 2 >= 0
double a_coefficient(double t, double s, const KernelContext& ctx);

// b(t, x) = sqrt(t) [l'(t) - (l(t) - x) / t] / 2 >= 0 for x >= 0
double b_coefficient(double t, double x, const KernelContext& ctx);

// Exponent of the second k-integral of J:
// -i k^2 (s - t) - k (s - t) [l'(s) - (l(s) - l(t)) / (s - t)].
cplx second_exponent(double k, double s, double t, const KernelContext& ctx);

// Decay rate of the second k-integral: (t - s) [(l(t) - l(s))/(t - s) - l'(s)] >= 0,
// so that the integral reads int_0^inf exp(i (t - s) k^2 - rate k) dk.
double second_decay_rate(double s, double t, const KernelContext& ctx);

// J(s, t) from the Fresnel tail and the half-line quadratic-phase closed forms.
// DegenerateScale at s = t.
cplx J_closed(double s, double t, const KernelContext& ctx);

// sqrt(t - s) J(s, t), with the diagonal value (l'(t)/2) sqrt(pi) e^{-i pi/4}.
cplx J_regularised(double s, double t, const KernelContext& ctx);

cplx J_diagonal_limit(double t, const KernelContext& ctx);

// Both k-integrals of J by damped quadrature. The default rule uses the
// Gaussian-phase levels scaled by (t - s).
cplx J_direct(double s, double t, const KernelContext& ctx,
              const std::optional<DampedOscillatoryRule>& rule = std::nullopt);

// (1/pi) * integral of E(k, s, t) over the contour dOmega2^-(t):
// -(e^{-i pi/4}/sqrt(pi)) exp(i (l(t) - l(s))^2 / (4 (t - s))) / sqrt(t - s).
cplx forcing_kernel_boundary(double s, double t, const KernelContext& ctx);
// sqrt(t - s) * forcing_kernel_boundary, finite at s = t.
cplx forcing_kernel_boundary_regularised(double s, double t, const KernelContext& ctx);

// -(1/pi) * integral of exp(-i k^2 t + i k l(t) - i k x) over dOmega2^-(t):
// (e^{-i pi/4}/sqrt(pi)) exp(i (l(t) - x)^2 / (4 t)) / sqrt(t). DegenerateScale at t = 0.
// With these two kernels the Volterra forcing is
// g(t) = int_0^t K_b(s, t) f0'(s) ds + int_0^inf K_i(t, x) q0'(x) dx.
cplx forcing_kernel_initial(double t, double x, const KernelContext& ctx);

struct KernelMatrix {
    TimeGrid grid;
    Eigen::MatrixXcd jreg;  // (n, m) = sqrt(t_n - s_m) J(s_m, t_n), m <= n
    Eigen::VectorXcd diag;
};

KernelMatrix assemble_kernel_matrix(const TimeGrid& grid, const KernelContext& ctx);

}  // namespace dtn
