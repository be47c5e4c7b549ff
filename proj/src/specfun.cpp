#include "dtnmap/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "dtnmap/errors.hpp"

namespace dtn {

namespace {

constexpr int kTerms = 40;

struct WeidemanTable {
    std::array<double, kTerms> a{};
    double L = 0.0;

    WeidemanTable() {
        const int M = 2 * kTerms;
        L = std::sqrt(kTerms / std::numbers::sqrt2);
        std::array<double, 2 * M> g{};
        for (int k = -M + 1; k < M; ++k) {
            const double t = L * std::tan(k * std::numbers::pi / (2.0 * M));
            g[k + M] = std::exp(-t * t) * (L * L + t * t);
        }
        for (int n = 1; n <= kTerms; ++n) {
            double s = 0.0;
            for (int k = -M + 1; k < M; ++k) s += g[k + M] * std::cos(std::numbers::pi * k * n / M);
            a[n - 1] = s / (2.0 * M);
        }
    }
};

const WeidemanTable& table() {
    static const WeidemanTable t;
    return t;
}

cplx faddeeva_upper(cplx z) {
    const auto& w = table();
    const cplx I(0.0, 1.0);
    const cplx den = w.L - I * z;
    const cplx Z = (w.L + I * z) / den;
    cplx p = 0.0;
    for (int n = kTerms - 1; n >= 0; --n) p = p * Z + w.a[n];
    return 2.0 * p / (den * den) + (1.0 / std::sqrt(std::numbers::pi)) / den;
}

const cplx kI(0.0, 1.0);
const double kSqrtPi = std::sqrt(std::numbers::pi);

}  // namespace

cplx faddeeva(cplx z) {
    if (z.imag() >= 0.0) return faddeeva_upper(z);
    return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

cplx erfc(cplx z) {
    // erfc(z) = exp(-z^2) w(iz); use the reflection for Re z < 0 so w is
    // evaluated in the upper half plane.
    if (z.real() >= 0.0) return std::exp(-z * z) * faddeeva(kI * z);
    return 2.0 - std::exp(-z * z) * faddeeva(-kI * z);
}

cplx erf(cplx z) {
    if (std::abs(z) < 0.1) {
        // Maclaurin series avoids the cancellation in 1 - erfc(z)
        const cplx z2 = z * z;
        cplx term = z, sum = z;
        for (int n = 1; n < 20; ++n) {
            term *= -z2 / static_cast<double>(n);
            sum += term / (2.0 * n + 1.0);
        }
        return 2.0 / kSqrtPi * sum;
    }
    return 1.0 - erfc(z);
}

cplx erfi(cplx z) { return -kI * erf(kI * z); }

cplx fresnel_tail(double lambda0) {
    const cplx rot = std::polar(1.0, 3.0 * std::numbers::pi / 4.0);
    const cplx phase = std::polar(1.0, -std::numbers::pi / 4.0 - lambda0 * lambda0);
    return 0.5 * kSqrtPi * phase * faddeeva(rot * lambda0);
}

cplx fresnel_tail_erfi(double lambda0) {
    const cplx rot = std::polar(1.0, 3.0 * std::numbers::pi / 4.0);
    return (kI + 1.0) / 2.0 * std::sqrt(std::numbers::pi / 2.0) * erfi(rot * lambda0) +
           0.5 * kSqrtPi * std::polar(1.0, -std::numbers::pi / 4.0);
}

cplx halfline_quadratic_phase_scaled(double u) {
    const cplx rot = std::polar(1.0, 3.0 * std::numbers::pi / 4.0);
    return 0.5 * kSqrtPi * std::polar(1.0, std::numbers::pi / 4.0) * faddeeva(rot * u);
}

cplx halfline_quadratic_phase(double a, double b) {
    if (!(a > 0.0)) throw DegenerateScale("halfline_quadratic_phase: a must be positive");
    const double ra = std::sqrt(a);
    return halfline_quadratic_phase_scaled(b / (2.0 * ra)) / ra;
}

cplx gaussian_halfline(cplx alpha, cplx beta, cplx C) {
    if (alpha.real() < 0.0 || alpha == 0.0) throw DomainError("gaussian_halfline: need Re alpha >= 0, alpha != 0");
    const cplx ra = std::sqrt(alpha);
    const cplx z = -beta / (2.0 * ra);
    // w(iz) is evaluated in the upper half plane only; otherwise reflect and
    // combine exp(C + z^2) before exponentiating
    if (z.real() >= 0.0) return std::exp(C) * 0.5 * kSqrtPi / ra * faddeeva(kI * z);
    return 0.5 * kSqrtPi / ra * (2.0 * std::exp(C + z * z) - std::exp(C) * faddeeva(-kI * z));
}

cplx gaussian_halfline_moment(cplx alpha, cplx beta, cplx C) {
    return (std::exp(C) + beta * gaussian_halfline(alpha, beta, C)) / (2.0 * alpha);
}

}  // namespace dtn
