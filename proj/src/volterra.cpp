#include "dtnmap/volterra.hpp"

#include <cmath>

#include "dtnmap/errors.hpp"

namespace dtn {

KernelMatrix sample_kernel(const TimeGrid& grid, const std::function<cplx(double, double)>& j) {
    const int n = grid.size();
    KernelMatrix K{grid, Eigen::MatrixXcd::Zero(n, n), Eigen::VectorXcd(n)};
    for (int r = 0; r < n; ++r) {
        for (int m = 0; m <= r; ++m) K.jreg(r, m) = j(grid[m], grid[r]);
        K.diag[r] = K.jreg(r, r);
    }
    return K;
}

ComplexSignal sample_signal(const TimeGrid& grid, const std::function<cplx(double)>& g) {
    ComplexSignal out(grid.size());
    for (int n = 0; n < grid.size(); ++n) out[n] = g(grid[n]);
    return out;
}

namespace {

void check_shapes(const VolterraProblem& p) {
    const int n = p.grid.size();
    if (p.forcing.size() != n || p.kernel.jreg.rows() != n || p.kernel.grid.size() != n)
        throw GridError("volterra: forcing, kernel and grid sizes differ");
    if ((p.kernel.grid.nodes() - p.grid.nodes()).cwiseAbs().maxCoeff() != 0.0)
        throw GridError("volterra: kernel built on a different grid");
    if (p.local.size() != 0 && p.local.size() != n) throw GridError("volterra: local coefficient size differs");
}

double local_at(const VolterraProblem& p, int n) { return p.local.size() == 0 ? 1.0 : p.local[n]; }

}  // namespace

double volterra_residual(const VolterraProblem& p, const AbelWeightTable& w, const ComplexSignal& f) {
    double worst = std::abs(local_at(p, 0) * f[0] - p.forcing[0]);
    for (int n = 1; n < p.grid.size(); ++n) {
        cplx acc = 0.0;
        for (int m = 0; m <= n; ++m) acc += w.weights(n, m) * p.kernel.jreg(n, m) * f[m];
        worst = std::max(worst, std::abs(local_at(p, n) * f[n] - p.forcing[n] - p.scale * acc));
    }
    return worst;
}

VolterraSolution solve_volterra(const VolterraProblem& p) {
    check_shapes(p);
    const int N = p.grid.size();
    const AbelWeightTable w = abel_weights(p.grid);
    ComplexSignal f(N);
    if (local_at(p, 0) == 0.0) throw SingularStep("volterra: zero local coefficient at t = 0");
    f[0] = p.forcing[0] / local_at(p, 0);
    for (int n = 1; n < N; ++n) {
        cplx acc = 0.0;
        for (int m = 0; m < n; ++m) acc += w.weights(n, m) * p.kernel.jreg(n, m) * f[m];
        const cplx denom = local_at(p, n) - p.scale * w.weights(n, n) * p.kernel.jreg(n, n);
        if (std::abs(denom) < 1e-8)
            throw SingularStep(format_message(
                "volterra: diagonal factor %.3e at step %d (t = %.6g); refine the grid", std::abs(denom), n, p.grid[n]));
        f[n] = (p.forcing[n] + p.scale * acc) / denom;
    }
    VolterraSolution sol{p.grid, f, 0.0};
    sol.residual_norm = volterra_residual(p, w, f);
    return sol;
}

OrderEstimate estimate_order(const std::vector<int>& sizes, const std::function<double(int)>& error_at,
                             double saturation_level) {
    OrderEstimate est;
    est.sizes = sizes;
    for (int n : sizes) est.errors.push_back(error_at(n));
    est.saturated = true;
    for (double e : est.errors) est.saturated = est.saturated && e <= saturation_level;
    for (size_t i = 1; i < sizes.size(); ++i)
        est.pair_orders.push_back(std::log(est.errors[i - 1] / est.errors[i]) /
                                  std::log(static_cast<double>(sizes[i]) / sizes[i - 1]));
    if (est.saturated || sizes.size() < 2) return est;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(sizes.size());
    for (size_t i = 0; i < sizes.size(); ++i) {
        const double x = std::log(static_cast<double>(sizes[i])), y = -std::log(est.errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    est.order = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return est;
}

}  // namespace dtn
