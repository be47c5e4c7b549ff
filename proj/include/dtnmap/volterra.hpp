#pragma once

#include <functional>
#include <vector>

#include "dtnmap/kernel.hpp"
#include "dtnmap/quad.hpp"

namespace dtn {

// lambda(t) f(t) = g(t) + scale * int_0^t j(s, t) / sqrt(t - s) f(s) ds on a grid.
struct VolterraProblem {
    TimeGrid grid;
    ComplexSignal forcing;
    KernelMatrix kernel;
    cplx scale = 1.0;
    Eigen::VectorXd local;  // lambda_n multiplying f_n on the left; empty means 1
};

struct VolterraSolution {
    TimeGrid grid;
    ComplexSignal values;
    double residual_norm = 0.0;
};

// Kernel matrix sampled from j(s, t) for s <= t on the grid.
KernelMatrix sample_kernel(const TimeGrid& grid, const std::function<cplx(double, double)>& j);

ComplexSignal sample_signal(const TimeGrid& grid, const std::function<cplx(double)>& g);

// Product-trapezoid marching. SingularStep when |1 - scale w_nn j_nn| < 1e-8.
VolterraSolution solve_volterra(const VolterraProblem& problem);

// max_n |f_n - g_n - scale sum_m w_nm j_nm f_m|
double volterra_residual(const VolterraProblem& problem, const AbelWeightTable& weights, const ComplexSignal& f);

struct OrderEstimate {
    std::vector<int> sizes;
    std::vector<double> errors;
    std::vector<double> pair_orders;  // log2-type rates between successive sizes
    double order = 0.0;               // least-squares slope of -log(error) against log(size)
    bool saturated = false;           // every error at rounding level; order meaningless
};

// error_at(N) returns the error of the N-interval solution against a reference.
OrderEstimate estimate_order(const std::vector<int>& sizes, const std::function<double(int)>& error_at,
                             double saturation_level = 1e-13);

}  // namespace dtn
