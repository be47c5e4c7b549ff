#include "dtnmap/grid.hpp"

#include <cmath>

#include "dtnmap/errors.hpp"

namespace dtn {

TimeGrid::TimeGrid(Eigen::VectorXd nodes) : t_(std::move(nodes)) {
    if (t_.size() < 2) throw GridError("grid: need at least two nodes");
    if (t_[0] != 0.0) throw GridError("grid: first node must be 0");
    for (Eigen::Index i = 1; i < t_.size(); ++i)
        if (!(t_[i] > t_[i - 1])) throw GridError("grid: nodes must be strictly increasing");
}

TimeGrid TimeGrid::uniform(double T, int N) { return graded(T, N, 1.0); }

TimeGrid TimeGrid::graded(double T, int N, double gamma) {
    if (N < 1 || !(T > 0.0) || !(gamma > 0.0)) throw GridError("grid: need N >= 1, T > 0, gamma > 0");
    Eigen::VectorXd t(N + 1);
    for (int n = 0; n <= N; ++n)
        t[n] = gamma == 1.0 ? T * n / N : T * std::pow(static_cast<double>(n) / N, gamma);
    t[N] = T;
    return TimeGrid(std::move(t));
}

}  // namespace dtn
