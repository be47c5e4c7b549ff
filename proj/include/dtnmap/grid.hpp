#pragma once

#include <Eigen/Dense>
#include <complex>

namespace dtn {

using cplx = std::complex<double>;
using ComplexSignal = Eigen::VectorXcd;

// Strictly increasing time nodes with t_0 = 0.
class TimeGrid {
public:
    TimeGrid() = default;
    explicit TimeGrid(Eigen::VectorXd nodes);

    static TimeGrid uniform(double T, int N);
    // t_n = T (n/N)^gamma
    static TimeGrid graded(double T, int N, double gamma);

    int size() const { return static_cast<int>(t_.size()); }
    int intervals() const { return size() - 1; }
    double operator[](int n) const { return t_[n]; }
    double final_time() const { return t_[t_.size() - 1]; }
    const Eigen::VectorXd& nodes() const { return t_; }

private:
    Eigen::VectorXd t_;
};

}  // namespace dtn
