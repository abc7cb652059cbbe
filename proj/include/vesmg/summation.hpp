// summation.hpp -- compensated accumulation for grid quadratures and norms.
#pragma once

#include <cmath>

namespace vesmg {

// Kahan-Babuska-Neumaier compensated summation. Quadratures and residual
// norms accumulate over up to ~10^6 cells; plain summation would put
// O(n*eps) noise on top of Table-2-scale convergence errors.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace vesmg
