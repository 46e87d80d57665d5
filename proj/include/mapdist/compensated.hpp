#pragma once

#include <cmath>

namespace mapdist {

// Neumaier compensated accumulator. Summation order is still fixed by the
// caller; the compensation keeps grid-sized sums reproducible to ~1 ulp.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace mapdist
