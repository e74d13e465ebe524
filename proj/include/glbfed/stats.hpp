#pragma once

#include <cstddef>
#include <span>

namespace glbfed {

struct MeanCi {
    double mean;
    double ci_halfwidth; // 95%, Student-t over the sample
};

// Two-sided 97.5% Student-t quantile; df clamped to the tabulated range.
double student_t_975(int df);

// Sample mean and 95% CI half-width. One observation gives half-width 0.
MeanCi mean_ci(std::span<const double> xs);

} // namespace glbfed
