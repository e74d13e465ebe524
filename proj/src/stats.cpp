#include "glbfed/stats.hpp"

#include <cmath>

namespace glbfed {

namespace {

// t_{0.975, df} for df = 1..30.
constexpr double kT975[30] = {
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
    2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
};

} // namespace

double student_t_975(int df) {
    if (df < 1) return kT975[0];
    if (df <= 30) return kT975[df - 1];
    if (df <= 40) return 2.021;
    if (df <= 60) return 2.000;
    if (df <= 120) return 1.980;
    return 1.960;
}

MeanCi mean_ci(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n == 0) return {0.0, 0.0};
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(n);
    if (n == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = ss / static_cast<double>(n - 1);
    const double se = std::sqrt(var / static_cast<double>(n));
    return {mean, student_t_975(static_cast<int>(n) - 1) * se};
}

} // namespace glbfed
