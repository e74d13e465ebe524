#include "glbfed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace glbfed {
namespace analysis {

CostReport costs(const FederationParams& p) {
    const fluid::FixedPoint fp = fluid::fixed_point(p);
    const double c_f = fp.j_star - fp.b_s_star;
    const double c_nf = fp.j_star * (1.0 - fp.s_star);
    // c_nf = 0 only when c_f = 0 as well (always-sunny edge); the saving is total
    const double reduction = c_nf == 0.0 ? 1.0 : (c_nf - c_f) / c_nf;
    return {c_f, c_nf, reduction, fp.b_s_star, fp.s_star, fp.j_star};
}

Inequality federation_inequality(const FederationParams& p) {
    const fluid::FixedPoint fp = fluid::fixed_point(p);
    const double rhs = fp.j_star * fp.s_star;
    return {fp.b_s_star, rhs, fp.b_s_star > rhs};
}

double eta(const ModulatedParams& p) {
    const double pg = p.pi_g(), pb = p.pi_b();
    const double sg = p.s_star_g(), sb = p.s_star_b();
    const double mean = sg * pg + sb * pb;
    const double denom = mean * (1.0 - mean);
    if (denom == 0.0)
        throw DegenerateWeatherError("overall s* is 0 or 1: correlation undefined");
    const double var = sg * sg * pg + sb * sb * pb - mean * mean;
    return var / denom;
}

double modulated_bs_star(const ModulatedParams& p) {
    const double bg = fluid::fixed_point(p.good_weather()).b_s_star;
    const double bb = fluid::fixed_point(p.bad_weather()).b_s_star;
    return p.pi_g() * bg + p.pi_b() * bb;
}

double slow_modulation_ratio(const ModulatedParams& p) {
    const double fastest_mod = std::max(p.nu_g, p.nu_b);
    const double slowest_rest = std::min({p.nu_sg, p.nu_cg, p.nu_sb, p.nu_cb, p.mu});
    if (slowest_rest == 0.0) return std::numeric_limits<double>::infinity();
    return fastest_mod / slowest_rest;
}

CostReport modulated_costs(const ModulatedParams& p) {
    const double rho = p.rho();
    const double s_bar = p.pi_g() * p.s_star_g() + p.pi_b() * p.s_star_b();
    const double bs = modulated_bs_star(p);
    const double c_f = rho - bs;
    const double c_nf = rho * (1.0 - s_bar);
    const double reduction = c_nf == 0.0 ? 1.0 : (c_nf - c_f) / c_nf;
    return {c_f, c_nf, reduction, bs, s_bar, rho};
}

double variability(double p, int n) {
    if (!(p > 0.0 && p < 1.0)) throw DomainViolationError("p must lie in (0,1)");
    if (n < 1) throw DomainViolationError("n must be >= 1");
    return std::sqrt((1.0 - p) / (p * static_cast<double>(n)));
}

ModulatedParams correlated_sweep_params(double eta_value, double rho, double mu, double rate_sum,
                                        double nu_g, double nu_b, int n) {
    if (!(eta_value >= 0.0 && eta_value <= 1.0))
        throw DomainViolationError("eta must lie in [0,1]");
    const double s_g = 0.5 + 0.5 * std::sqrt(eta_value);
    const double s_b = 1.0 - s_g;
    return ModulatedParams(rho * mu, mu, nu_g, nu_b,
                           rate_sum * s_g, rate_sum * s_b,
                           rate_sum * s_b, rate_sum * s_g, n);
}

} // namespace analysis
} // namespace glbfed
