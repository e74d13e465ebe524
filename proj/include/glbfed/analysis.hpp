#pragma once

#include "glbfed/fluid.hpp"
#include "glbfed/params.hpp"

namespace glbfed {
namespace analysis {

// Grid energy drawn per time unit per datacenter, with the price normalized
// to 1 on grid and 0 on renewables: c_f = rho - b_s*, c_nf = rho*(1 - s*).
struct CostReport {
    double c_f;
    double c_nf;
    double relative_reduction;
    double b_s_star;
    double s_star;
    double rho;
};

CostReport costs(const FederationParams& p);

struct Inequality {
    double lhs;
    double rhs;
    bool holds;
};

// b_s* > rho * s*: pooling strictly beats per-datacenter renewables.
Inequality federation_inequality(const FederationParams& p);

// Correlation coefficient between two sources' sunny indicators under the
// common modulator.
double eta(const ModulatedParams& p);

// Slow-modulation approximation: pi_G * b*_{s,G} + pi_B * b*_{s,B}.
double modulated_bs_star(const ModulatedParams& p);

// max(nu_g, nu_b) / min(renewable rates, mu); the weighted-sum approximation
// is trustworthy when this is small.
double slow_modulation_ratio(const ModulatedParams& p);

CostReport modulated_costs(const ModulatedParams& p);

// Normalized standard deviation of n independent on/off units, each on with
// probability p.
double variability(double p, int n);

// Symmetric correlated-weather sweep: overall s* pinned at 1/2 via
// s*_G = (1+sqrt(eta))/2, s*_B = 1 - s*_G, with fixed per-state rate sums.
ModulatedParams correlated_sweep_params(double eta_value, double rho, double mu = 1.0,
                                        double rate_sum = 0.002, double nu_g = 1e-5,
                                        double nu_b = 1e-5, int n = 1);

} // namespace analysis
} // namespace glbfed
