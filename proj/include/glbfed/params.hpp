#pragma once

#include "glbfed/errors.hpp"

namespace glbfed {

// Rates of one federation: per-datacenter arrivals lambda (aggregate N*lambda),
// service rate mu, cloudy->sunny rate nu_s, sunny->cloudy rate nu_c.
// Validation is eager: a constructed object is always usable.
struct FederationParams {
    double lambda;
    double mu;
    double nu_s;
    double nu_c;
    int n;

    FederationParams(double lambda, double mu, double nu_s, double nu_c, int n = 1);

    double rho() const { return lambda / mu; }
    double s_star() const { return nu_s / (nu_s + nu_c); }
};

// Same checks as the constructor, as a pass-through for pre-validated bundles.
FederationParams validate(const FederationParams& params);

// Weather-modulated federation: a common two-state chain (G = good, B = bad)
// swaps the renewable rates of every source at once. nu_g is the B->G rate,
// nu_b the G->B rate.
struct ModulatedParams {
    double lambda;
    double mu;
    double nu_g;
    double nu_b;
    double nu_sg;
    double nu_cg;
    double nu_sb;
    double nu_cb;
    int n;

    ModulatedParams(double lambda, double mu, double nu_g, double nu_b,
                    double nu_sg, double nu_cg, double nu_sb, double nu_cb, int n = 1);

    double rho() const { return lambda / mu; }
    double pi_g() const { return nu_g / (nu_g + nu_b); }
    double pi_b() const { return nu_b / (nu_g + nu_b); }
    double s_star_g() const { return nu_sg / (nu_sg + nu_cg); }
    double s_star_b() const { return nu_sb / (nu_sb + nu_cb); }

    FederationParams good_weather() const { return {lambda, mu, nu_sg, nu_cg, n}; }
    FederationParams bad_weather() const { return {lambda, mu, nu_sb, nu_cb, n}; }
};

ModulatedParams validate(const ModulatedParams& params);

struct ModulatorWeights {
    double pi_g;
    double pi_b;
};

ModulatorWeights modulator_weights(const ModulatedParams& params);

} // namespace glbfed
