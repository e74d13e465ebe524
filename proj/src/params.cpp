#include "glbfed/params.hpp"

#include <cmath>
#include <sstream>

#include "glbfed/state.hpp"

namespace glbfed {

namespace {

void check_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << name << " must be finite, got " << v;
        throw NonpositiveRateError(msg.str());
    }
}

void check_rate(double v, const char* name, bool strictly_positive) {
    check_finite(v, name);
    if (strictly_positive ? v <= 0.0 : v < 0.0) {
        std::ostringstream msg;
        msg << name << " must be " << (strictly_positive ? "> 0" : ">= 0") << ", got " << v;
        throw NonpositiveRateError(msg.str());
    }
}

void check_load(double lambda, double mu) {
    if (lambda / mu >= 1.0) {
        std::ostringstream msg;
        msg << "rho = lambda/mu = " << lambda / mu << " but stability requires rho < 1";
        throw UnstableLoadError(msg.str());
    }
}

} // namespace

FederationParams::FederationParams(double lambda, double mu, double nu_s, double nu_c, int n)
    : lambda(lambda), mu(mu), nu_s(nu_s), nu_c(nu_c), n(n) {
    check_rate(lambda, "lambda", true);
    check_rate(mu, "mu", true);
    check_rate(nu_s, "nu_s", false);
    check_rate(nu_c, "nu_c", false);
    if (nu_s + nu_c <= 0.0)
        throw DegenerateRenewablesError("nu_s + nu_c must be > 0: the renewable state is frozen");
    check_load(lambda, mu);
    if (n < 1) throw ValidationError("n must be a positive integer");
}

FederationParams validate(const FederationParams& params) {
    return FederationParams(params.lambda, params.mu, params.nu_s, params.nu_c, params.n);
}

ModulatedParams::ModulatedParams(double lambda, double mu, double nu_g, double nu_b,
                                 double nu_sg, double nu_cg, double nu_sb, double nu_cb, int n)
    : lambda(lambda), mu(mu), nu_g(nu_g), nu_b(nu_b), nu_sg(nu_sg), nu_cg(nu_cg),
      nu_sb(nu_sb), nu_cb(nu_cb), n(n) {
    check_rate(lambda, "lambda", true);
    check_rate(mu, "mu", true);
    check_rate(nu_g, "nu_g", false);
    check_rate(nu_b, "nu_b", false);
    if (nu_g + nu_b <= 0.0)
        throw DegenerateWeatherError("nu_g + nu_b must be > 0: the modulator is frozen");
    check_rate(nu_sg, "nu_sg", false);
    check_rate(nu_cg, "nu_cg", false);
    check_rate(nu_sb, "nu_sb", false);
    check_rate(nu_cb, "nu_cb", false);
    if (nu_sg + nu_cg <= 0.0)
        throw DegenerateRenewablesError("nu_sg + nu_cg must be > 0");
    if (nu_sb + nu_cb <= 0.0)
        throw DegenerateRenewablesError("nu_sb + nu_cb must be > 0");
    if (s_star_g() < s_star_b())
        throw ValidationError("G must be the good weather state: require s*_G >= s*_B");
    check_load(lambda, mu);
    if (n < 1) throw ValidationError("n must be a positive integer");
}

ModulatedParams validate(const ModulatedParams& params) {
    return ModulatedParams(params.lambda, params.mu, params.nu_g, params.nu_b, params.nu_sg,
                           params.nu_cg, params.nu_sb, params.nu_cb, params.n);
}

ModulatorWeights modulator_weights(const ModulatedParams& params) {
    return {params.pi_g(), params.pi_b()};
}

void validate_state(const SystemState& st, int n) {
    if (!is_valid_state(st, n)) {
        std::ostringstream msg;
        msg << "state (J=" << st.jobs << ", S=" << st.sunny << ", B_S=" << st.busy_sunny
            << ") is not realizable with n=" << n;
        throw DomainViolationError(msg.str());
    }
}

void validate_fluid_state(const FluidState& x) {
    if (!is_valid_fluid_state(x)) {
        std::ostringstream msg;
        msg << "fluid state (j=" << x.j << ", s=" << x.s << ", b_s=" << x.b_s
            << ") violates 0 <= b_s <= min(s, min(j,1))";
        throw DomainViolationError(msg.str());
    }
}

} // namespace glbfed
