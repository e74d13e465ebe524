#include "glbfed/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace glbfed {
namespace fluid {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::RenewablesLimited: return "renewables-limited";
        case Regime::LoadLimited: return "load-limited";
        case Regime::Boundary: return "boundary";
    }
    return "?";
}

double drift_j(double j, const FederationParams& p) {
    return p.lambda - p.mu * std::min(j, 1.0);
}

double drift_s(double s, const FederationParams& p) {
    return p.nu_s - (p.nu_s + p.nu_c) * s;
}

DriftBs drift_bs(double j, double s, double b_s, const FederationParams& p) {
    if (b_s > s) {
        std::ostringstream msg;
        msg << "b_s = " << b_s << " > s = " << s << ": infeasible";
        throw DomainViolationError(msg.str());
    }
    const double g = -(p.nu_s + p.nu_c + p.mu) * b_s + p.nu_s * j;
    if (b_s == s) return {g, g + p.lambda};
    return {g + p.lambda, g + p.lambda};
}

double default_dt(const FederationParams& p) {
    return 0.01 / (p.nu_s + p.nu_c + p.mu);
}

double max_dt(const FederationParams& p) {
    return 0.1 / (p.nu_s + p.nu_c + p.mu);
}

FluidTrajectory integrate(const FluidState& initial, const FederationParams& p, double t_end,
                          double dt, double record_dt) {
    validate_fluid_state(initial);
    if (!(t_end > 0.0)) throw ValidationError("t_end must be > 0");
    if (!(dt > 0.0) || dt > max_dt(p)) {
        std::ostringstream msg;
        msg << "dt = " << dt << " outside (0, " << max_dt(p) << "]";
        throw StepTooLargeError(msg.str());
    }
    if (record_dt < 0.0) throw ValidationError("record_dt must be >= 0");

    FluidTrajectory traj;
    const double rate_bs = p.nu_s + p.nu_c + p.mu;
    double t = 0.0;
    FluidState x = initial;
    traj.t.push_back(t);
    traj.x.push_back(x);
    double next_record = record_dt;

    while (t < t_end) {
        const double h = std::min(dt, t_end - t);
        const double nj = x.j + h * drift_j(x.j, p);
        const double ns = x.s + h * drift_s(x.s, p);
        // Single-valued branch everywhere; the projection below supplies the
        // sliding motion whenever the step overshoots the b_s = s surface.
        double nb = x.b_s + h * (p.lambda - rate_bs * x.b_s + p.nu_s * x.j);
        nb = std::clamp(nb, 0.0, std::min(ns, std::min(nj, 1.0)));
        x = {nj, ns, nb};
        t += h;
        if (record_dt == 0.0 || t >= next_record || t >= t_end) {
            traj.t.push_back(t);
            traj.x.push_back(x);
            if (record_dt > 0.0)
                while (next_record <= t) next_record += record_dt;
        }
    }
    return traj;
}

FixedPoint fixed_point(const FederationParams& p) {
    const double rho = p.rho();
    const double s_star = p.s_star();
    const double load_branch = rho * (p.nu_s + p.mu) / (p.nu_s + p.nu_c + p.mu);
    Regime regime = Regime::Boundary;
    if (s_star < load_branch) regime = Regime::RenewablesLimited;
    else if (s_star > load_branch) regime = Regime::LoadLimited;
    return {rho, s_star, std::min(s_star, load_branch), regime};
}

double critical_load(const FederationParams& p) {
    return p.s_star() * (p.nu_s + p.nu_c + p.mu) / (p.nu_s + p.mu);
}

} // namespace fluid
} // namespace glbfed
