#pragma once

#include <vector>

#include "glbfed/params.hpp"
#include "glbfed/state.hpp"

namespace glbfed {
namespace fluid {

enum class Regime { RenewablesLimited, LoadLimited, Boundary };

const char* regime_name(Regime r);

struct FixedPoint {
    double j_star;
    double s_star;
    double b_s_star;
    Regime regime;
};

struct FluidTrajectory {
    std::vector<double> t;
    std::vector<FluidState> x;
};

double drift_j(double j, const FederationParams& p);
double drift_s(double s, const FederationParams& p);

// The b_s drift is set-valued on the switching surface b_s = s: there the
// admissible velocities form the interval [lo, hi] with hi = lo + lambda.
// Off the surface lo == hi.
struct DriftBs {
    double lo;
    double hi;
    bool single_valued() const { return lo == hi; }
};

DriftBs drift_bs(double j, double s, double b_s, const FederationParams& p);

double default_dt(const FederationParams& p);
double max_dt(const FederationParams& p);

// Explicit Euler on (j, s, b_s) with a post-step projection of b_s onto
// [0, min(s, min(j,1))]. The projection realizes the sliding motion on
// b_s = s and keeps every recorded state feasible. record_dt thins the
// stored grid (0 records every step); the final state is always recorded.
FluidTrajectory integrate(const FluidState& initial, const FederationParams& p,
                          double t_end, double dt, double record_dt = 0.0);

FixedPoint fixed_point(const FederationParams& p);

// Load at which the two branches of the fixed point meet.
double critical_load(const FederationParams& p);

} // namespace fluid
} // namespace glbfed
