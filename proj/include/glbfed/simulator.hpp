#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "glbfed/params.hpp"
#include "glbfed/rng.hpp"
#include "glbfed/state.hpp"

namespace glbfed {
namespace sim {

enum class Weather : std::uint8_t { Good = 0, Bad = 1 };

struct ModulatedState {
    SystemState sys;
    Weather weather;
};

struct SimConfig {
    std::variant<FederationParams, ModulatedParams> params;
    double t_end = 0.0;    // <= 0: defaults to 100 * warmup
    double warmup = -1.0;  // < 0: defaults to 10 * slowest mixing time
    int replications = 20;
    std::uint64_t seed = 1;
    // Empty: J = round(rho*N), S ~ Binomial(N, s*), B_S = min(J, S), drawn on
    // each replication's own stream to shorten transients.
    std::optional<SystemState> initial_state;
};

struct StationaryEstimate {
    double mean_bs_frac;
    double mean_s_frac;
    double mean_j_frac;
    double mean_busy_frac;
    double ci_halfwidth_bs;
    double ci_halfwidth_s;
    double ci_halfwidth_j;
    double ci_halfwidth_busy;
    // Modulated runs only (NaN otherwise): pi-weighted average of the
    // per-weather conditional means of B_S/N. Same estimand as mean_bs_frac;
    // the weather-epoch sampling variance is stratified out, which matters
    // when the modulator is orders of magnitude slower than everything else.
    double weighted_bs_frac;
    double ci_halfwidth_weighted_bs;
    std::uint64_t events;
    int replications;
};

inline constexpr std::uint64_t kMinEventsPerReplication = 1000;

double default_warmup(const FederationParams& p);
double default_warmup(const ModulatedParams& p);

// One transition of the lumped chain: exponential race between arrival,
// sunny/cloudy departures, and the two weather flip directions.
std::pair<SystemState, double> step(const SystemState& st, const FederationParams& p, Rng& rng);

// As step, plus the common modulator clock; a modulator flip changes only
// which renewable rates apply afterwards.
std::pair<ModulatedState, double> step_modulated(const ModulatedState& st, const ModulatedParams& p,
                                                 Rng& rng);

// Time-averaged B_S/N, S/N, J/N, busy/N over [warmup, t_end], mean and 95%
// Student-t CI across replications. Replications run on independent streams
// (seed, r) and reduce in fixed order, so results do not depend on thread
// count. Throws HorizonTooShortError if any replication sees fewer than
// kMinEventsPerReplication events after warmup.
StationaryEstimate estimate_stationary(const SimConfig& config);

struct TracePoint {
    double t;
    double j;
    double s;
    double b_s;
};

// One replication sampled on a uniform grid by holding the piecewise-constant
// state; uses stream (seed, 0).
std::vector<TracePoint> trace(const SimConfig& config, double sample_dt);

} // namespace sim
} // namespace glbfed
