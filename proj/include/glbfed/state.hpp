#pragma once

#include <algorithm>
#include <cstdint>

#include "glbfed/errors.hpp"

namespace glbfed {

// Lumped CTMC state: total jobs J (in service + queued), sunny count S,
// busy-and-sunny count B_S. Exchangeability of servers makes these three
// counts a sufficient description of the full per-server chain.
struct SystemState {
    std::int64_t jobs;
    int sunny;
    int busy_sunny;
};

inline std::int64_t busy_count(const SystemState& st, int n) {
    return std::min<std::int64_t>(st.jobs, n);
}

inline std::int64_t queued_count(const SystemState& st, int n) {
    return std::max<std::int64_t>(st.jobs - n, 0);
}

// Exactly the per-server-realizable triples: besides busy_sunny <= min(S, busy),
// the busy-cloudy servers must fit among the N-S cloudy ones. The upper corner
// (jobs >= N forces busy_sunny = S) falls out of these bounds.
inline bool is_valid_state(const SystemState& st, int n) {
    if (n < 1 || st.jobs < 0 || st.sunny < 0 || st.sunny > n) return false;
    const std::int64_t busy = busy_count(st, n);
    const std::int64_t lo = std::max<std::int64_t>(0, busy - (n - st.sunny));
    const std::int64_t hi = std::min<std::int64_t>(st.sunny, busy);
    return st.busy_sunny >= lo && st.busy_sunny <= hi;
}

void validate_state(const SystemState& st, int n);

// Scaled deterministic state: j = J/N (may exceed 1), s = S/N, b_s = B_S/N.
struct FluidState {
    double j;
    double s;
    double b_s;
};

inline bool is_valid_fluid_state(const FluidState& x) {
    return x.j >= 0.0 && x.s >= 0.0 && x.s <= 1.0 && x.b_s >= 0.0 &&
           x.b_s <= std::min(x.s, std::min(x.j, 1.0));
}

void validate_fluid_state(const FluidState& x);

} // namespace glbfed
