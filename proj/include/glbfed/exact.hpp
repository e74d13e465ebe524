#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/SparseCore>

#include "glbfed/params.hpp"
#include "glbfed/state.hpp"

namespace glbfed {
namespace exact {

// Truncated generator of the lumped chain: all per-server-realizable
// (J, S, B_S) with J <= N + queue_cap; arrivals at the cap are blocked.
struct TruncatedChain {
    FederationParams params;
    int queue_cap;
    std::vector<SystemState> states;
    Eigen::SparseMatrix<double> generator; // row-major semantics: Q(i,j) = rate i->j

    int index_of(const SystemState& st) const;
};

inline constexpr std::int64_t kMaxStates = 1'000'000;

// Number of states build() would enumerate, without allocating them.
std::int64_t state_count(int n, int queue_cap);

TruncatedChain build(const FederationParams& params, int queue_cap);

// Default truncation: deep enough that the geometric queue tail is below 1e-12.
int default_queue_cap(const FederationParams& params);

// Solves pi Q = 0 with the last balance equation replaced by normalization.
std::vector<double> stationary(const TruncatedChain& chain);

// ||pi Q||_inf over the untouched generator; the solver contract is <= 1e-12.
double residual_inf(const TruncatedChain& chain, const std::vector<double>& pi);

double expected_bs_frac(const TruncatedChain& chain, const std::vector<double>& pi);

std::vector<double> s_marginal(const TruncatedChain& chain, const std::vector<double>& pi);
std::vector<double> j_marginal(const TruncatedChain& chain, const std::vector<double>& pi);

// Closed-form truncated M/M/N law over J = 0..N+queue_cap.
std::vector<double> erlang_marginals(const FederationParams& params, int queue_cap);

} // namespace exact
} // namespace glbfed
