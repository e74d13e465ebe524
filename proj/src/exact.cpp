#include "glbfed/exact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/SparseLU>

namespace glbfed {
namespace exact {

namespace {

std::int64_t bs_lo(std::int64_t busy, int s, int n) {
    return std::max<std::int64_t>(0, busy - (n - s));
}

std::int64_t bs_hi(std::int64_t busy, int s) {
    return std::min<std::int64_t>(s, busy);
}

} // namespace

std::int64_t state_count(int n, int queue_cap) {
    std::int64_t count = 0;
    for (std::int64_t jobs = 0; jobs <= static_cast<std::int64_t>(n) + queue_cap; ++jobs) {
        const std::int64_t busy = std::min<std::int64_t>(jobs, n);
        for (int s = 0; s <= n; ++s) count += bs_hi(busy, s) - bs_lo(busy, s, n) + 1;
    }
    return count;
}

int TruncatedChain::index_of(const SystemState& st) const {
    validate_state(st, params.n);
    if (st.jobs > params.n + queue_cap)
        throw DomainViolationError("state beyond the truncation boundary");
    // states are enumerated in (J, S, B_S) lexicographic order
    const auto it = std::lower_bound(states.begin(), states.end(), st,
                                     [](const SystemState& a, const SystemState& b) {
                                         if (a.jobs != b.jobs) return a.jobs < b.jobs;
                                         if (a.sunny != b.sunny) return a.sunny < b.sunny;
                                         return a.busy_sunny < b.busy_sunny;
                                     });
    return static_cast<int>(it - states.begin());
}

int default_queue_cap(const FederationParams& params) {
    const double rho = params.rho();
    const int tail = static_cast<int>(std::ceil(std::log(1e-12) / std::log(rho)));
    return std::max(30, tail);
}

TruncatedChain build(const FederationParams& params, int queue_cap) {
    if (queue_cap < 0) throw ValidationError("queue_cap must be >= 0");
    const std::int64_t m64 = state_count(params.n, queue_cap);
    if (m64 > kMaxStates) {
        std::ostringstream msg;
        msg << "state space has " << m64 << " states; guard is " << kMaxStates;
        throw StateSpaceTooLargeError(msg.str());
    }
    const int m = static_cast<int>(m64);
    const int n = params.n;
    const std::int64_t j_max = static_cast<std::int64_t>(n) + queue_cap;

    TruncatedChain chain{params, queue_cap, {}, {}};
    chain.states.reserve(m);
    // offset[jobs * (n+1) + s] = index of (jobs, s, bs_lo)
    std::vector<int> offset(static_cast<std::size_t>(j_max + 1) * (n + 1));
    for (std::int64_t jobs = 0; jobs <= j_max; ++jobs) {
        const std::int64_t busy = std::min<std::int64_t>(jobs, n);
        for (int s = 0; s <= n; ++s) {
            offset[static_cast<std::size_t>(jobs) * (n + 1) + s] =
                static_cast<int>(chain.states.size());
            for (std::int64_t b = bs_lo(busy, s, n); b <= bs_hi(busy, s); ++b)
                chain.states.push_back({jobs, s, static_cast<int>(b)});
        }
    }

    const auto idx = [&](std::int64_t jobs, int s, std::int64_t b) {
        const std::int64_t busy = std::min<std::int64_t>(jobs, n);
        return offset[static_cast<std::size_t>(jobs) * (n + 1) + s] +
               static_cast<int>(b - bs_lo(busy, s, n));
    };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m) * 8);
    const double n_lambda = static_cast<double>(n) * params.lambda;
    for (int i = 0; i < m; ++i) {
        const SystemState& st = chain.states[i];
        const std::int64_t jobs = st.jobs;
        const int s = st.sunny;
        const int b = st.busy_sunny;
        const std::int64_t busy = std::min<std::int64_t>(jobs, n);
        double out_rate = 0.0;
        const auto add = [&](double rate, std::int64_t tj, int ts, std::int64_t tb) {
            if (rate <= 0.0) return;
            trip.emplace_back(i, idx(tj, ts, tb), rate);
            out_rate += rate;
        };
        if (jobs < j_max) add(n_lambda, jobs + 1, s, s > b ? b + 1 : b);
        if (b > 0) add(params.mu * b, jobs - 1, s, jobs > n ? b : b - 1);
        if (busy - b > 0) add(params.mu * static_cast<double>(busy - b), jobs - 1, s, b);
        if (b > 0) add(params.nu_c * b, jobs, s - 1, b - 1);
        if (s - b > 0) add(params.nu_c * (s - b), jobs, s - 1, b);
        if (busy - b > 0) add(params.nu_s * static_cast<double>(busy - b), jobs, s + 1, b + 1);
        const std::int64_t idle_cloudy = (n - s) - (busy - b);
        if (idle_cloudy > 0) add(params.nu_s * static_cast<double>(idle_cloudy), jobs, s + 1, b);
        if (out_rate > 0.0) trip.emplace_back(i, i, -out_rate);
    }

    chain.generator.resize(m, m);
    chain.generator.setFromTriplets(trip.begin(), trip.end());
    chain.generator.makeCompressed();
    return chain;
}

std::vector<double> stationary(const TruncatedChain& chain) {
    const int m = static_cast<int>(chain.states.size());
    // pi Q = 0 transposes to Q^T x = 0; the last balance row is replaced by
    // sum(pi) = 1 to make the system nonsingular.
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(chain.generator.nonZeros()) + m);
    for (int k = 0; k < chain.generator.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(chain.generator, k); it; ++it) {
            if (it.col() != m - 1) trip.emplace_back(static_cast<int>(it.col()),
                                                     static_cast<int>(it.row()), it.value());
        }
    }
    for (int i = 0; i < m; ++i) trip.emplace_back(m - 1, i, 1.0);

    Eigen::SparseMatrix<double> a(m, m);
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
    solver.analyzePattern(a);
    solver.factorize(a);
    if (solver.info() != Eigen::Success)
        throw SingularSystemError("sparse LU factorization of the balance system failed");

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs[m - 1] = 1.0;
    Eigen::VectorXd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
        throw SingularSystemError("balance system solve failed");

    // one step of iterative refinement squeezes the residual to round-off
    Eigen::VectorXd r = rhs - a * x;
    x += solver.solve(r);

    return {x.data(), x.data() + m};
}

double residual_inf(const TruncatedChain& chain, const std::vector<double>& pi) {
    const int m = static_cast<int>(chain.states.size());
    const Eigen::Map<const Eigen::VectorXd> v(pi.data(), m);
    const Eigen::VectorXd r = chain.generator.transpose() * v;
    return r.lpNorm<Eigen::Infinity>();
}

double expected_bs_frac(const TruncatedChain& chain, const std::vector<double>& pi) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i)
        acc += pi[i] * static_cast<double>(chain.states[i].busy_sunny);
    return acc / static_cast<double>(chain.params.n);
}

std::vector<double> s_marginal(const TruncatedChain& chain, const std::vector<double>& pi) {
    std::vector<double> marg(chain.params.n + 1, 0.0);
    for (std::size_t i = 0; i < pi.size(); ++i) marg[chain.states[i].sunny] += pi[i];
    return marg;
}

std::vector<double> j_marginal(const TruncatedChain& chain, const std::vector<double>& pi) {
    std::vector<double> marg(static_cast<std::size_t>(chain.params.n) + chain.queue_cap + 1, 0.0);
    for (std::size_t i = 0; i < pi.size(); ++i) marg[chain.states[i].jobs] += pi[i];
    return marg;
}

std::vector<double> erlang_marginals(const FederationParams& params, int queue_cap) {
    if (queue_cap < 0) throw ValidationError("queue_cap must be >= 0");
    const std::size_t m = static_cast<std::size_t>(params.n) + queue_cap + 1;
    std::vector<double> p(m);
    p[0] = 1.0;
    const double n_lambda = static_cast<double>(params.n) * params.lambda;
    double sum = 1.0;
    for (std::size_t jobs = 1; jobs < m; ++jobs) {
        const double death = params.mu * static_cast<double>(std::min<std::size_t>(jobs, params.n));
        p[jobs] = p[jobs - 1] * n_lambda / death;
        sum += p[jobs];
        if (p[jobs] > 1e100) { // rescale before the unnormalized tail overflows
            for (std::size_t k = 0; k <= jobs; ++k) p[k] /= sum;
            sum = 1.0;
        }
    }
    for (double& v : p) v /= sum;
    return p;
}

} // namespace exact
} // namespace glbfed
