#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "glbfed/errors.hpp"
#include "glbfed/exact.hpp"

using namespace glbfed;

namespace {

double binom_pmf(int n, int k, double p) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

} // namespace

TEST_CASE("build enumerates exactly the legal states") {
    const FederationParams p1(0.3, 1.0, 0.01, 0.01, 1);
    const auto tiny = exact::build(p1, 0);
    REQUIRE(tiny.states.size() == 4);
    // lexicographic in (J, S, B_S)
    CHECK(tiny.states[0].jobs == 0);
    CHECK(tiny.states[0].sunny == 0);
    CHECK(tiny.states[1].sunny == 1);
    CHECK(tiny.states[1].busy_sunny == 0);
    CHECK(tiny.states[2].jobs == 1);
    CHECK(tiny.states[2].sunny == 0);
    CHECK(tiny.states[3].jobs == 1);
    CHECK(tiny.states[3].sunny == 1);
    CHECK(tiny.states[3].busy_sunny == 1);

    for (std::size_t i = 0; i < tiny.states.size(); ++i)
        CHECK(tiny.index_of(tiny.states[i]) == static_cast<int>(i));

    const FederationParams p2(0.5, 1.0, 0.02, 0.01, 2);
    const auto two = exact::build(p2, 1);
    CHECK(exact::state_count(2, 1) == static_cast<std::int64_t>(two.states.size()));
    for (const SystemState& st : two.states) {
        REQUIRE(is_valid_state(st, 2));
        if (st.jobs == 3) CHECK(st.busy_sunny == st.sunny); // saturated: every sunny is busy
    }
}

TEST_CASE("generator rows sum to zero") {
    const FederationParams p(0.6, 1.0, 0.07, 0.04, 3);
    const auto chain = exact::build(p, 5);
    const int m = static_cast<int>(chain.states.size());
    std::vector<double> rowsum(m, 0.0);
    bool offdiag_ok = true;
    for (int k = 0; k < chain.generator.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(chain.generator, k); it; ++it) {
            rowsum[it.row()] += it.value();
            if (it.row() != it.col() && it.value() < 0.0) offdiag_ok = false;
        }
    }
    CHECK(offdiag_ok);
    for (int i = 0; i < m; ++i) CHECK(std::abs(rowsum[i]) <= 1e-12);
}

TEST_CASE("stationary solves the chain to solver tolerance") {
    const FederationParams p(0.7, 1.1, 0.13, 0.07, 4);
    const auto chain = exact::build(p, 30);
    const auto pi = exact::stationary(chain);
    double total = 0.0;
    double min_pi = 0.0;
    for (double v : pi) {
        total += v;
        min_pi = std::min(min_pi, v);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(min_pi >= -1e-14);
    CHECK(exact::residual_inf(chain, pi) <= 1e-12);

    // S-marginal is Binomial(N, s*): sources are autonomous two-state chains
    const auto sm = exact::s_marginal(chain, pi);
    for (int k = 0; k <= 4; ++k)
        CHECK(std::abs(sm[k] - binom_pmf(4, k, p.s_star())) <= 1e-10);

    // J-marginal is the truncated M/M/N birth-death law
    const auto jm = exact::j_marginal(chain, pi);
    const auto erl = exact::erlang_marginals(p, 30);
    REQUIRE(jm.size() == erl.size());
    for (std::size_t k = 0; k < jm.size(); ++k) CHECK(std::abs(jm[k] - erl[k]) <= 1e-10);
}

TEST_CASE("expected_bs_frac against independence and pinned oracles") {
    // N=1: busy and sunny processes are independent, so E[B_S] = rho * s*
    const FederationParams p1(0.3, 1.0, 0.01, 0.01, 1);
    const auto c1 = exact::build(p1, 40);
    CHECK(exact::expected_bs_frac(c1, exact::stationary(c1)) ==
          doctest::Approx(0.15).epsilon(1e-9));

    const FederationParams tiny_load(1e-8, 1.0, 0.01, 0.01, 2);
    const auto c0 = exact::build(tiny_load, 10);
    CHECK(exact::expected_bs_frac(c0, exact::stationary(c0)) <= 1e-7);

    // regression constant fixed by an independent dense solve
    const FederationParams p3(0.8, 1.0, 0.01, 0.01, 3);
    const auto c3 = exact::build(p3, 60);
    CHECK(exact::expected_bs_frac(c3, exact::stationary(c3)) ==
          doctest::Approx(0.414929182869695).epsilon(1e-9));

    const FederationParams p2(0.5, 1.0, 0.02, 0.01, 2);
    const auto c2 = exact::build(p2, 40);
    CHECK(exact::expected_bs_frac(c2, exact::stationary(c2)) ==
          doctest::Approx(0.351578179164337).epsilon(1e-9));
}

TEST_CASE("erlang_marginals closed forms") {
    const FederationParams m1(0.5, 1.0, 0.01, 0.01, 1);
    const auto geo = exact::erlang_marginals(m1, 60);
    for (int k = 0; k <= 20; ++k)
        CHECK(std::abs(geo[k] - 0.5 * std::pow(0.5, k)) <= 1e-12);

    const FederationParams m2(0.5, 1.0, 0.01, 0.01, 2);
    const auto tri = exact::erlang_marginals(m2, 0);
    REQUIRE(tri.size() == 3);
    CHECK(tri[0] == doctest::Approx(0.4).epsilon(1e-13));
    CHECK(tri[1] == doctest::Approx(0.4).epsilon(1e-13));
    CHECK(tri[2] == doctest::Approx(0.2).epsilon(1e-13));

    // work conservation: mean busy servers approaches rho * N as the cap grows
    const auto deep = exact::erlang_marginals(m2, 80);
    double busy = 0.0;
    for (std::size_t k = 0; k < deep.size(); ++k)
        busy += deep[k] * std::min<std::size_t>(k, 2);
    CHECK(busy / 2 == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("default_queue_cap follows the geometric tail bound") {
    CHECK(exact::default_queue_cap(FederationParams(0.3, 1.0, 0.01, 0.01)) == 30);
    CHECK(exact::default_queue_cap(FederationParams(0.5, 1.0, 0.01, 0.01)) == 40);
    CHECK(exact::default_queue_cap(FederationParams(0.8, 1.0, 0.01, 0.01)) == 124);
    CHECK(exact::default_queue_cap(FederationParams(0.9, 1.0, 0.01, 0.01)) == 263);
}

TEST_CASE("truncation consistency") {
    const auto ebs = [](double lam, int cap) {
        const FederationParams p(lam, 1.0, 0.01, 0.01, 2);
        const auto chain = exact::build(p, cap);
        return exact::expected_bs_frac(chain, exact::stationary(chain));
    };
    // moderate load: doubling a cap of 30 is already converged
    CHECK(std::abs(ebs(0.5, 30) - ebs(0.5, 60)) < 1e-6);
    // high load: the tail bound rho^K governs; from the default cap the
    // doubling effect is below 1e-6
    CHECK(std::abs(ebs(0.8, 30) - ebs(0.8, 60)) < 3.0 * std::pow(0.8, 30));
    const int cap9 = exact::default_queue_cap(FederationParams(0.9, 1.0, 0.01, 0.01));
    CHECK(std::abs(ebs(0.9, cap9) - ebs(0.9, 2 * cap9)) < 1e-6);
}

TEST_CASE("state space guard") {
    CHECK(exact::state_count(200, 5000) > exact::kMaxStates);
    CHECK_THROWS_AS(exact::build(FederationParams(0.5, 1.0, 0.01, 0.01, 200), 5000),
                    StateSpaceTooLargeError);
}
