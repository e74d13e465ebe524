#include <doctest.h>

#include <cmath>
#include <string>

#include "glbfed/errors.hpp"
#include "glbfed/fluid.hpp"
#include "glbfed/rng.hpp"

using namespace glbfed;
using fluid::Regime;

namespace {
const FederationParams kFig2Low(0.3, 1.0, 0.01, 0.01);
const FederationParams kFig2High(0.8, 1.0, 0.01, 0.01);
} // namespace

TEST_CASE("drift_j") {
    CHECK(fluid::drift_j(0.3, kFig2Low) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fluid::drift_j(2.0, kFig2Low) == doctest::Approx(-0.7));
    CHECK(fluid::drift_j(0.0, kFig2Low) == doctest::Approx(0.3));
}

TEST_CASE("drift_s") {
    CHECK(fluid::drift_s(0.5, kFig2Low) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fluid::drift_s(0.0, kFig2Low) == doctest::Approx(0.01));
    CHECK(fluid::drift_s(1.0, kFig2Low) == doctest::Approx(-0.01));
}

TEST_CASE("drift_bs branches") {
    const fluid::DriftBs below = fluid::drift_bs(0.3, 0.5, 0.2, kFig2Low);
    CHECK(below.single_valued());
    CHECK(below.lo == doctest::Approx(0.099).epsilon(1e-12));

    const fluid::DriftBs on = fluid::drift_bs(0.3, 0.5, 0.5, kFig2Low);
    CHECK_FALSE(on.single_valued());
    CHECK(on.lo == doctest::Approx(-0.507).epsilon(1e-12));
    CHECK(on.hi == doctest::Approx(-0.207).epsilon(1e-12));

    // load-limited fixed point sits strictly below the surface with zero drift
    const fluid::FixedPoint fp = fluid::fixed_point(kFig2Low);
    const fluid::DriftBs at = fluid::drift_bs(fp.j_star, fp.s_star, fp.b_s_star, kFig2Low);
    CHECK(at.single_valued());
    CHECK(at.lo == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(fluid::drift_bs(0.3, 0.5, 0.6, kFig2Low), DomainViolationError);
}

TEST_CASE("fixed_point examples") {
    const fluid::FixedPoint low = fluid::fixed_point(kFig2Low);
    CHECK(low.j_star == doctest::Approx(0.3));
    CHECK(low.s_star == doctest::Approx(0.5));
    CHECK(low.b_s_star == doctest::Approx(0.29705882352941176).epsilon(1e-13));
    CHECK(low.regime == Regime::LoadLimited);

    const fluid::FixedPoint high = fluid::fixed_point(kFig2High);
    CHECK(high.b_s_star == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(high.regime == Regime::RenewablesLimited);

    const fluid::FixedPoint sunny = fluid::fixed_point(FederationParams(0.45, 1.0, 0.02, 0.0));
    CHECK(sunny.b_s_star == doctest::Approx(0.45).epsilon(1e-13)); // nu_c = 0: b* = rho

    // lambda/mu chosen so both branches evaluate to exactly 0.5 in floating point
    const fluid::FixedPoint kink = fluid::fixed_point(FederationParams(0.75, 1.0, 1.0, 1.0));
    CHECK(kink.b_s_star == 0.5);
    CHECK(kink.regime == Regime::Boundary);

    CHECK(std::string(fluid::regime_name(Regime::RenewablesLimited)) == "renewables-limited");
    CHECK(std::string(fluid::regime_name(Regime::LoadLimited)) == "load-limited");
    CHECK(std::string(fluid::regime_name(Regime::Boundary)) == "boundary");
}

TEST_CASE("fixed_point properties on random params") {
    Rng rng(5, 0);
    for (int i = 0; i < 200; ++i) {
        const double lam = 0.02 + 0.96 * rng.uniform();
        const double nus = 0.002 + 2.0 * rng.uniform();
        const double nuc = 0.002 + 2.0 * rng.uniform();
        const FederationParams p(lam, 1.0, nus, nuc);
        const fluid::FixedPoint fp = fluid::fixed_point(p);
        CHECK(fp.j_star == p.rho());
        CHECK(fp.s_star == p.s_star());
        CHECK(fp.b_s_star <= std::min(fp.s_star, fp.j_star) + 1e-15);

        // regime case split: positive upper drift on the surface at the fixed
        // inputs means the renewables cap binds
        const fluid::DriftBs on = fluid::drift_bs(p.rho(), p.s_star(), p.s_star(), p);
        if (std::abs(on.hi) > 1e-12) {
            CHECK((on.hi > 0.0) == (fp.regime == Regime::RenewablesLimited));
        }
    }
}

TEST_CASE("critical_load") {
    CHECK(fluid::critical_load(kFig2Low) == doctest::Approx(0.504950495049505).epsilon(1e-13));
    CHECK(fluid::critical_load(FederationParams(0.3, 1.0, 0.02, 0.0)) == doctest::Approx(1.0));
    Rng rng(6, 0);
    for (int i = 0; i < 100; ++i) {
        const double nus = 0.01 + rng.uniform();
        const double nuc = 0.01 + rng.uniform();
        const FederationParams p(0.3, 1.0, nus, nuc);
        const double rc = fluid::critical_load(p);
        // kink definition: both branches agree at rho = critical load
        CHECK(rc * (p.nu_s + p.mu) / (p.nu_s + p.nu_c + p.mu) ==
              doctest::Approx(p.s_star()).epsilon(1e-13));
    }
}

TEST_CASE("integrate tracks the closed-form j") {
    const double dt = 0.001;
    const auto traj = fluid::integrate({0.0, 0.0, 0.0}, kFig2Low, 10.0, dt, 0.1);
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const double expect = 0.3 * (1.0 - std::exp(-traj.t[i]));
        CHECK(std::abs(traj.x[i].j - expect) <= 10.0 * dt);
    }
}

TEST_CASE("integrate holds a fixed point") {
    for (const FederationParams& p :
         {kFig2Low, kFig2High, FederationParams(0.75, 1.0, 1.0, 1.0)}) {
        const fluid::FixedPoint fp = fluid::fixed_point(p);
        const auto traj =
            fluid::integrate({fp.j_star, fp.s_star, fp.b_s_star}, p, 100.0, 0.005, 100.0);
        const FluidState& last = traj.x.back();
        CHECK(std::abs(last.j - fp.j_star) <= 1e-9);
        CHECK(std::abs(last.s - fp.s_star) <= 1e-9);
        CHECK(std::abs(last.b_s - fp.b_s_star) <= 1e-9);
    }
}

TEST_CASE("integrate slides on the renewables cap") {
    // renewables-limited: b_s rises from 0, hits s, and stays on the surface
    const auto traj = fluid::integrate({0.8, 0.5, 0.0}, kFig2High, 500.0, 0.005, 0.5);
    CHECK(std::abs(traj.x.back().b_s - 0.5) <= 1e-4);
    bool feasible = true;
    for (const FluidState& x : traj.x) feasible = feasible && is_valid_fluid_state(x);
    CHECK(feasible);
}

TEST_CASE("integrate validates the step") {
    const double too_big = 0.11 / (kFig2Low.nu_s + kFig2Low.nu_c + kFig2Low.mu);
    CHECK_THROWS_AS(fluid::integrate({0.0, 0.0, 0.0}, kFig2Low, 1.0, too_big), StepTooLargeError);
    CHECK_THROWS_AS(fluid::integrate({0.0, 0.0, 0.0}, kFig2Low, 1.0, 0.0), StepTooLargeError);
    CHECK_THROWS_AS(fluid::integrate({0.3, 0.5, 0.6}, kFig2Low, 1.0, 0.01), DomainViolationError);
    CHECK(fluid::max_dt(kFig2Low) == doctest::Approx(0.1 / 1.02));
    CHECK(fluid::default_dt(kFig2Low) == doctest::Approx(0.01 / 1.02));
}

TEST_CASE("integrate grid and feasibility on random trajectories") {
    Rng rng(8, 0);
    for (int i = 0; i < 10; ++i) {
        const double lam = 0.05 + 0.9 * rng.uniform();
        const double nus = 0.01 + rng.uniform();
        const double nuc = 0.01 + rng.uniform();
        const FederationParams p(lam, 1.0, nus, nuc);
        const double j0 = 2.0 * rng.uniform();
        const double s0 = rng.uniform();
        const double b0 = std::min({s0, j0, 1.0}) * rng.uniform();
        const auto traj = fluid::integrate({j0, s0, b0}, p, 3.0, fluid::default_dt(p));
        REQUIRE(traj.t.size() == traj.x.size());
        REQUIRE(traj.t.front() == 0.0);
        REQUIRE(traj.t.back() == doctest::Approx(3.0));
        bool increasing = true, feasible = true;
        for (std::size_t k = 1; k < traj.t.size(); ++k)
            increasing = increasing && traj.t[k] > traj.t[k - 1];
        for (const FluidState& x : traj.x) feasible = feasible && is_valid_fluid_state(x);
        CHECK(increasing);
        CHECK(feasible);
    }
}

TEST_CASE("step halving converges at first order") {
    // mid-transient endpoint, away from the fixed point and the surface
    const auto at = [&](double dt) {
        return fluid::integrate({0.0, 0.0, 0.0}, kFig2Low, 5.0, dt, 5.0).x.back().b_s;
    };
    const double ref = at(1e-5);
    const double e1 = std::abs(at(0.04) - ref);
    const double e2 = std::abs(at(0.02) - ref);
    const double e3 = std::abs(at(0.01) - ref);
    CHECK(e1 > 0.0);
    CHECK(e2 <= 0.65 * e1);
    CHECK(e3 <= 0.65 * e2);
}
