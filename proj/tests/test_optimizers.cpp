#include <cmath>
#include <tuple>

#include "coolmom/errors.hpp"
#include "coolmom/noise.hpp"
#include "coolmom/optimizers.hpp"
#include "doctest.h"

using namespace coolmom;

TEST_CASE("initial state has zero update and counter") {
    const auto s = OptimizerState::initial({1.0, 2.0, 3.0});
    CHECK(s.delta_x == Vector{0.0, 0.0, 0.0});
    CHECK(s.n == 0);
}

TEST_CASE("sgd_step examples") {
    auto s = sgd_step(OptimizerState::initial({1.0}), Vector{2.0}, 0.1);
    CHECK(s.x[0] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(s.delta_x[0] == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(s.n == 1);

    s = sgd_step(OptimizerState::initial({3.0, -1.0}), Vector{0.0, 0.0}, 0.5);
    CHECK(s.x == Vector{3.0, -1.0});

    s = sgd_step(OptimizerState::initial({0.0}), Vector{-1.5}, 0.01);
    CHECK(s.x[0] == doctest::Approx(0.015).epsilon(1e-15));
}

TEST_CASE("sgd_step rejects bad input") {
    const auto s = OptimizerState::initial({1.0, 2.0});
    CHECK_THROWS_AS(sgd_step(s, Vector{1.0}, 0.1), InvalidInput);
    CHECK_THROWS_AS(sgd_step(s, Vector{1.0, 1.0}, 0.0), InvalidInput);
}

TEST_CASE("momentum_step examples") {
    OptimizerState s{{0.0}, {0.0}, 0};
    CHECK(momentum_step(s, Vector{1.0}, 0.9, 0.01).delta_x[0] == doctest::Approx(0.01).epsilon(1e-15));

    s.delta_x = {0.1};
    CHECK(momentum_step(s, Vector{0.0}, 0.5, 0.01).delta_x[0] == doctest::Approx(0.05).epsilon(1e-15));

    s.x = {1.0};
    s.delta_x = {0.02};
    const auto next = momentum_step(s, Vector{-2.0}, 0.9, 0.005);
    CHECK(next.delta_x[0] == doctest::Approx(0.008).epsilon(1e-14));
    CHECK(next.x[0] == doctest::Approx(1.008).epsilon(1e-15));
    CHECK(next.n == 1);
}

TEST_CASE("momentum_step rejects bad input") {
    const auto s = OptimizerState::initial({1.0});
    CHECK_THROWS_AS(momentum_step(s, Vector{1.0, 2.0}, 0.5, 0.1), InvalidInput);
    CHECK_THROWS_AS(momentum_step(s, Vector{1.0}, 1.5, 0.1), InvalidInput);
    CHECK_THROWS_AS(momentum_step(s, Vector{1.0}, -0.1, 0.1), InvalidInput);
}

TEST_CASE("momentum with rho = 0 is SGD on the negated force") {
    NoiseSource noise(3);
    for (int trial = 0; trial < 200; ++trial) {
        Vector x(5), force(5), dx(5);
        noise.fill_gaussian(x);
        noise.fill_gaussian(force);
        noise.fill_gaussian(dx);
        const double lr = 0.001 + noise.uniform();
        Vector grad(force);
        for (double& g : grad) g = -g;

        const auto m = momentum_step(OptimizerState{x, dx, 4}, force, 0.0, lr);
        const auto s = sgd_step(OptimizerState{x, dx, 4}, grad, lr);
        CHECK(m.x == s.x);
        CHECK(m.n == s.n);
    }
}

TEST_CASE("adam with zero gradient does not move") {
    auto state = OptimizerState::initial({1.5, -2.0});
    auto moments = AdamMoments::zeros(2);
    for (int i = 0; i < 100; ++i) {
        std::tie(state, moments) = adam_step(state, moments, Vector{0.0, 0.0}, AdamConfig{});
    }
    CHECK(state.x == Vector{1.5, -2.0});
    CHECK(state.n == 100);
}

TEST_CASE("adam first step moves by about lr") {
    const AdamConfig cfg;
    for (double g : {1e-3, 0.5, -3.0, 1e4}) {
        auto [s, m] = adam_step(OptimizerState::initial({0.0}), AdamMoments::zeros(1), Vector{g}, cfg);
        // Closed form: lr * |g| / (|g| + eps).
        CHECK(std::abs(s.x[0]) == doctest::Approx(cfg.lr * std::abs(g) / (std::abs(g) + cfg.epsilon)).epsilon(1e-12));
        CHECK(std::abs(s.x[0]) == doctest::Approx(cfg.lr).epsilon(1e-4));
        CHECK((s.x[0] < 0.0) == (g > 0.0));
    }
}

TEST_CASE("adam with constant gradient settles at -lr per step") {
    const AdamConfig cfg;
    auto state = OptimizerState::initial({0.0});
    auto moments = AdamMoments::zeros(1);
    for (int i = 0; i < 20000; ++i) {
        std::tie(state, moments) = adam_step(state, moments, Vector{1.0}, cfg);
    }
    CHECK(state.delta_x[0] == doctest::Approx(-cfg.lr).epsilon(1e-6));
}

TEST_CASE("adam config validation") {
    AdamConfig c;
    c.beta1 = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = AdamConfig{};
    c.epsilon = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    CHECK_THROWS_AS(adam_step(OptimizerState::initial({1.0}), AdamMoments::zeros(2), Vector{1.0},
                              AdamConfig{}),
                    InvalidInput);
}

TEST_CASE("coolmomentum config") {
    const auto c = CoolMomentumConfig::cooling_to_zero(0.1, 0.99, 1000);
    CHECK(c.alpha < 1.0);
    CHECK(c.total_steps == 1000);
    CoolMomentumConfig bad = c;
    bad.rho0 = 1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = c;
    bad.dt = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = c;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}
