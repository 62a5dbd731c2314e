#include <cmath>
#include <memory>
#include <tuple>

#include "coolmom/errors.hpp"
#include "coolmom/objectives.hpp"
#include "coolmom/run.hpp"
#include "coolmom/schedule.hpp"
#include "doctest.h"

using namespace coolmom;

namespace {

GaussianNoiseObjective noisy(std::shared_ptr<const Objective> base, double sigma) {
    return GaussianNoiseObjective(std::move(base), sigma, 0);
}

// Gradient turns NaN once x[0] exceeds a threshold.
class Cliff final : public StochasticObjective {
public:
    std::size_t dimension() const override { return 1; }
    const Objective& exact() const override { return flat_; }
    double sample_gradient(std::span<const double> x, std::span<double> grad) override {
        grad[0] = x[0] > 1.0 ? std::nan("") : -1.0;
        return 0.0;
    }
    void reseed(std::uint64_t) override {}

private:
    Flat flat_{1};
};

}  // namespace

TEST_CASE("zero force leaves the start point fixed") {
    auto obj = noisy(std::make_shared<Flat>(3), 0.0);
    const Vector x0{0.3, -1.0, 2.0};
    const auto log = coolmomentum_run(obj, x0, CoolMomentumConfig::cooling_to_zero(0.1, 0.99, 500), 1);
    CHECK(log.final_x == x0);
    for (const auto& s : log.steps) CHECK(s.dx_sq_norm == 0.0);
    CHECK(log.steps.size() == 500);
}

TEST_CASE("noise-free quadratic contracts and matches a scalar recurrence") {
    auto obj = noisy(std::make_shared<Quadratic>(Vector{1.0}), 0.0);
    const auto cfg = CoolMomentumConfig::cooling_to_zero(0.1, 0.99, 10000);
    const auto log = coolmomentum_run(obj, Vector{1.0}, cfg, 9);

    // Independent scalar iteration of the same recurrence.
    double x = 1.0, dx = 0.0;
    const double alpha = std::pow(0.01, 1.0 / 10000.0);
    for (int n = 0; n < 10000; ++n) {
        const double rho = std::max(0.0, 1.0 - 0.01 / std::pow(alpha, n));
        const double lr = 0.01 * (1.0 + rho) / 2.0;
        dx = rho * dx - x * lr;
        x += dx;
    }
    CHECK(std::abs(log.final_x[0]) < 1e-2);
    CHECK(std::abs(log.final_x[0]) < 1.0);
    CHECK(log.final_x[0] == doctest::Approx(x).epsilon(1e-9));
}

TEST_CASE("logged schedule replays cooling_rho and lr_from_rho") {
    auto obj = noisy(std::make_shared<DoubleWell>(), 0.5);
    const auto cfg = CoolMomentumConfig::cooling_to_zero(0.1, 0.99, 2000);
    const auto log = coolmomentum_run(obj, Vector{0.9}, cfg, 4);
    REQUIRE(log.steps.size() == 2000);
    for (const auto& s : log.steps) {
        CHECK(s.rho == cooling_rho(s.step, cfg.rho0, cfg.alpha));
        CHECK(s.lr == lr_from_rho(s.rho, cfg.dt));
    }
    CHECK(log.steps.front().rho == 0.99);
    CHECK(log.steps.back().rho > 0.0);
    CHECK(log.clamped_steps == 0);
    CHECK(log.notes.empty());
}

TEST_CASE("equal seeds give identical logs, different seeds do not") {
    auto obj = noisy(std::make_shared<Rastrigin>(3), 1.0);
    const auto cfg = CoolMomentumConfig::cooling_to_zero(0.05, 0.99, 3000);
    const Vector x0{2.1, -0.7, 1.4};
    const auto a = coolmomentum_run(obj, x0, cfg, 77);
    const auto b = coolmomentum_run(obj, x0, cfg, 77);
    const auto c = coolmomentum_run(obj, x0, cfg, 78);
    CHECK(a.final_x == b.final_x);
    bool same_steps = true;
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        same_steps &= a.steps[i].loss == b.steps[i].loss && a.steps[i].dx_sq_norm == b.steps[i].dx_sq_norm;
    }
    CHECK(same_steps);
    CHECK(a.final_x != c.final_x);
}

TEST_CASE("driver kernels agree with hand-rolled loops") {
    auto obj = noisy(std::make_shared<Rosenbrock>(2), 0.0);
    const Rosenbrock exact(2);
    const Vector x0{-1.2, 1.0};

    const auto sgd = run_optimizer(obj, x0, SgdParams{1e-4}, 300, 0);
    auto s = OptimizerState::initial(x0);
    for (int n = 0; n < 300; ++n) s = sgd_step(s, exact.gradient(s.x), 1e-4);
    CHECK(sgd.final_x == s.x);
    CHECK(std::isnan(sgd.steps.front().rho));

    const auto mom = run_optimizer(obj, x0, MomentumParams{0.9, 1e-4}, 300, 0);
    s = OptimizerState::initial(x0);
    for (int n = 0; n < 300; ++n) s = momentum_step(s, exact.force(s.x), 0.9, 1e-4);
    CHECK(mom.final_x == s.x);

    const auto adam = run_optimizer(obj, x0, AdamConfig{}, 300, 0);
    s = OptimizerState::initial(x0);
    auto m = AdamMoments::zeros(2);
    for (int n = 0; n < 300; ++n) std::tie(s, m) = adam_step(s, m, exact.gradient(s.x), AdamConfig{});
    CHECK(adam.final_x == s.x);
    CHECK(adam.dt == 1.0);
}

TEST_CASE("effective time step follows the Langevin mapping") {
    CHECK(effective_dt(SgdParams{0.005}) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(effective_dt(MomentumParams{0.9, 0.0095}) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(effective_dt(CoolMomentumConfig{0.3, 0.9, 0.99, 10}) == 0.3);
}

TEST_CASE("run options: updates, tail window and observer") {
    auto obj = noisy(std::make_shared<Quadratic>(Vector{1.0, 2.0}), 0.1);
    RunOptions opts;
    opts.record_updates = true;
    opts.tail_window = 7;
    std::uint64_t calls = 0;
    opts.observer = [&](const StepView& v) {
        CHECK(v.record.step == calls);
        CHECK(v.x.size() == 2);
        ++calls;
    };
    const auto log = run_optimizer(obj, Vector{1.0, 1.0}, MomentumParams{0.5, 0.01}, 50, 3, opts);
    CHECK(calls == 50);
    CHECK(log.updates.size() == 50);
    CHECK(log.tail.size() == 7);
    CHECK(log.tail.back() == log.final_x);
    for (std::size_t n = 0; n < 50; ++n) {
        CHECK(log.steps[n].dx_sq_norm == squared_norm(log.updates[n]));
    }
}

TEST_CASE("non-finite force aborts with the step index") {
    Cliff cliff;
    try {
        run_optimizer(cliff, Vector{0.0}, MomentumParams{0.9, 0.01}, 1000, 0);
        FAIL("expected NonFiniteError");
    } catch (const NonFiniteError& e) {
        CHECK(e.step() > 0);
        CHECK(std::string(e.what()).find("step " + std::to_string(e.step())) != std::string::npos);
    }
}

TEST_CASE("running past the schedule is flagged") {
    auto obj = noisy(std::make_shared<Quadratic>(Vector{1.0}), 0.0);
    // alpha tuned to reach zero after 100 steps, run for 150.
    CoolMomentumConfig cfg{0.1, 0.9, cooling_rate(0.9, 100), 150};
    const auto log = coolmomentum_run(obj, Vector{1.0}, cfg, 0);
    CHECK(log.clamped_steps == 50);
    CHECK(log.notes.size() == 1);
    CHECK(log.steps.back().rho == 0.0);
    CHECK(log.steps.back().lr == doctest::Approx(0.005).epsilon(1e-15));
}

TEST_CASE("driver validates inputs") {
    auto obj = noisy(std::make_shared<Quadratic>(Vector{1.0}), 0.0);
    CHECK_THROWS_AS(run_optimizer(obj, Vector{1.0, 2.0}, SgdParams{0.1}, 10, 0), InvalidInput);
    CHECK_THROWS_AS(run_optimizer(obj, Vector{1.0}, SgdParams{-0.1}, 10, 0), InvalidInput);
    CHECK_THROWS_AS(run_optimizer(obj, Vector{std::nan("")}, SgdParams{0.1}, 10, 0), NonFiniteError);
}
