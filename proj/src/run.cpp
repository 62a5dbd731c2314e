#include "coolmom/run.hpp"

#include <cmath>
#include <limits>
#include <type_traits>

#include "coolmom/errors.hpp"
#include "coolmom/schedule.hpp"

namespace coolmom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_finite(std::span<const double> v, std::uint64_t step, const char* what) {
    if (!all_finite(v)) throw NonFiniteError(step, what);
}

}  // namespace

std::string optimizer_name(const OptimizerParams& params) {
    return std::visit(Overloaded{
                          [](const SgdParams&) { return std::string("sgd"); },
                          [](const MomentumParams&) { return std::string("momentum"); },
                          [](const AdamConfig&) { return std::string("adam"); },
                          [](const CoolMomentumConfig&) { return std::string("coolmomentum"); },
                      },
                      params);
}

double effective_dt(const OptimizerParams& params) {
    return std::visit(Overloaded{
                          [](const SgdParams& p) { return dt_from_lr(0.0, p.lr); },
                          [](const MomentumParams& p) { return dt_from_lr(p.rho, p.lr); },
                          [](const AdamConfig&) { return 1.0; },
                          [](const CoolMomentumConfig& c) { return c.dt; },
                      },
                      params);
}

RunLog run_optimizer(StochasticObjective& objective, std::span<const double> x0,
                     const OptimizerParams& params, std::uint64_t steps, std::uint64_t seed,
                     const RunOptions& options) {
    const std::size_t dim = objective.dimension();
    require_same_shape(dim, x0.size(), "initial point");
    check_finite(x0, 0, "initial parameter");
    std::visit(Overloaded{
                   [](const SgdParams& p) { require(p.lr > 0.0, "SGD: lr must be positive"); },
                   [](const MomentumParams& p) {
                       require(p.rho >= 0.0 && p.rho <= 1.0, "Momentum: rho must lie in [0, 1]");
                       require(p.lr > 0.0, "Momentum: lr must be positive");
                   },
                   [](const auto& c) { c.validate(); },
               },
               params);

    objective.reseed(seed);

    RunLog log;
    log.optimizer = optimizer_name(params);
    log.seed = seed;
    log.dimension = dim;
    log.dt = effective_dt(params);
    log.steps.reserve(steps);

    OptimizerState state = OptimizerState::initial(Vector(x0.begin(), x0.end()));
    AdamMoments moments = AdamMoments::zeros(dim);
    Vector buffer(dim);

    for (std::uint64_t n = 0; n < steps; ++n) {
        StepRecord rec;
        rec.step = n;

        std::visit(Overloaded{
                       [&](const SgdParams& p) {
                           rec.loss = objective.sample_gradient(state.x, buffer);
                           check_finite(buffer, n, "gradient");
                           rec.rho = kNaN;
                           rec.lr = p.lr;
                           state = sgd_step(state, buffer, p.lr);
                       },
                       [&](const MomentumParams& p) {
                           rec.loss = objective.sample_force(state.x, buffer);
                           check_finite(buffer, n, "force");
                           rec.rho = p.rho;
                           rec.lr = p.lr;
                           state = momentum_step(state, buffer, p.rho, p.lr);
                       },
                       [&](const AdamConfig& c) {
                           rec.loss = objective.sample_gradient(state.x, buffer);
                           check_finite(buffer, n, "gradient");
                           rec.rho = kNaN;
                           rec.lr = c.lr;
                           auto [next, next_moments] = adam_step(state, moments, buffer, c);
                           state = std::move(next);
                           moments = std::move(next_moments);
                       },
                       [&](const CoolMomentumConfig& c) {
                           rec.loss = objective.sample_force(state.x, buffer);
                           check_finite(buffer, n, "force");
                           rec.rho = cooling_rho(n, c.rho0, c.alpha);
                           rec.lr = lr_from_rho(rec.rho, c.dt);
                           if (rec.rho == 0.0 && c.rho0 > 0.0) ++log.clamped_steps;
                           state = momentum_step(state, buffer, rec.rho, rec.lr);
                       },
                   },
                   params);

        if (!std::isfinite(rec.loss)) throw NonFiniteError(n, "loss");
        check_finite(state.x, n, "parameter");
        rec.dx_sq_norm = squared_norm(state.delta_x);
        log.steps.push_back(rec);

        if (options.record_updates) log.updates.push_back(state.delta_x);
        if (options.tail_window > 0) {
            log.tail.push_back(state.x);
            if (log.tail.size() > options.tail_window) log.tail.pop_front();
        }
        if (options.observer) options.observer(StepView{log.steps.back(), state.x, state.delta_x});
    }

    if (log.clamped_steps > 0) {
        log.notes.push_back("momentum schedule clamped at zero for " +
                            std::to_string(log.clamped_steps) +
                            " steps; those steps are SGD with lr = dt^2/2");
    }
    log.final_x = std::move(state.x);
    return log;
}

RunLog coolmomentum_run(StochasticObjective& objective, std::span<const double> x0,
                        const CoolMomentumConfig& config, std::uint64_t seed,
                        const RunOptions& options) {
    config.validate();
    return run_optimizer(objective, x0, config, config.total_steps, seed, options);
}

}  // namespace coolmom
