#include "coolmom/optimizers.hpp"

#include <cmath>

#include "coolmom/errors.hpp"
#include "coolmom/schedule.hpp"

namespace coolmom {

OptimizerState OptimizerState::initial(Vector x0) {
    OptimizerState s;
    s.delta_x.assign(x0.size(), 0.0);
    s.x = std::move(x0);
    return s;
}

namespace {

void require_state(const OptimizerState& state) {
    require_same_shape(state.x.size(), state.delta_x.size(), "OptimizerState.delta_x");
}

}  // namespace

OptimizerState sgd_step(const OptimizerState& state, std::span<const double> grad, double lr) {
    require_state(state);
    require_same_shape(state.x.size(), grad.size(), "sgd_step gradient");
    require(lr > 0.0, "sgd_step: learning rate must be positive");

    OptimizerState next{state.x, state.delta_x, state.n + 1};
    for (std::size_t i = 0; i < next.x.size(); ++i) {
        next.x[i] = state.x[i] - lr * grad[i];
        next.delta_x[i] = next.x[i] - state.x[i];
    }
    return next;
}

OptimizerState momentum_step(const OptimizerState& state, std::span<const double> force,
                             double rho, double lr) {
    require_state(state);
    require_same_shape(state.x.size(), force.size(), "momentum_step force");
    require(rho >= 0.0 && rho <= 1.0, "momentum_step: rho must lie in [0, 1]");
    require(lr > 0.0, "momentum_step: learning rate must be positive");

    OptimizerState next{state.x, state.delta_x, state.n + 1};
    for (std::size_t i = 0; i < next.x.size(); ++i) {
        next.delta_x[i] = rho * state.delta_x[i] + force[i] * lr;
        next.x[i] = state.x[i] + next.delta_x[i];
    }
    return next;
}

void AdamConfig::validate() const {
    require(lr > 0.0, "Adam: lr must be positive");
    require(beta1 >= 0.0 && beta1 < 1.0, "Adam: beta1 must lie in [0, 1)");
    require(beta2 >= 0.0 && beta2 < 1.0, "Adam: beta2 must lie in [0, 1)");
    require(epsilon > 0.0, "Adam: epsilon must be positive");
}

AdamMoments AdamMoments::zeros(std::size_t dim) {
    return {Vector(dim, 0.0), Vector(dim, 0.0)};
}

std::pair<OptimizerState, AdamMoments> adam_step(const OptimizerState& state,
                                                 const AdamMoments& moments,
                                                 std::span<const double> grad,
                                                 const AdamConfig& config) {
    require_state(state);
    config.validate();
    const std::size_t dim = state.x.size();
    require_same_shape(dim, grad.size(), "adam_step gradient");
    require_same_shape(dim, moments.m.size(), "adam_step first moment");
    require_same_shape(dim, moments.v.size(), "adam_step second moment");

    const double t = static_cast<double>(state.n + 1);
    const double bias1 = 1.0 - std::pow(config.beta1, t);
    const double bias2 = 1.0 - std::pow(config.beta2, t);

    OptimizerState next{state.x, state.delta_x, state.n + 1};
    AdamMoments out = moments;
    for (std::size_t i = 0; i < dim; ++i) {
        out.m[i] = config.beta1 * moments.m[i] + (1.0 - config.beta1) * grad[i];
        out.v[i] = config.beta2 * moments.v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
        const double m_hat = out.m[i] / bias1;
        const double v_hat = out.v[i] / bias2;
        next.x[i] = state.x[i] - config.lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
        next.delta_x[i] = next.x[i] - state.x[i];
    }
    return {std::move(next), std::move(out)};
}

void CoolMomentumConfig::validate() const {
    require(std::isfinite(dt) && dt > 0.0, "CoolMomentum: dt must be positive");
    require(rho0 >= 0.0 && rho0 < 1.0, "CoolMomentum: rho0 must lie in [0, 1)");
    require(alpha > 0.0 && alpha <= 1.0, "CoolMomentum: alpha must lie in (0, 1]");
    require(total_steps > 0, "CoolMomentum: total_steps must be positive");
}

CoolMomentumConfig CoolMomentumConfig::cooling_to_zero(double dt, double rho0,
                                                       std::uint64_t total_steps) {
    CoolMomentumConfig c{dt, rho0, cooling_rate(rho0, total_steps), total_steps};
    c.validate();
    return c;
}

}  // namespace coolmom
