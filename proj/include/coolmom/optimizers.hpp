#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "coolmom/types.hpp"

namespace coolmom {

/// Parameters, last update and iteration counter of a first-order optimizer.
struct OptimizerState {
    Vector x;
    Vector delta_x;  ///< previous update, same size as x
    std::uint64_t n = 0;

    /// Fresh state at x0 with a zero update vector.
    static OptimizerState initial(Vector x0);
};

/// Plain SGD, consumes a gradient: x' = x - lr * grad.
OptimizerState sgd_step(const OptimizerState& state, std::span<const double> grad, double lr);

/// Heavy-ball Momentum in force form (force = -gradient):
///   delta_x' = rho * delta_x + lr * force,   x' = x + delta_x'.
OptimizerState momentum_step(const OptimizerState& state, std::span<const double> force,
                             double rho, double lr);

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void validate() const;
};

/// First and second moment estimates; zero vectors before the first step.
struct AdamMoments {
    Vector m;
    Vector v;

    static AdamMoments zeros(std::size_t dim);
};

/// Bias-corrected Adam step, consumes a gradient. Uses state.n + 1 as the
/// bias-correction exponent.
std::pair<OptimizerState, AdamMoments> adam_step(const OptimizerState& state,
                                                 const AdamMoments& moments,
                                                 std::span<const double> grad,
                                                 const AdamConfig& config);

/// Hyperparameters of the annealed Momentum optimizer.
struct CoolMomentumConfig {
    double dt = 0.1;       ///< time step; lr_n = dt^2 (1 + rho_n) / 2
    double rho0 = 0.99;    ///< initial momentum coefficient
    double alpha = 1.0;    ///< cooling rate in (0, 1]
    std::uint64_t total_steps = 1;

    void validate() const;

    /// Config whose schedule reaches rho = 0 exactly at `total_steps`.
    static CoolMomentumConfig cooling_to_zero(double dt, double rho0, std::uint64_t total_steps);
};

}  // namespace coolmom
