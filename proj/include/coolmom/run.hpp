#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "coolmom/objective.hpp"
#include "coolmom/optimizers.hpp"

namespace coolmom {

struct SgdParams {
    double lr = 0.01;
};

/// Constant-coefficient Momentum.
struct MomentumParams {
    double rho = 0.9;
    double lr = 0.01;
};

using OptimizerParams = std::variant<SgdParams, MomentumParams, AdamConfig, CoolMomentumConfig>;

std::string optimizer_name(const OptimizerParams& params);

/// Time step the optimizer corresponds to under the Langevin mapping.
/// SGD is Momentum with rho = 0; Adam has no such mapping and reports 1, so
/// its temperature equals the rescaled temperature (mean squared update).
double effective_dt(const OptimizerParams& params);

/// One optimizer iteration. `rho` is NaN for SGD and Adam.
struct StepRecord {
    std::uint64_t step = 0;  ///< iteration index n (0-based)
    double rho = 0.0;
    double lr = 0.0;
    double loss = 0.0;        ///< loss estimate at x_n
    double dx_sq_norm = 0.0;  ///< ||delta_x_{n+1}||^2
};

/// Read-only view handed to a run observer after each iteration.
struct StepView {
    const StepRecord& record;
    std::span<const double> x;        ///< x_{n+1}
    std::span<const double> delta_x;  ///< delta_x_{n+1}
};

struct RunOptions {
    /// Keep every update vector delta_x_{n+1} (memory: steps * dimension).
    bool record_updates = false;
    /// Number of most recent iterates to keep for Polyak-Ruppert averaging.
    std::uint64_t tail_window = 0;
    std::function<void(const StepView&)> observer;
};

struct RunLog {
    std::string optimizer;
    std::uint64_t seed = 0;
    std::size_t dimension = 0;
    double dt = std::numeric_limits<double>::quiet_NaN();
    std::vector<StepRecord> steps;
    std::vector<Vector> updates;  ///< only with RunOptions::record_updates
    std::deque<Vector> tail;      ///< last RunOptions::tail_window iterates
    Vector final_x;
    /// Steps at which the momentum schedule had already clamped to zero
    /// before the run ended (CoolMomentum only). Beyond that point the
    /// optimizer is SGD with lr = dt^2 / 2.
    std::uint64_t clamped_steps = 0;
    std::vector<std::string> notes;
};

/// Runs `steps` iterations of the chosen optimizer from x0. The objective's
/// random stream is reseeded with `seed` first, so equal seeds produce
/// identical logs. Throws NonFiniteError if a force, gradient or parameter
/// becomes non-finite.
RunLog run_optimizer(StochasticObjective& objective, std::span<const double> x0,
                     const OptimizerParams& params, std::uint64_t steps, std::uint64_t seed,
                     const RunOptions& options = {});

/// The CoolMomentum loop: for n = 0 .. S-1 compute the stochastic force,
/// rho_n = cooling_rho(n, rho0, alpha), lr_n = dt^2 (1 + rho_n) / 2 and
/// apply momentum_step. Runs exactly config.total_steps iterations.
RunLog coolmomentum_run(StochasticObjective& objective, std::span<const double> x0,
                        const CoolMomentumConfig& config, std::uint64_t seed,
                        const RunOptions& options = {});

}  // namespace coolmom
