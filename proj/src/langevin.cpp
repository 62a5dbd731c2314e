#include "coolmom/langevin.hpp"

#include <cmath>

#include "coolmom/errors.hpp"

namespace coolmom {

void LangevinConfig::validate() const {
    require(std::isfinite(gamma) && gamma >= 0.0, "Langevin: friction must be nonnegative");
    require(std::isfinite(temperature) && temperature >= 0.0,
            "Langevin: temperature must be nonnegative");
    require(std::isfinite(dt) && dt > 0.0, "Langevin: dt must be positive");
}

PhaseState velocity_verlet_step(const PhaseState& state, const Objective& objective, double dt) {
    require(dt > 0.0, "velocity_verlet_step: dt must be positive");
    require_same_shape(state.x.size(), state.v.size(), "PhaseState velocity");
    require_same_shape(objective.dimension(), state.x.size(), "PhaseState coordinates");

    const Vector f0 = objective.force(state.x);
    if (!all_finite(f0)) throw NonFiniteError(0, "force at x");

    PhaseState next{state.x, state.v};
    for (std::size_t i = 0; i < next.x.size(); ++i) {
        next.x[i] += state.v[i] * dt + 0.5 * f0[i] * dt * dt;
    }
    const Vector f1 = objective.force(next.x);
    if (!all_finite(f1)) throw NonFiniteError(0, "force at x'");
    for (std::size_t i = 0; i < next.v.size(); ++i) {
        next.v[i] += 0.5 * (f0[i] + f1[i]) * dt;
    }
    return next;
}

double noise_std(const LangevinConfig& config) {
    config.validate();
    return std::sqrt(2.0 * config.gamma * config.temperature / config.dt);
}

double noise_std_from_rho(double rho, double temperature, double dt) {
    require(rho >= 0.0 && rho <= 1.0, "noise_std_from_rho: rho must lie in [0, 1]");
    require(temperature >= 0.0, "noise_std_from_rho: temperature must be nonnegative");
    require(dt > 0.0, "noise_std_from_rho: dt must be positive");
    return std::sqrt(4.0 * temperature * (1.0 - rho) / (1.0 + rho)) / dt;
}

FdState langevin_fd_step(std::span<const double> x, std::span<const double> delta_x,
                         std::span<const double> force, const LangevinConfig& config,
                         NoiseSource& noise) {
    const double sd = noise_std(config);
    require_same_shape(x.size(), delta_x.size(), "langevin_fd_step update");
    require_same_shape(x.size(), force.size(), "langevin_fd_step force");
    const double half = config.gamma * config.dt / 2.0;
    require(half <= 1.0, "langevin_fd_step: friction above 2/dt is not admissible");

    const double dt2 = config.dt * config.dt;
    FdState next{Vector(x.begin(), x.end()), Vector(x.size())};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f_hat = sd > 0.0 ? force[i] + sd * noise.gaussian() : force[i];
        next.delta_x[i] = ((1.0 - half) * delta_x[i] + dt2 * f_hat) / (1.0 + half);
        next.x[i] += next.delta_x[i];
    }
    return next;
}

Vector overdamped_step(std::span<const double> x, const Objective& objective,
                       const LangevinConfig& config, NoiseSource& noise) {
    config.validate();
    require(config.gamma > 0.0, "overdamped_step: friction must be strictly positive");
    require_same_shape(objective.dimension(), x.size(), "overdamped_step coordinates");

    const Vector f = objective.force(x);
    if (!all_finite(f)) throw NonFiniteError(0, "force");
    const double drift = config.dt / config.gamma;
    const double kick = std::sqrt(config.dt) * std::sqrt(2.0 * config.temperature / config.gamma);

    Vector next(x.begin(), x.end());
    for (std::size_t i = 0; i < next.size(); ++i) {
        next[i] += drift * f[i];
        if (kick > 0.0) next[i] += kick * noise.gaussian();
    }
    return next;
}

double fd_total_energy(const Objective& objective, std::span<const double> x_n,
                       std::span<const double> dx_n, std::span<const double> dx_next, double dt) {
    require_same_shape(x_n.size(), dx_n.size(), "fd_total_energy update");
    require_same_shape(x_n.size(), dx_next.size(), "fd_total_energy next update");
    double kinetic = 0.0;
    for (std::size_t i = 0; i < x_n.size(); ++i) {
        const double v = (dx_n[i] + dx_next[i]) / (2.0 * dt);
        kinetic += 0.5 * v * v;
    }
    return kinetic + objective.value(x_n);
}

EquilibriumMoments sample_equilibrium(const Quadratic& objective, const LangevinConfig& config,
                                      std::uint64_t steps, std::uint64_t burn_in,
                                      NoiseSource& noise, Dynamics dynamics) {
    config.validate();
    require(steps > burn_in, "sample_equilibrium: steps must exceed burn-in");

    const std::size_t dim = objective.dimension();
    Vector x(dim, 0.0);
    Vector dx(dim, 0.0);
    double sum_x2 = 0.0;
    double sum_v2 = 0.0;
    for (std::uint64_t n = 0; n < steps; ++n) {
        if (dynamics == Dynamics::underdamped) {
            FdState next = langevin_fd_step(x, dx, objective.force(x), config, noise);
            x = std::move(next.x);
            dx = std::move(next.delta_x);
        } else {
            x = overdamped_step(x, objective, config, noise);
        }
        if (n < burn_in) continue;
        sum_x2 += squared_norm(x);
        if (dynamics == Dynamics::underdamped) sum_v2 += squared_norm(dx) / (config.dt * config.dt);
    }

    EquilibriumMoments m;
    m.samples = steps - burn_in;
    const double denom = static_cast<double>(m.samples) * static_cast<double>(dim);
    m.mean_sq_position = sum_x2 / denom;
    m.kinetic_temperature = sum_v2 / denom;
    return m;
}

double sample_equilibrium_moment(const Quadratic& objective, const LangevinConfig& config,
                                 std::uint64_t steps, std::uint64_t burn_in, NoiseSource& noise,
                                 Dynamics dynamics) {
    return sample_equilibrium(objective, config, steps, burn_in, noise, dynamics).mean_sq_position;
}

}  // namespace coolmom
