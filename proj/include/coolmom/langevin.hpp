#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "coolmom/noise.hpp"
#include "coolmom/objective.hpp"
#include "coolmom/objectives.hpp"

namespace coolmom {

/// Friction, temperature and time step of a unit-mass Langevin system.
struct LangevinConfig {
    double gamma = 0.0;
    double temperature = 0.0;
    double dt = 0.01;
    static constexpr double mass = 1.0;

    void validate() const;
};

struct PhaseState {
    Vector x;
    Vector v;
};

/// Kick-drift-kick Velocity-Verlet for m dv/dt = f(x):
///   x' = x + v dt + f(x) dt^2 / 2
///   v' = v + (f(x) + f(x')) dt / 2
PhaseState velocity_verlet_step(const PhaseState& state, const Objective& objective, double dt);

/// Per-step std of the discrete random force, sqrt(2 gamma T / dt).
double noise_std(const LangevinConfig& config);

/// The same std written through the momentum coefficient:
/// sqrt(4 T (1 - rho) / (1 + rho)) / dt.
double noise_std_from_rho(double rho, double temperature, double dt);

struct FdState {
    Vector x;
    Vector delta_x;
};

/// One step of the finite-difference Langevin equation
///   (dx_{n+1} - dx_n) / dt^2 = f_n + R_n - gamma (dx_{n+1} + dx_n) / (2 dt)
/// solved for dx_{n+1} directly (no momentum/learning-rate substitution):
///   dx_{n+1} = ((1 - gamma dt/2) dx_n + dt^2 (f_n + R_n)) / (1 + gamma dt/2).
/// R_n = noise_std(config) * xi, one xi per coordinate drawn from `noise`
/// (nothing is drawn when the std is zero). Requires gamma <= 2/dt.
FdState langevin_fd_step(std::span<const double> x, std::span<const double> delta_x,
                         std::span<const double> force, const LangevinConfig& config,
                         NoiseSource& noise);

/// Ermak-McCammon step of the overdamped equation:
///   x' = x + dt f(x) / gamma + sqrt(dt) sqrt(2 T / gamma) xi.
/// Requires gamma > 0.
Vector overdamped_step(std::span<const double> x, const Objective& objective,
                       const LangevinConfig& config, NoiseSource& noise);

/// E_k + U with the centred velocity (dx_{n+1} + dx_n) / (2 dt) at x_n,
/// the velocity the friction term of the finite-difference scheme acts on.
double fd_total_energy(const Objective& objective, std::span<const double> x_n,
                       std::span<const double> dx_n, std::span<const double> dx_next, double dt);

enum class Dynamics { underdamped, overdamped };

struct EquilibriumMoments {
    double mean_sq_position = 0.0;  ///< <x^2> per coordinate after burn-in
    /// Kinetic temperature from v = dx/dt, averaged per coordinate. Zero for
    /// overdamped runs, which have no velocity.
    double kinetic_temperature = 0.0;
    std::uint64_t samples = 0;
};

/// Samples a harmonic potential from x = 0 (and zero update) for `steps`
/// iterations and averages over the iterations after `burn_in`.
EquilibriumMoments sample_equilibrium(const Quadratic& objective, const LangevinConfig& config,
                                      std::uint64_t steps, std::uint64_t burn_in,
                                      NoiseSource& noise,
                                      Dynamics dynamics = Dynamics::underdamped);

/// <x^2> from sample_equilibrium, for comparison against T/k.
double sample_equilibrium_moment(const Quadratic& objective, const LangevinConfig& config,
                                 std::uint64_t steps, std::uint64_t burn_in, NoiseSource& noise,
                                 Dynamics dynamics = Dynamics::underdamped);

}  // namespace coolmom
