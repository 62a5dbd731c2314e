#pragma once

#include <cstdint>

namespace coolmom {

// Closed-form maps between the friction/time-step view of Langevin
// dynamics and the (momentum, learning rate) view of the Momentum
// optimizer, plus the geometric momentum-decay schedule used for
// annealing. Mass is fixed at 1.

/// Momentum coefficient for friction `gamma` and step `dt`:
/// (1 - gamma*dt/2) / (1 + gamma*dt/2). Requires 0 <= gamma <= 2/dt.
double rho_from_gamma(double gamma, double dt);

/// Inverse of rho_from_gamma: (2/dt) * (1 - rho) / (1 + rho). Requires rho in [0, 1].
double gamma_from_rho(double rho, double dt);

/// Learning rate dt^2 * (1 + rho) / 2. Requires rho in [0, 1], dt > 0.
double lr_from_rho(double rho, double dt);

/// Time step implied by a (rho, lr) pair; inverse of lr_from_rho in dt.
double dt_from_lr(double rho, double lr);

/// Cooling rate alpha = (1 - rho0)^(1/S) so that the schedule hits zero at
/// step S. The returned value is the largest double with
/// alpha^S <= 1 - rho0, which makes cooling_rho(S, rho0, alpha) clamp to
/// exactly 0 instead of leaving a rounding residue of order S*eps.
double cooling_rate(double rho0, std::uint64_t total_steps);

/// max(0, 1 - (1 - rho0) / alpha^n). Equals rho0 at n = 0 and is
/// nonincreasing in n for alpha <= 1.
double cooling_rho(std::uint64_t n, double rho0, double alpha);

}  // namespace coolmom
