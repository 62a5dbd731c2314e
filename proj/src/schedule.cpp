#include "coolmom/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "coolmom/errors.hpp"

namespace coolmom {

namespace {

void require_dt(double dt) {
    require(std::isfinite(dt) && dt > 0.0, "time step must be positive and finite");
}

void require_rho(double rho) {
    require(rho >= 0.0 && rho <= 1.0, "momentum coefficient must lie in [0, 1]");
}

}  // namespace

double rho_from_gamma(double gamma, double dt) {
    require_dt(dt);
    require(gamma >= 0.0, "friction must be nonnegative");
    const double half = gamma * dt / 2.0;
    require(half <= 1.0, "friction above 2/dt gives a negative momentum coefficient");
    return (1.0 - half) / (1.0 + half);
}

double gamma_from_rho(double rho, double dt) {
    require_dt(dt);
    require_rho(rho);
    return (2.0 / dt) * (1.0 - rho) / (1.0 + rho);
}

double lr_from_rho(double rho, double dt) {
    require_dt(dt);
    require_rho(rho);
    return dt * dt * (1.0 + rho) / 2.0;
}

double dt_from_lr(double rho, double lr) {
    require_rho(rho);
    require(lr > 0.0, "learning rate must be positive");
    return std::sqrt(2.0 * lr / (1.0 + rho));
}

double cooling_rate(double rho0, std::uint64_t total_steps) {
    require(rho0 >= 0.0 && rho0 < 1.0, "cooling_rate: rho0 must lie in [0, 1)");
    require(total_steps > 0, "cooling_rate: total_steps must be positive");
    const double floor_value = 1.0 - rho0;
    const double steps = static_cast<double>(total_steps);
    double alpha = std::pow(floor_value, 1.0 / steps);
    // Round down until alpha^S no longer exceeds 1 - rho0.
    while (alpha > 0.0 && std::pow(alpha, steps) > floor_value) {
        alpha = std::nextafter(alpha, 0.0);
    }
    return alpha;
}

double cooling_rho(std::uint64_t n, double rho0, double alpha) {
    require(rho0 >= 0.0 && rho0 < 1.0, "cooling_rho: rho0 must lie in [0, 1)");
    require(alpha > 0.0 && alpha <= 1.0, "cooling_rho: alpha must lie in (0, 1]");
    if (n == 0) return rho0;
    const double raw = 1.0 - (1.0 - rho0) / std::pow(alpha, static_cast<double>(n));
    return std::max(0.0, raw);
}

}  // namespace coolmom
