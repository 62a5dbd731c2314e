#include "coolmom/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coolmom/errors.hpp"

namespace coolmom {

Vector Objective::gradient(std::span<const double> x) const {
    Vector g(dimension());
    gradient(x, g);
    return g;
}

Vector Objective::force(std::span<const double> x) const {
    Vector f = gradient(x);
    for (double& e : f) e = -e;
    return f;
}

double StochasticObjective::sample_force(std::span<const double> x, std::span<double> force) {
    const double loss = sample_gradient(x, force);
    for (double& e : force) e = -e;
    return loss;
}

namespace {

void check_shapes(const Objective& o, std::span<const double> x, std::span<double> grad) {
    require_same_shape(o.dimension(), x.size(), "objective argument");
    require_same_shape(o.dimension(), grad.size(), "objective gradient");
}

// Root of a continuous function with a sign change on [lo, hi].
template <class F>
double bisect(F f, double lo, double hi) {
    const bool lo_negative = f(lo) < 0.0;
    for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) return mid;
        if ((f(mid) < 0.0) == lo_negative) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

}  // namespace

// Quadratic

Quadratic::Quadratic(Vector stiffness) : stiffness_(std::move(stiffness)) {
    require(!stiffness_.empty(), "Quadratic: stiffness must be nonempty");
    for (double k : stiffness_) require(k > 0.0, "Quadratic: stiffness must be positive");
}

double Quadratic::value(std::span<const double> x) const {
    require_same_shape(dimension(), x.size(), "objective argument");
    double u = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) u += 0.5 * stiffness_[i] * x[i] * x[i];
    return u;
}

void Quadratic::gradient(std::span<const double> x, std::span<double> grad) const {
    check_shapes(*this, x, grad);
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = stiffness_[i] * x[i];
}

// DoubleWell

double DoubleWell::value(std::span<const double> x) const {
    require_same_shape(1, x.size(), "objective argument");
    const double s = x[0] * x[0] - 1.0;
    return s * s + kTilt * x[0];
}

void DoubleWell::gradient(std::span<const double> x, std::span<double> grad) const {
    check_shapes(*this, x, grad);
    grad[0] = 4.0 * x[0] * (x[0] * x[0] - 1.0) + kTilt;
}

DoubleWellGeometry double_well_geometry() {
    const auto slope = [](double x) { return 4.0 * x * (x * x - 1.0) + DoubleWell::kTilt; };
    return {bisect(slope, -2.0, -0.6), bisect(slope, 0.6, 2.0), bisect(slope, -0.5, 0.5)};
}

// Rosenbrock

Rosenbrock::Rosenbrock(std::size_t dim) : dim_(dim) {
    require(dim >= 2, "Rosenbrock: dimension must be at least 2");
}

double Rosenbrock::value(std::span<const double> x) const {
    require_same_shape(dim_, x.size(), "objective argument");
    double u = 0.0;
    for (std::size_t i = 0; i + 1 < dim_; ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        u += 100.0 * a * a + b * b;
    }
    return u;
}

void Rosenbrock::gradient(std::span<const double> x, std::span<double> grad) const {
    check_shapes(*this, x, grad);
    for (double& g : grad) g = 0.0;
    for (std::size_t i = 0; i + 1 < dim_; ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        grad[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
        grad[i + 1] += 200.0 * a;
    }
}

// Rastrigin

Rastrigin::Rastrigin(std::size_t dim) : dim_(dim) {
    require(dim >= 1, "Rastrigin: dimension must be at least 1");
}

double Rastrigin::value(std::span<const double> x) const {
    require_same_shape(dim_, x.size(), "objective argument");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double u = 10.0 * static_cast<double>(dim_);
    for (double xi : x) u += xi * xi - 10.0 * std::cos(two_pi * xi);
    return u;
}

void Rastrigin::gradient(std::span<const double> x, std::span<double> grad) const {
    check_shapes(*this, x, grad);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < dim_; ++i) {
        grad[i] = 2.0 * x[i] + 10.0 * two_pi * std::sin(two_pi * x[i]);
    }
}

double Rastrigin::origin_basin_radius() {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return bisect([](double x) { return 2.0 * x + 10.0 * two_pi * std::sin(two_pi * x); }, 0.5,
                  0.75);
}

// Flat

Flat::Flat(std::size_t dim) : dim_(dim) {
    require(dim >= 1, "Flat: dimension must be at least 1");
}

void Flat::gradient(std::span<const double> x, std::span<double> grad) const {
    check_shapes(*this, x, grad);
    for (double& g : grad) g = 0.0;
}

// GaussianNoiseObjective

GaussianNoiseObjective::GaussianNoiseObjective(std::shared_ptr<const Objective> base,
                                               double sigma, std::uint64_t seed)
    : base_(std::move(base)), sigma_(sigma), noise_(seed) {
    require(base_ != nullptr, "GaussianNoiseObjective: base objective is null");
    require(std::isfinite(sigma) && sigma >= 0.0, "GaussianNoiseObjective: sigma must be >= 0");
}

double GaussianNoiseObjective::sample_gradient(std::span<const double> x, std::span<double> grad) {
    base_->gradient(x, grad);
    if (sigma_ > 0.0) {
        for (double& g : grad) g += sigma_ * noise_.gaussian();
    }
    return base_->value(x);
}

GaussianNoiseObjective with_gaussian_noise(std::shared_ptr<const Objective> base, double sigma,
                                           std::uint64_t seed) {
    return GaussianNoiseObjective(std::move(base), sigma, seed);
}

double gradient_check(const Objective& objective, std::span<const double> x,
                      std::span<const std::size_t> indices, double h) {
    require_same_shape(objective.dimension(), x.size(), "gradient_check point");
    const Vector analytic = objective.gradient(x);

    std::vector<std::size_t> coords(indices.begin(), indices.end());
    if (coords.empty()) {
        for (std::size_t i = 0; i < x.size(); ++i) coords.push_back(i);
    }

    Vector probe(x.begin(), x.end());
    double diff_sq = 0.0;
    double analytic_sq = 0.0;
    double numeric_sq = 0.0;
    for (std::size_t i : coords) {
        require(i < x.size(), "gradient_check: index out of range");
        probe[i] = x[i] + h;
        const double up = objective.value(probe);
        probe[i] = x[i] - h;
        const double down = objective.value(probe);
        probe[i] = x[i];
        const double numeric = (up - down) / (2.0 * h);
        diff_sq += (numeric - analytic[i]) * (numeric - analytic[i]);
        analytic_sq += analytic[i] * analytic[i];
        numeric_sq += numeric * numeric;
    }
    const double scale = std::max({std::sqrt(analytic_sq), std::sqrt(numeric_sq), 1e-8});
    return std::sqrt(diff_sq) / scale;
}

}  // namespace coolmom
