#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "coolmom/noise.hpp"
#include "coolmom/objective.hpp"

namespace coolmom {

/// U(x) = sum_i k_i x_i^2 / 2.
class Quadratic final : public Objective {
public:
    explicit Quadratic(Vector stiffness);

    std::size_t dimension() const override { return stiffness_.size(); }
    double value(std::span<const double> x) const override;
    void gradient(std::span<const double> x, std::span<double> grad) const override;
    using Objective::gradient;

    const Vector& stiffness() const noexcept { return stiffness_; }

private:
    Vector stiffness_;
};

/// Tilted one-dimensional double well U(x) = (x^2 - 1)^2 + 0.3 x.
/// The global minimum sits at negative x.
class DoubleWell final : public Objective {
public:
    static constexpr double kTilt = 0.3;

    std::size_t dimension() const override { return 1; }
    double value(std::span<const double> x) const override;
    void gradient(std::span<const double> x, std::span<double> grad) const override;
    using Objective::gradient;
};

/// Critical points of the double well, located by bisection on U'.
struct DoubleWellGeometry {
    double global_min;
    double local_min;
    double barrier;  ///< local maximum separating the two basins
};

DoubleWellGeometry double_well_geometry();

/// Standard Rosenbrock, sum_i 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2. dim >= 2.
class Rosenbrock final : public Objective {
public:
    explicit Rosenbrock(std::size_t dim);

    std::size_t dimension() const override { return dim_; }
    double value(std::span<const double> x) const override;
    void gradient(std::span<const double> x, std::span<double> grad) const override;
    using Objective::gradient;

private:
    std::size_t dim_;
};

/// Standard Rastrigin, 10 d + sum_i (x_i^2 - 10 cos(2 pi x_i)). dim >= 1.
class Rastrigin final : public Objective {
public:
    explicit Rastrigin(std::size_t dim);

    std::size_t dimension() const override { return dim_; }
    double value(std::span<const double> x) const override;
    void gradient(std::span<const double> x, std::span<double> grad) const override;
    using Objective::gradient;

    /// Half-width of the basin of the origin along each axis: the first
    /// positive local maximum of the one-dimensional term.
    static double origin_basin_radius();

private:
    std::size_t dim_;
};

/// U = 0 everywhere; a zero-force fixture.
class Flat final : public Objective {
public:
    explicit Flat(std::size_t dim);

    std::size_t dimension() const override { return dim_; }
    double value(std::span<const double>) const override { return 0.0; }
    void gradient(std::span<const double> x, std::span<double> grad) const override;
    using Objective::gradient;

private:
    std::size_t dim_;
};

/// Exact gradient plus i.i.d. N(0, sigma^2) noise per coordinate. The loss
/// estimate is the exact U. sigma = 0 reproduces the base objective
/// bit-for-bit.
class GaussianNoiseObjective final : public StochasticObjective {
public:
    GaussianNoiseObjective(std::shared_ptr<const Objective> base, double sigma, std::uint64_t seed);

    std::size_t dimension() const override { return base_->dimension(); }
    const Objective& exact() const override { return *base_; }
    double sample_gradient(std::span<const double> x, std::span<double> grad) override;
    void reseed(std::uint64_t seed) override { noise_.reseed(seed); }

    double sigma() const noexcept { return sigma_; }

private:
    std::shared_ptr<const Objective> base_;
    double sigma_;
    NoiseSource noise_;
};

GaussianNoiseObjective with_gaussian_noise(std::shared_ptr<const Objective> base, double sigma,
                                           std::uint64_t seed);

/// Membership test for the basin of attraction of the global minimum.
using BasinOracle = std::function<bool(std::span<const double>)>;

/// Relative error ||g - g_fd|| / max(||g||, ||g_fd||, 1e-8) between the
/// analytic gradient and central differences with step h, over the listed
/// coordinates (all coordinates when `indices` is empty).
double gradient_check(const Objective& objective, std::span<const double> x,
                      std::span<const std::size_t> indices = {}, double h = 1e-5);

}  // namespace coolmom
