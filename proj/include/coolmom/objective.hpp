#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "coolmom/types.hpp"

namespace coolmom {

/// Potential energy U(x) with an exact gradient. Implementations are pure
/// and reentrant.
class Objective {
public:
    virtual ~Objective() = default;

    virtual std::size_t dimension() const = 0;
    virtual double value(std::span<const double> x) const = 0;
    virtual void gradient(std::span<const double> x, std::span<double> grad) const = 0;

    Vector gradient(std::span<const double> x) const;

    /// f(x) = -dU/dx.
    Vector force(std::span<const double> x) const;
};

/// Noisy estimate of an Objective (minibatch loss or an additive-noise
/// model). Holds a private random stream, so an instance belongs to one
/// trajectory at a time.
class StochasticObjective {
public:
    virtual ~StochasticObjective() = default;

    virtual std::size_t dimension() const = 0;

    /// The noise-free objective this one estimates.
    virtual const Objective& exact() const = 0;

    /// Draws one estimate: returns the loss estimate and writes the
    /// stochastic gradient into `grad`.
    virtual double sample_gradient(std::span<const double> x, std::span<double> grad) = 0;

    /// Restarts the private random stream.
    virtual void reseed(std::uint64_t seed) = 0;

    /// Force form of sample_gradient: writes -dU_hat/dx. This is the single
    /// place where the gradient (ML) and force (physics) sign conventions
    /// meet; Momentum-type kernels consume its output directly.
    double sample_force(std::span<const double> x, std::span<double> force);
};

}  // namespace coolmom
