#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coolmom/run.hpp"
#include "coolmom/types.hpp"

namespace coolmom {

/// Temperature over a window of iterations [begin, end).
struct TemperatureReport {
    std::uint64_t begin = 0;
    std::uint64_t end = 0;
    std::size_t size = 0;       ///< number of parameters
    double temperature = 0.0;   ///< mean of (dx/dt)^2 per parameter per step
    double rescaled = 0.0;      ///< temperature * dt^2
    bool partial = false;       ///< trailing window shorter than requested
};

/// T = 1/(Size * S) sum_i sum_n (dx_{i,n} / dt)^2 over the window of
/// update vectors.
TemperatureReport measure_temperature(std::span<const Vector> updates, double dt);

/// sum_i m v_i^2 / 2.
double kinetic_energy(std::span<const double> v, double mass = 1.0);

/// Arithmetic mean of trajectory[begin, end).
Vector polyak_ruppert_average(std::span<const Vector> trajectory, std::size_t begin,
                              std::size_t end);

/// One report per window of `steps_per_epoch` iterations, computed from
/// the logged ||dx||^2 values. A trailing short window is reported last with
/// `partial` set.
std::vector<TemperatureReport> epoch_temperature_series(const RunLog& run,
                                                        std::uint64_t steps_per_epoch);

/// Per-epoch median of the per-step rescaled temperature ||dx_n||^2 / Size.
/// Less sensitive to isolated large steps than the epoch mean.
std::vector<double> epoch_median_rescaled_temperature(const RunLog& run,
                                                      std::uint64_t steps_per_epoch);

struct MannKendallResult {
    double s = 0.0;
    double variance = 0.0;
    double z = 0.0;
    double p_value = 1.0;  ///< two-sided, normal approximation
    int trend = 0;         ///< -1, 0 or +1 at the requested level
};

/// Mann-Kendall trend test with the tie-corrected variance and continuity
/// correction. Requires at least 3 points.
MannKendallResult mann_kendall(std::span<const double> series, double significance = 0.05);

}  // namespace coolmom
