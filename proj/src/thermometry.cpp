#include "coolmom/thermometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "coolmom/errors.hpp"

namespace coolmom {

TemperatureReport measure_temperature(std::span<const Vector> updates, double dt) {
    require(!updates.empty(), "measure_temperature: empty window");
    require(dt > 0.0, "measure_temperature: dt must be positive");
    const std::size_t size = updates.front().size();
    require(size > 0, "measure_temperature: zero-length update vectors");

    double sum = 0.0;
    for (const Vector& u : updates) {
        require_same_shape(size, u.size(), "measure_temperature update");
        sum += squared_norm(u);
    }
    TemperatureReport r;
    r.begin = 0;
    r.end = updates.size();
    r.size = size;
    r.temperature = sum / (static_cast<double>(size) * static_cast<double>(updates.size()) * dt * dt);
    r.rescaled = r.temperature * dt * dt;
    return r;
}

double kinetic_energy(std::span<const double> v, double mass) {
    return 0.5 * mass * squared_norm(v);
}

Vector polyak_ruppert_average(std::span<const Vector> trajectory, std::size_t begin,
                              std::size_t end) {
    require(begin < end, "polyak_ruppert_average: empty window");
    require(end <= trajectory.size(), "polyak_ruppert_average: window exceeds trajectory");
    const std::size_t dim = trajectory[begin].size();
    Vector mean(dim, 0.0);
    for (std::size_t n = begin; n < end; ++n) {
        require_same_shape(dim, trajectory[n].size(), "polyak_ruppert_average iterate");
        for (std::size_t i = 0; i < dim; ++i) mean[i] += trajectory[n][i];
    }
    const double count = static_cast<double>(end - begin);
    for (double& m : mean) m /= count;
    return mean;
}

namespace {

void require_epochs(const RunLog& run, std::uint64_t steps_per_epoch) {
    require(steps_per_epoch > 0, "steps_per_epoch must be positive");
    require(steps_per_epoch <= run.steps.size(), "steps_per_epoch exceeds run length");
    require(run.dimension > 0, "run has zero dimension");
}

}  // namespace

std::vector<TemperatureReport> epoch_temperature_series(const RunLog& run,
                                                        std::uint64_t steps_per_epoch) {
    require_epochs(run, steps_per_epoch);
    require(std::isfinite(run.dt) && run.dt > 0.0, "run has no valid time step");

    const double size = static_cast<double>(run.dimension);
    const double dt2 = run.dt * run.dt;
    std::vector<TemperatureReport> out;
    for (std::uint64_t begin = 0; begin < run.steps.size(); begin += steps_per_epoch) {
        const std::uint64_t end = std::min<std::uint64_t>(begin + steps_per_epoch, run.steps.size());
        double sum = 0.0;
        for (std::uint64_t n = begin; n < end; ++n) sum += run.steps[n].dx_sq_norm;

        TemperatureReport r;
        r.begin = begin;
        r.end = end;
        r.size = run.dimension;
        r.temperature = sum / (size * static_cast<double>(end - begin) * dt2);
        r.rescaled = r.temperature * dt2;
        r.partial = end - begin < steps_per_epoch;
        out.push_back(r);
    }
    return out;
}

std::vector<double> epoch_median_rescaled_temperature(const RunLog& run,
                                                      std::uint64_t steps_per_epoch) {
    require_epochs(run, steps_per_epoch);
    const double size = static_cast<double>(run.dimension);
    std::vector<double> medians;
    std::vector<double> window;
    for (std::uint64_t begin = 0; begin < run.steps.size(); begin += steps_per_epoch) {
        const std::uint64_t end = std::min<std::uint64_t>(begin + steps_per_epoch, run.steps.size());
        window.clear();
        for (std::uint64_t n = begin; n < end; ++n) window.push_back(run.steps[n].dx_sq_norm / size);
        std::sort(window.begin(), window.end());
        const std::size_t m = window.size();
        medians.push_back(m % 2 ? window[m / 2] : 0.5 * (window[m / 2 - 1] + window[m / 2]));
    }
    return medians;
}

MannKendallResult mann_kendall(std::span<const double> series, double significance) {
    const std::size_t n = series.size();
    require(n >= 3, "mann_kendall: need at least 3 points");
    require(significance > 0.0 && significance < 1.0, "mann_kendall: significance must be in (0, 1)");

    MannKendallResult r;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = series[j] - series[i];
            r.s += (d > 0.0) - (d < 0.0);
        }
    }

    std::map<double, std::size_t> ties;
    for (double v : series) ++ties[v];
    const double nn = static_cast<double>(n);
    double var = nn * (nn - 1.0) * (2.0 * nn + 5.0);
    for (const auto& [value, count] : ties) {
        const double t = static_cast<double>(count);
        var -= t * (t - 1.0) * (2.0 * t + 5.0);
    }
    r.variance = var / 18.0;

    if (r.variance > 0.0) {
        if (r.s > 0.0) {
            r.z = (r.s - 1.0) / std::sqrt(r.variance);
        } else if (r.s < 0.0) {
            r.z = (r.s + 1.0) / std::sqrt(r.variance);
        }
    }
    r.p_value = std::erfc(std::abs(r.z) / std::sqrt(2.0));
    if (r.p_value < significance) r.trend = r.z > 0.0 ? 1 : -1;
    return r;
}

}  // namespace coolmom
