#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "coolmom/dataset.hpp"
#include "coolmom/run.hpp"

namespace coolmom::bench {

/// Bad or inconsistent experiment configuration (exit category "config").
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MlpSpec {
    std::vector<std::size_t> layers{4, 16, 1};
    Task task = Task::regression;
    std::size_t examples = 512;
    std::size_t batch_size = 16;
    double label_noise = 0.1;
    std::uint64_t data_seed = 1;
    double init_scale = 1.0;
};

struct ObjectiveSpec {
    /// quadratic | double_well | rosenbrock | rastrigin | flat | mlp
    std::string name = "double_well";
    std::size_t dim = 0;       ///< rosenbrock, rastrigin, flat
    Vector stiffness;          ///< quadratic
    double noise_sigma = 0.0;  ///< additive gradient noise, analytic objectives only
    Vector x0;                 ///< starting point, analytic objectives only
    std::optional<MlpSpec> mlp;
};

struct CoolMomentumSpec {
    double dt = 0.1;
    double rho0 = 0.99;
    /// Defaults to cooling_rate(rho0, steps) so rho reaches 0 at the last step.
    std::optional<double> alpha;
};

using OptimizerSpec = std::variant<SgdParams, MomentumParams, AdamConfig, CoolMomentumSpec>;

enum class LogGranularity { per_step, per_epoch };

struct ExperimentConfig {
    std::string name = "experiment";
    ObjectiveSpec objective;
    OptimizerSpec optimizer = CoolMomentumSpec{};
    std::uint64_t steps = 1000;
    std::uint64_t steps_per_epoch = 100;
    std::vector<std::uint64_t> seeds{1};
    std::string output_dir = "out";
    LogGranularity granularity = LogGranularity::per_step;
};

const std::vector<std::string>& objective_names();
const std::vector<std::string>& optimizer_names();

/// Optimizer parameters for the run, with defaults filled in.
OptimizerParams resolve_optimizer(const OptimizerSpec& spec, std::uint64_t steps);

/// Throws ConfigError describing the first violated constraint.
void validate(const ExperimentConfig& config);

/// JSON text -> config. Unknown keys and names are ConfigErrors.
ExperimentConfig parse_config(std::string_view text);

/// Canonical JSON (2-space indent, fixed key order, trailing newline).
std::string serialize_config(const ExperimentConfig& config);

ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace coolmom::bench
