#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coolmom/bench/config.hpp"
#include "coolmom/objectives.hpp"
#include "coolmom/run.hpp"

namespace coolmom::bench {

/// A ready-to-run objective for one seed.
struct ObjectiveInstance {
    std::unique_ptr<StochasticObjective> objective;
    Vector x0;
    std::optional<BasinOracle> oracle;  ///< absent when the global basin is unknown
};

/// Builds the objective described by `spec`. For the MLP the initial
/// weights are drawn from a stream derived from `seed`.
ObjectiveInstance make_objective(const ObjectiveSpec& spec, std::uint64_t seed);

/// Basin oracle for the objective, independent of any seed.
std::optional<BasinOracle> basin_oracle(const ObjectiveSpec& spec);

struct EpochRecord {
    std::uint64_t epoch = 0;
    double mean_loss = 0.0;   ///< mean of the per-step loss estimates
    double final_loss = 0.0;  ///< exact loss at the last iterate of the epoch
    double pr_loss = 0.0;     ///< exact loss at the epoch's Polyak-Ruppert average
    double temperature = 0.0;
    double rescaled_temperature = 0.0;
    bool partial = false;
};

struct RunResult {
    std::uint64_t seed = 0;
    bool failed = false;
    std::string failure;
    RunLog log;
    std::vector<EpochRecord> epochs;
    Vector averaged_x;  ///< Polyak-Ruppert average over the last epoch
    std::optional<bool> basin_final;
    std::optional<bool> basin_averaged;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<RunResult> runs;  ///< in config.seeds order

    bool any_failed() const;
};

/// One seed of an experiment. Non-finite trajectories are reported as a
/// failed result, not thrown; the log keeps the steps completed before the
/// failure.
RunResult run_seed(const ExperimentConfig& config, std::uint64_t seed);

/// Runs every seed, using up to `jobs` threads. Output does not depend on
/// `jobs`.
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned jobs = 1);

/// Writes config.json, seed_<s>.steps.csv (per-step granularity only),
/// seed_<s>.epochs.csv, seed_<s>.params.csv, summary.csv and manifest.txt.
/// A failed seed keeps the steps and complete epochs recorded before the
/// failure but gets no params file.
void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir);

/// Per-run digest used for aggregation.
struct RunDigest {
    std::string optimizer;
    std::string objective;
    std::uint64_t seed = 0;
    bool failed = false;
    Vector final_x;
    Vector averaged_x;
    double final_loss = 0.0;
    double final_temperature = 0.0;
    double final_rescaled_temperature = 0.0;
};

RunDigest digest(const ExperimentConfig& config, const RunResult& run);

struct SummaryRow {
    std::string optimizer;
    std::string objective;
    std::size_t runs = 0;
    std::size_t failed = 0;
    double success_rate_final = 0.0;     ///< NaN without an oracle
    double success_rate_averaged = 0.0;  ///< NaN without an oracle
    double mean_final_loss = 0.0;
    double min_final_loss = 0.0;
    double mean_final_temperature = 0.0;
    bool classified = false;
};

/// Groups runs by (optimizer, objective) in first-seen order. Success means
/// the final (resp. averaged) parameters lie in the global basin. Failed
/// runs count against the success rate and are excluded from loss and
/// temperature means. Rejects an empty run set.
std::vector<SummaryRow> summarize(std::span<const RunDigest> runs,
                                  const std::optional<BasinOracle>& oracle);

/// Reloads the digests written by write_experiment from `dir`, or from
/// each immediate subdirectory holding a config.json, and summarizes them.
std::vector<SummaryRow> summarize_directory(const std::filesystem::path& dir);

void write_summary(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace coolmom::bench
