#include "coolmom/bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <thread>

#include "coolmom/bench/csv.hpp"
#include "coolmom/dataset.hpp"
#include "coolmom/errors.hpp"
#include "coolmom/format.hpp"
#include "coolmom/mlp.hpp"
#include "coolmom/thermometry.hpp"

namespace coolmom::bench {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::shared_ptr<const Objective> analytic_base(const ObjectiveSpec& spec) {
    if (spec.name == "quadratic") return std::make_shared<const Quadratic>(spec.stiffness);
    if (spec.name == "double_well") return std::make_shared<const DoubleWell>();
    if (spec.name == "rosenbrock") return std::make_shared<const Rosenbrock>(spec.dim);
    if (spec.name == "rastrigin") return std::make_shared<const Rastrigin>(spec.dim);
    if (spec.name == "flat") return std::make_shared<const Flat>(spec.dim);
    throw ConfigError("unknown objective '" + spec.name + "'");
}

std::string basin_label(const std::optional<bool>& b) {
    if (!b) return "unknown";
    return *b ? "global" : "other";
}

std::string run_prefix(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

std::optional<BasinOracle> basin_oracle(const ObjectiveSpec& spec) {
    if (spec.name == "double_well") {
        const double barrier = double_well_geometry().barrier;
        return BasinOracle([barrier](std::span<const double> x) { return x[0] < barrier; });
    }
    if (spec.name == "rastrigin") {
        const double radius = Rastrigin::origin_basin_radius();
        return BasinOracle([radius](std::span<const double> x) {
            return std::all_of(x.begin(), x.end(), [radius](double v) { return std::abs(v) < radius; });
        });
    }
    // Convex or single-minimum landscapes: every point drains to the global minimum.
    if (spec.name == "quadratic" || spec.name == "flat" ||
        (spec.name == "rosenbrock" && spec.dim == 2)) {
        return BasinOracle([](std::span<const double>) { return true; });
    }
    return std::nullopt;
}

ObjectiveInstance make_objective(const ObjectiveSpec& spec, std::uint64_t seed) {
    ObjectiveInstance inst;
    inst.oracle = basin_oracle(spec);
    if (spec.name == "mlp") {
        const MlpSpec m = spec.mlp.value_or(MlpSpec{});
        TeacherSpec teacher{m.layers, m.examples, m.task, m.label_noise};
        auto data = std::make_shared<const SyntheticDataset>(make_teacher_dataset(teacher, m.data_seed));
        auto arch = std::make_shared<const MlpArchitecture>(m.layers, m.task);
        NoiseSource init(derive_seed(seed, 1));
        inst.x0 = arch->initial_parameters(init, m.init_scale);
        inst.objective = std::make_unique<MlpObjective>(arch, data, m.batch_size, seed);
        return inst;
    }
    inst.objective =
        std::make_unique<GaussianNoiseObjective>(analytic_base(spec), spec.noise_sigma, seed);
    inst.x0 = spec.x0;
    return inst;
}

bool ExperimentResult::any_failed() const {
    return std::any_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.failed; });
}

RunResult run_seed(const ExperimentConfig& config, std::uint64_t seed) {
    RunResult result;
    result.seed = seed;
    try {
        ObjectiveInstance inst = make_objective(config.objective, seed);
        const Objective& exact = inst.objective->exact();
        const OptimizerParams params = resolve_optimizer(config.optimizer, config.steps);
        const std::uint64_t spe = config.steps_per_epoch;

        std::vector<StepRecord> partial;
        double loss_sum = 0.0;
        Vector x_sum(inst.x0.size(), 0.0);
        std::uint64_t count = 0;

        RunOptions options;
        options.observer = [&](const StepView& view) {
            partial.push_back(view.record);
            loss_sum += view.record.loss;
            for (std::size_t i = 0; i < x_sum.size(); ++i) x_sum[i] += view.x[i];
            ++count;
            const std::uint64_t done = view.record.step + 1;
            if (done % spe != 0 && done != config.steps) return;

            EpochRecord e;
            e.epoch = (done + spe - 1) / spe;
            e.partial = done % spe != 0;
            e.mean_loss = loss_sum / static_cast<double>(count);
            e.final_loss = exact.value(view.x);
            Vector avg = x_sum;
            for (double& a : avg) a /= static_cast<double>(count);
            e.pr_loss = exact.value(avg);
            result.epochs.push_back(e);
            result.averaged_x = std::move(avg);

            loss_sum = 0.0;
            std::fill(x_sum.begin(), x_sum.end(), 0.0);
            count = 0;
        };

        try {
            result.log = run_optimizer(*inst.objective, inst.x0, params, config.steps, seed, options);
        } catch (const std::exception& e) {
            // Keep what was recorded before the failure.
            result.failed = true;
            result.failure = e.what();
            result.log.optimizer = optimizer_name(params);
            result.log.seed = seed;
            result.log.dimension = inst.x0.size();
            result.log.dt = effective_dt(params);
            result.log.steps = std::move(partial);
        }
        partial = {};

        const auto series = epoch_temperature_series(result.log, spe);
        for (std::size_t k = 0; k < result.epochs.size(); ++k) {
            result.epochs[k].temperature = series[k].temperature;
            result.epochs[k].rescaled_temperature = series[k].rescaled;
        }
        if (result.failed) return result;
        if (!series.empty() && series.back().partial) {
            result.log.notes.push_back("trailing partial epoch " + std::to_string(series.size()) +
                                       " has " +
                                       std::to_string(series.back().end - series.back().begin) +
                                       " of " + std::to_string(spe) + " steps");
        }
        if (inst.oracle) {
            result.basin_final = (*inst.oracle)(result.log.final_x);
            result.basin_averaged = (*inst.oracle)(result.averaged_x);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        result = RunResult{};
        result.seed = seed;
        result.failed = true;
        result.failure = e.what();
    }
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned jobs) {
    validate(config);
    ExperimentResult out;
    out.config = config;
    out.runs.resize(config.seeds.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= config.seeds.size()) return;
            out.runs[i] = run_seed(config, config.seeds[i]);
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(jobs, 1, config.seeds.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    return out;
}

void write_experiment(const ExperimentResult& result, const fs::path& dir) {
    fs::create_directories(dir);
    const ExperimentConfig& config = result.config;
    const std::string optimizer = optimizer_name(resolve_optimizer(config.optimizer, config.steps));

    open_output(dir / "config.json") << serialize_config(config);

    auto summary = open_output(dir / "summary.csv");
    write_csv_row(summary, {"seed", "optimizer", "objective", "status", "final_loss", "pr_loss",
                            "final_temperature", "final_rescaled_temperature", "basin_final",
                            "basin_averaged"});
    auto manifest = open_output(dir / "manifest.txt");

    for (const RunResult& run : result.runs) {
        const std::string prefix = run_prefix(run.seed);
        for (const char* suffix : {".steps.csv", ".epochs.csv", ".params.csv"}) {
            fs::remove(dir / (prefix + suffix));
        }

        if (run.failed) {
            manifest << "seed " << run.seed << ": failed: " << run.failure << '\n';
            write_csv_row(summary, {std::to_string(run.seed), optimizer, config.objective.name,
                                    "failed", "nan", "nan", "nan", "nan", "unknown", "unknown"});
        }
        for (const auto& note : run.log.notes) {
            manifest << "seed " << run.seed << ": note: " << note << '\n';
        }

        if (config.granularity == LogGranularity::per_step) {
            auto steps = open_output(dir / (prefix + ".steps.csv"));
            write_csv_row(steps, {"step", "rho", "lr", "loss", "dx_sq_norm"});
            for (const StepRecord& s : run.log.steps) {
                write_csv_row(steps, {std::to_string(s.step), format_double(s.rho),
                                      format_double(s.lr), format_double(s.loss),
                                      format_double(s.dx_sq_norm)});
            }
        }

        auto epochs = open_output(dir / (prefix + ".epochs.csv"));
        write_csv_row(epochs, {"epoch", "mean_loss", "final_loss", "pr_loss", "temperature",
                               "rescaled_temperature"});
        for (const EpochRecord& e : run.epochs) {
            write_csv_row(epochs, {std::to_string(e.epoch), format_double(e.mean_loss),
                                   format_double(e.final_loss), format_double(e.pr_loss),
                                   format_double(e.temperature),
                                   format_double(e.rescaled_temperature)});
        }

        if (run.failed) continue;

        auto params = open_output(dir / (prefix + ".params.csv"));
        write_csv_row(params, {"index", "final", "averaged"});
        for (std::size_t i = 0; i < run.log.final_x.size(); ++i) {
            write_csv_row(params, {std::to_string(i), format_double(run.log.final_x[i]),
                                   format_double(run.averaged_x[i])});
        }

        const EpochRecord& last = run.epochs.back();
        write_csv_row(summary, {std::to_string(run.seed), optimizer, config.objective.name, "ok",
                                format_double(last.final_loss), format_double(last.pr_loss),
                                format_double(last.temperature),
                                format_double(last.rescaled_temperature),
                                basin_label(run.basin_final), basin_label(run.basin_averaged)});
    }
}

RunDigest digest(const ExperimentConfig& config, const RunResult& run) {
    RunDigest d;
    d.optimizer = optimizer_name(resolve_optimizer(config.optimizer, config.steps));
    d.objective = config.objective.name;
    d.seed = run.seed;
    d.failed = run.failed;
    if (run.failed) return d;
    d.final_x = run.log.final_x;
    d.averaged_x = run.averaged_x;
    d.final_loss = run.epochs.back().final_loss;
    d.final_temperature = run.epochs.back().temperature;
    d.final_rescaled_temperature = run.epochs.back().rescaled_temperature;
    return d;
}

std::vector<SummaryRow> summarize(std::span<const RunDigest> runs,
                                  const std::optional<BasinOracle>& oracle) {
    require(!runs.empty(), "summarize: empty run set");

    std::vector<SummaryRow> rows;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    struct Tally {
        std::size_t ok = 0, hit_final = 0, hit_averaged = 0;
        double loss_sum = 0.0, temp_sum = 0.0;
        double loss_min = std::numeric_limits<double>::infinity();
    };
    std::vector<Tally> tallies;

    for (const RunDigest& r : runs) {
        const auto key = std::make_pair(r.optimizer, r.objective);
        auto [it, inserted] = index.try_emplace(key, rows.size());
        if (inserted) {
            SummaryRow row;
            row.optimizer = r.optimizer;
            row.objective = r.objective;
            row.classified = oracle.has_value();
            rows.push_back(row);
            tallies.emplace_back();
        }
        SummaryRow& row = rows[it->second];
        Tally& t = tallies[it->second];
        ++row.runs;
        if (r.failed) {
            ++row.failed;
            continue;
        }
        ++t.ok;
        t.loss_sum += r.final_loss;
        t.loss_min = std::min(t.loss_min, r.final_loss);
        t.temp_sum += r.final_temperature;
        if (oracle) {
            t.hit_final += (*oracle)(r.final_x) ? 1 : 0;
            t.hit_averaged += (*oracle)(r.averaged_x) ? 1 : 0;
        }
    }

    for (std::size_t k = 0; k < rows.size(); ++k) {
        SummaryRow& row = rows[k];
        const Tally& t = tallies[k];
        const double n = static_cast<double>(row.runs);
        row.success_rate_final = oracle ? static_cast<double>(t.hit_final) / n : kNaN;
        row.success_rate_averaged = oracle ? static_cast<double>(t.hit_averaged) / n : kNaN;
        row.mean_final_loss = t.ok ? t.loss_sum / static_cast<double>(t.ok) : kNaN;
        row.min_final_loss = t.ok ? t.loss_min : kNaN;
        row.mean_final_temperature = t.ok ? t.temp_sum / static_cast<double>(t.ok) : kNaN;
    }
    return rows;
}

namespace {

std::vector<RunDigest> load_digests(const fs::path& dir, const ExperimentConfig& config) {
    std::ifstream in(dir / "summary.csv");
    if (!in) throw std::runtime_error("missing " + (dir / "summary.csv").string());
    const CsvTable table = read_csv(in);
    const std::size_t c_seed = table.column("seed");
    const std::size_t c_opt = table.column("optimizer");
    const std::size_t c_status = table.column("status");
    const std::size_t c_loss = table.column("final_loss");
    const std::size_t c_temp = table.column("final_temperature");
    const std::size_t c_rescaled = table.column("final_rescaled_temperature");

    std::vector<RunDigest> out;
    for (const auto& row : table.rows) {
        RunDigest d;
        d.optimizer = row[c_opt];
        d.objective = config.objective.name;
        d.seed = std::stoull(row[c_seed]);
        d.failed = row[c_status] != "ok";
        if (!d.failed) {
            d.final_loss = parse_double(row[c_loss]);
            d.final_temperature = parse_double(row[c_temp]);
            d.final_rescaled_temperature = parse_double(row[c_rescaled]);
            const fs::path params_path = dir / (run_prefix(d.seed) + ".params.csv");
            std::ifstream params_in(params_path);
            if (!params_in) throw std::runtime_error("missing " + params_path.string());
            const CsvTable params = read_csv(params_in);
            const std::size_t c_final = params.column("final");
            const std::size_t c_avg = params.column("averaged");
            for (const auto& p : params.rows) {
                d.final_x.push_back(parse_double(p[c_final]));
                d.averaged_x.push_back(parse_double(p[c_avg]));
            }
        }
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace

std::vector<SummaryRow> summarize_directory(const fs::path& dir) {
    std::vector<fs::path> experiments;
    if (fs::exists(dir / "config.json")) {
        experiments.push_back(dir);
    } else if (fs::is_directory(dir)) {
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_directory() && fs::exists(entry.path() / "config.json")) {
                experiments.push_back(entry.path());
            }
        }
        std::sort(experiments.begin(), experiments.end());
    }
    if (experiments.empty()) {
        throw std::runtime_error("no experiment outputs (config.json) under " + dir.string());
    }

    std::vector<SummaryRow> rows;
    for (const fs::path& exp : experiments) {
        const ExperimentConfig config = load_config(exp / "config.json");
        const auto digests = load_digests(exp, config);
        const auto part = summarize(digests, basin_oracle(config.objective));
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

void write_summary(std::ostream& out, std::span<const SummaryRow> rows) {
    write_csv_row(out, {"optimizer", "objective", "runs", "failed", "success_rate_final",
                        "success_rate_averaged", "mean_final_loss", "min_final_loss",
                        "mean_final_temperature", "basin_oracle"});
    for (const SummaryRow& r : rows) {
        write_csv_row(out, {r.optimizer, r.objective, std::to_string(r.runs),
                            std::to_string(r.failed), format_double(r.success_rate_final),
                            format_double(r.success_rate_averaged),
                            format_double(r.mean_final_loss), format_double(r.min_final_loss),
                            format_double(r.mean_final_temperature),
                            r.classified ? "yes" : "no"});
    }
}

}  // namespace coolmom::bench
