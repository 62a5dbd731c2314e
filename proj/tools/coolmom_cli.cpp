// coolmom: run optimizer experiments, summarize their outputs and print
// momentum cooling schedules.
//
// Exit codes: 0 success, 1 usage error, 2 configuration error,
// 3 runtime failure (one or more seeds failed, or an I/O error).

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coolmom/bench/config.hpp"
#include "coolmom/bench/experiment.hpp"
#include "coolmom/errors.hpp"
#include "coolmom/format.hpp"
#include "coolmom/schedule.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kRuntime = 3 };

int run_command(const std::string& config_path, const std::vector<std::uint64_t>& seeds,
                const std::string& out_dir, unsigned jobs) {
    using namespace coolmom::bench;
    ExperimentConfig config = load_config(config_path);
    if (!seeds.empty()) {
        config.seeds = seeds;
        validate(config);
    }
    if (!out_dir.empty()) config.output_dir = out_dir;

    const ExperimentResult result = run_experiment(config, jobs);
    write_experiment(result, config.output_dir);

    std::size_t failed = 0;
    for (const auto& r : result.runs) {
        if (r.failed) {
            ++failed;
            std::cerr << "seed " << r.seed << " failed: " << r.failure << '\n';
        }
    }
    std::cout << config.name << ": " << result.runs.size() - failed << "/" << result.runs.size()
              << " runs ok, outputs in " << config.output_dir << '\n';
    return failed ? kRuntime : kOk;
}

int schedule_command(double rho0, std::uint64_t steps, std::optional<double> dt,
                     std::uint64_t every) {
    const double alpha = coolmom::cooling_rate(rho0, steps);
    std::cout << "# alpha = " << coolmom::format_double(alpha) << '\n';
    std::cout << (dt ? "step,rho,lr\n" : "step,rho\n");
    for (std::uint64_t n = 0;; n += every) {
        if (n > steps) n = steps;  // always end on the last step
        const double rho = coolmom::cooling_rho(n, rho0, alpha);
        std::cout << n << ',' << coolmom::format_double(rho);
        if (dt) std::cout << ',' << coolmom::format_double(coolmom::lr_from_rho(rho, *dt));
        std::cout << '\n';
        if (n == steps) break;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CoolMomentum optimizer benchmark"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::uint64_t> seed_override;
    std::string out_dir;
    unsigned jobs = 1;
    auto* run = app.add_subcommand("run", "Run an experiment config, one job per seed");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--seed-override", seed_override, "Replace the config's seed list");
    run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    run->add_option("--jobs", jobs, "Seeds to run concurrently")->check(CLI::PositiveNumber);

    std::string summary_dir;
    auto* summarize = app.add_subcommand("summarize", "Aggregate run outputs per optimizer");
    summarize->add_option("dir", summary_dir, "Experiment output directory")->required();

    double rho0 = 0.99;
    std::uint64_t steps = 100;
    std::optional<double> dt;
    std::uint64_t every = 1;
    auto* schedule = app.add_subcommand("schedule", "Print the momentum cooling schedule");
    schedule->add_option("rho0", rho0, "Initial momentum coefficient in [0, 1)")->required();
    schedule->add_option("S", steps, "Total number of steps")->required();
    schedule->add_option("--dt", dt, "Time step; adds the learning-rate column");
    schedule->add_option("--every", every, "Print every k-th step")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run) return run_command(config_path, seed_override, out_dir, jobs);
        if (*summarize) {
            const auto rows = coolmom::bench::summarize_directory(summary_dir);
            coolmom::bench::write_summary(std::cout, rows);
            return kOk;
        }
        if (*schedule) return schedule_command(rho0, steps, dt, every);
    } catch (const coolmom::bench::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const coolmom::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kUsage;
}
