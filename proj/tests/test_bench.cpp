#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "coolmom/bench/config.hpp"
#include "coolmom/bench/csv.hpp"
#include "coolmom/bench/experiment.hpp"
#include "coolmom/errors.hpp"
#include "coolmom/objectives.hpp"
#include "coolmom/schedule.hpp"
#include "doctest.h"

using namespace coolmom;
using namespace coolmom::bench;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("coolmom_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

const fs::path kGolden = COOLMOM_GOLDEN_DIR;

ExperimentConfig double_well_config() {
    ExperimentConfig c;
    c.name = "dw";
    c.objective.name = "double_well";
    c.objective.noise_sigma = 0.5;
    c.objective.x0 = {0.96};
    c.optimizer = CoolMomentumSpec{0.1, 0.99, std::nullopt};
    c.steps = 2000;
    c.steps_per_epoch = 500;
    c.seeds = {3, 1, 2};
    return c;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(COOLMOM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config serialization is idempotent") {
    const auto text = slurp(kGolden / "tiny.json");
    const auto c = parse_config(text);
    const auto once = serialize_config(c);
    CHECK(serialize_config(parse_config(once)) == once);

    ExperimentConfig mlp;
    mlp.objective.name = "mlp";
    mlp.objective.mlp = MlpSpec{};
    mlp.optimizer = AdamConfig{};
    mlp.granularity = LogGranularity::per_epoch;
    const auto m = serialize_config(mlp);
    CHECK(serialize_config(parse_config(m)) == m);
}

TEST_CASE("config errors") {
    const auto base = slurp(kGolden / "tiny.json");
    auto replace = [&](const std::string& from, const std::string& to) {
        auto s = base;
        const auto at = s.find(from);
        REQUIRE(at != std::string::npos);
        return s.replace(at, from.size(), to);
    };
    try {
        parse_config(replace("\"coolmomentum\"", "\"lbfgs\""));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("coolmomentum") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(replace("\"quadratic\"", "\"ackley\"")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace("\"steps\": 6", "\"steps\": 6, \"extra\": 1")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace("\"rho0\": 0.9", "\"rho0\": 1.0")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace("\"steps\": 6", "\"steps\": 0")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace("\"per-step\"", "\"hourly\"")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace("[1.0, -1.0]", "[1.0]")), ConfigError);
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
}

TEST_CASE("written outputs match the golden files") {
    auto c = parse_config(slurp(kGolden / "tiny.json"));
    const auto dir = scratch("golden");
    write_experiment(run_experiment(c), dir);
    for (const char* f : {"seed_1.steps.csv", "seed_1.epochs.csv", "seed_1.params.csv",
                          "summary.csv", "manifest.txt"}) {
        CAPTURE(f);
        CHECK(slurp(dir / f) == slurp(kGolden / (std::string("tiny.") + f)));
    }
}

TEST_CASE("outputs are deterministic and independent of job count and seed order") {
    auto c = double_well_config();
    const auto a = scratch("det_a"), b = scratch("det_b"), solo = scratch("det_solo");
    write_experiment(run_experiment(c, 1), a);
    write_experiment(run_experiment(c, 3), b);
    for (const auto& e : fs::directory_iterator(a)) {
        if (e.path().filename() == "config.json") continue;
        CAPTURE(e.path().filename().string());
        CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    }
    c.seeds = {2};
    write_experiment(run_experiment(c), solo);
    CHECK(slurp(solo / "seed_2.steps.csv") == slurp(a / "seed_2.steps.csv"));
    CHECK(slurp(a / "seed_1.steps.csv") != slurp(a / "seed_2.steps.csv"));
}

TEST_CASE("logged momentum follows the cooling schedule") {
    const auto c = double_well_config();
    const auto r = run_seed(c, 5);
    REQUIRE_FALSE(r.failed);
    const double alpha = cooling_rate(0.99, c.steps);
    for (const auto& s : r.log.steps) CHECK(s.rho == cooling_rho(s.step, 0.99, alpha));
    CHECK(r.epochs.size() == 4);
    CHECK(r.epochs.front().epoch == 1);
}

TEST_CASE("zero-force experiment stays put") {
    ExperimentConfig c;
    c.objective.name = "flat";
    c.objective.dim = 3;
    c.objective.x0 = {1.0, 2.0, 3.0};
    c.steps = 100;
    c.steps_per_epoch = 10;
    const auto r = run_seed(c, 1);
    CHECK(r.log.final_x == c.objective.x0);
    for (const auto& e : r.epochs) CHECK(e.temperature == 0.0);
}

TEST_CASE("summaries") {
    const auto oracle = basin_oracle(double_well_config().objective);
    REQUIRE(oracle);
    CHECK((*oracle)(Vector{-1.0}));
    CHECK_FALSE((*oracle)(Vector{0.96}));
    CHECK_THROWS_AS(summarize({}, oracle), InvalidInput);

    std::vector<RunDigest> runs(3);
    for (auto& d : runs) {
        d.optimizer = "coolmomentum";
        d.objective = "double_well";
    }
    runs[0].final_x = runs[0].averaged_x = {-1.0};
    runs[1].final_x = runs[1].averaged_x = {0.96};
    runs[2].failed = true;
    runs[0].final_loss = 1.0;
    runs[1].final_loss = 3.0;
    const auto rows = summarize(runs, oracle);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].runs == 3);
    CHECK(rows[0].failed == 1);
    CHECK(rows[0].success_rate_final == doctest::Approx(1.0 / 3));
    CHECK(rows[0].mean_final_loss == 2.0);
    CHECK(rows[0].min_final_loss == 1.0);

    const auto none = summarize(runs, std::nullopt);
    CHECK(std::isnan(none[0].success_rate_final));
    CHECK_FALSE(none[0].classified);

    ObjectiveSpec rb;
    rb.name = "rosenbrock";
    rb.dim = 5;
    CHECK_FALSE(basin_oracle(rb).has_value());
}

TEST_CASE("summarize a written directory") {
    auto c = double_well_config();
    const auto dir = scratch("summ");
    write_experiment(run_experiment(c), dir);
    const auto rows = summarize_directory(dir);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].runs == 3);
    std::ostringstream out;
    write_summary(out, rows);
    std::istringstream in(out.str());
    const auto table = read_csv(in);
    CHECK(table.header.front() == "optimizer");
    CHECK(table.rows.size() == 1);
    CHECK_THROWS(summarize_directory(scratch("empty")));
}

TEST_CASE("csv reader") {
    std::istringstream ok("a,b\n1,2\n3,4\n");
    const auto t = read_csv(ok);
    CHECK(t.column("b") == 1);
    CHECK(t.rows.size() == 2);
    std::istringstream ragged("a,b\n1\n");
    CHECK_THROWS(read_csv(ragged));
}

TEST_CASE("command-line exit codes") {
    const auto dir = scratch("cli");
    const auto cfg = (kGolden / "tiny.json").string();
    CHECK(cli("run " + cfg + " --out " + (dir / "a").string()) == 0);
    CHECK(cli("run " + cfg + " --out " + (dir / "b").string() + " --seed-override 4 5 --jobs 2") == 0);
    CHECK(fs::exists(dir / "b" / "seed_5.epochs.csv"));
    CHECK(cli("summarize " + (dir / "a").string()) == 0);
    CHECK(cli("schedule 0.99 100 --dt 0.1 --every 7") == 0);
    CHECK(cli("") == 1);
    CHECK(cli("bogus") == 1);
    CHECK(cli("run /nonexistent.json") == 2);
    CHECK(cli("schedule 1.5 100") == 2);

    std::ofstream(dir / "bad.json") << "{\"name\": 3}";
    CHECK(cli("run " + (dir / "bad.json").string()) == 2);

    // A diverging run fails its seed without crashing.
    auto c = parse_config(slurp(kGolden / "tiny.json"));
    c.optimizer = SgdParams{1e3};
    c.steps = 400;
    std::ofstream(dir / "diverge.json") << serialize_config(c);
    CHECK(cli("run " + (dir / "diverge.json").string() + " --out " + (dir / "d").string()) == 3);
    CHECK(slurp(dir / "d" / "manifest.txt").find("failed") != std::string::npos);
    CHECK(fs::exists(dir / "d" / "seed_1.steps.csv"));
    CHECK_FALSE(fs::exists(dir / "d" / "seed_1.params.csv"));
}

TEST_CASE("a failing seed keeps its partial log and spares the others") {
    ExperimentConfig c;
    c.objective.name = "quadratic";
    c.objective.stiffness = {1.0};
    c.objective.x0 = {1.0};
    c.objective.noise_sigma = 1.0;
    c.optimizer = SgdParams{2.5};  // |1 - lr k| > 1: diverges
    c.steps = 2000;
    c.steps_per_epoch = 100;
    c.seeds = {1, 2};
    const auto r = run_seed(c, 1);
    REQUIRE(r.failed);
    CHECK(r.failure.find("non-finite") != std::string::npos);
    CHECK_FALSE(r.log.steps.empty());
    CHECK(r.log.steps.size() < 2000);
    CHECK(r.epochs.size() == r.log.steps.size() / 100);

    c.optimizer = SgdParams{0.1};
    const auto ok = run_experiment(c, 2);
    CHECK_FALSE(ok.any_failed());
}

TEST_CASE("epoch temperatures are recomputable from the step log") {
    auto c = double_well_config();
    c.seeds = {4};
    const auto dir = scratch("recompute");
    write_experiment(run_experiment(c), dir);
    std::ifstream steps_in(dir / "seed_4.steps.csv"), epochs_in(dir / "seed_4.epochs.csv");
    const auto steps = read_csv(steps_in);
    const auto epochs = read_csv(epochs_in);
    const auto dx = steps.column("dx_sq_norm");
    const auto rt = epochs.column("rescaled_temperature");
    const auto t = epochs.column("temperature");
    const double dt = 0.1;
    REQUIRE(epochs.rows.size() == 4);
    for (std::size_t e = 0; e < 4; ++e) {
        double sum = 0.0;
        for (std::size_t n = e * 500; n < (e + 1) * 500; ++n) sum += std::stod(steps.rows[n][dx]);
        const double rescaled = sum / 500.0;
        CHECK(std::abs(std::stod(epochs.rows[e][rt]) - rescaled) <= 1e-12 * rescaled);
        CHECK(std::abs(std::stod(epochs.rows[e][t]) - rescaled / (dt * dt)) <= 1e-12 * rescaled / (dt * dt));
    }
}
