#include "coolmom/bench/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "coolmom/schedule.hpp"
#include "json.hpp"

namespace coolmom::bench {

using nlohmann::ordered_json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
    return out;
}

void check_keys(const ordered_json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key())) {
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

template <class T>
T get(const ordered_json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("key '" + key + "' in " + where + " has the wrong type");
    }
}

template <class T>
T get_or(const ordered_json& obj, const std::string& key, const std::string& where, T fallback) {
    return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

std::string task_name(Task t) { return t == Task::regression ? "regression" : "classification"; }

Task parse_task(const std::string& s) {
    if (s == "regression") return Task::regression;
    if (s == "classification") return Task::classification;
    throw ConfigError("unknown mlp task '" + s + "'; valid tasks: regression, classification");
}

std::string granularity_name(LogGranularity g) {
    return g == LogGranularity::per_step ? "per-step" : "per-epoch";
}

LogGranularity parse_granularity(const std::string& s) {
    if (s == "per-step") return LogGranularity::per_step;
    if (s == "per-epoch") return LogGranularity::per_epoch;
    throw ConfigError("unknown log_granularity '" + s + "'; valid values: per-step, per-epoch");
}

ObjectiveSpec parse_objective(const ordered_json& j) {
    const std::string where = "objective";
    ObjectiveSpec spec;
    spec.name = get<std::string>(j, "name", where);
    const auto& names = objective_names();
    if (std::find(names.begin(), names.end(), spec.name) == names.end()) {
        throw ConfigError("unknown objective '" + spec.name + "'; valid objectives: " + join(names));
    }

    if (spec.name == "mlp") {
        check_keys(j, where, {"name", "layers", "task", "examples", "batch_size", "label_noise",
                              "data_seed", "init_scale"});
        MlpSpec m;
        m.layers = get<std::vector<std::size_t>>(j, "layers", where);
        m.task = parse_task(get_or<std::string>(j, "task", where, "regression"));
        m.examples = get_or<std::size_t>(j, "examples", where, m.examples);
        m.batch_size = get_or<std::size_t>(j, "batch_size", where, m.batch_size);
        m.label_noise = get_or<double>(j, "label_noise", where, m.label_noise);
        m.data_seed = get_or<std::uint64_t>(j, "data_seed", where, m.data_seed);
        m.init_scale = get_or<double>(j, "init_scale", where, m.init_scale);
        spec.mlp = m;
        return spec;
    }

    std::set<std::string> allowed{"name", "noise_sigma", "x0"};
    if (spec.name == "quadratic") allowed.insert("stiffness");
    if (spec.name == "rosenbrock" || spec.name == "rastrigin" || spec.name == "flat") {
        allowed.insert("dim");
    }
    check_keys(j, where, allowed);
    spec.noise_sigma = get_or<double>(j, "noise_sigma", where, 0.0);
    spec.x0 = get<Vector>(j, "x0", where);
    if (spec.name == "quadratic") spec.stiffness = get<Vector>(j, "stiffness", where);
    if (allowed.contains("dim")) spec.dim = get<std::size_t>(j, "dim", where);
    return spec;
}

ordered_json dump_objective(const ObjectiveSpec& spec) {
    ordered_json j;
    j["name"] = spec.name;
    if (spec.name == "mlp") {
        const MlpSpec m = spec.mlp.value_or(MlpSpec{});
        j["layers"] = m.layers;
        j["task"] = task_name(m.task);
        j["examples"] = m.examples;
        j["batch_size"] = m.batch_size;
        j["label_noise"] = m.label_noise;
        j["data_seed"] = m.data_seed;
        j["init_scale"] = m.init_scale;
        return j;
    }
    if (spec.name == "quadratic") j["stiffness"] = spec.stiffness;
    if (spec.name == "rosenbrock" || spec.name == "rastrigin" || spec.name == "flat") {
        j["dim"] = spec.dim;
    }
    j["noise_sigma"] = spec.noise_sigma;
    j["x0"] = spec.x0;
    return j;
}

OptimizerSpec parse_optimizer(const ordered_json& j) {
    const std::string where = "optimizer";
    const auto name = get<std::string>(j, "name", where);
    if (name == "sgd") {
        check_keys(j, where, {"name", "lr"});
        return SgdParams{get<double>(j, "lr", where)};
    }
    if (name == "momentum") {
        check_keys(j, where, {"name", "rho", "lr"});
        return MomentumParams{get<double>(j, "rho", where), get<double>(j, "lr", where)};
    }
    if (name == "adam") {
        check_keys(j, where, {"name", "lr", "beta1", "beta2", "epsilon"});
        AdamConfig c;
        c.lr = get_or<double>(j, "lr", where, c.lr);
        c.beta1 = get_or<double>(j, "beta1", where, c.beta1);
        c.beta2 = get_or<double>(j, "beta2", where, c.beta2);
        c.epsilon = get_or<double>(j, "epsilon", where, c.epsilon);
        return c;
    }
    if (name == "coolmomentum") {
        check_keys(j, where, {"name", "dt", "rho0", "alpha"});
        CoolMomentumSpec c;
        c.dt = get<double>(j, "dt", where);
        c.rho0 = get_or<double>(j, "rho0", where, c.rho0);
        if (j.contains("alpha")) c.alpha = get<double>(j, "alpha", where);
        return c;
    }
    throw ConfigError("unknown optimizer '" + name + "'; valid optimizers: " +
                      join(optimizer_names()));
}

ordered_json dump_optimizer(const OptimizerSpec& spec) {
    return std::visit(Overloaded{
                          [](const SgdParams& p) {
                              return ordered_json{{"name", "sgd"}, {"lr", p.lr}};
                          },
                          [](const MomentumParams& p) {
                              return ordered_json{{"name", "momentum"}, {"rho", p.rho}, {"lr", p.lr}};
                          },
                          [](const AdamConfig& c) {
                              return ordered_json{{"name", "adam"},
                                                  {"lr", c.lr},
                                                  {"beta1", c.beta1},
                                                  {"beta2", c.beta2},
                                                  {"epsilon", c.epsilon}};
                          },
                          [](const CoolMomentumSpec& c) {
                              ordered_json j{{"name", "coolmomentum"}, {"dt", c.dt}, {"rho0", c.rho0}};
                              if (c.alpha) j["alpha"] = *c.alpha;
                              return j;
                          },
                      },
                      spec);
}

}  // namespace

const std::vector<std::string>& objective_names() {
    static const std::vector<std::string> names{"quadratic", "double_well", "rosenbrock",
                                                "rastrigin", "flat",        "mlp"};
    return names;
}

const std::vector<std::string>& optimizer_names() {
    static const std::vector<std::string> names{"sgd", "momentum", "adam", "coolmomentum"};
    return names;
}

OptimizerParams resolve_optimizer(const OptimizerSpec& spec, std::uint64_t steps) {
    return std::visit(Overloaded{
                          [](const SgdParams& p) -> OptimizerParams { return p; },
                          [](const MomentumParams& p) -> OptimizerParams { return p; },
                          [](const AdamConfig& c) -> OptimizerParams { return c; },
                          [steps](const CoolMomentumSpec& c) -> OptimizerParams {
                              CoolMomentumConfig out{c.dt, c.rho0, 1.0, steps};
                              out.alpha = c.alpha ? *c.alpha : cooling_rate(c.rho0, steps);
                              return out;
                          },
                      },
                      spec);
}

void validate(const ExperimentConfig& config) {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (config.name.empty()) fail("name must be nonempty");
    if (config.steps == 0) fail("steps must be positive");
    if (config.steps_per_epoch == 0) fail("steps_per_epoch must be positive");
    if (config.steps_per_epoch > config.steps) fail("steps_per_epoch exceeds steps");
    if (config.seeds.empty()) fail("seeds must be nonempty");
    {
        std::set<std::uint64_t> unique(config.seeds.begin(), config.seeds.end());
        if (unique.size() != config.seeds.size()) fail("seeds must be distinct");
    }

    const ObjectiveSpec& o = config.objective;
    if (o.name == "mlp") {
        if (!o.mlp) fail("mlp objective needs its parameters");
        const MlpSpec& m = *o.mlp;
        if (m.layers.size() < 2) fail("mlp layers need an input and an output size");
        if (std::find(m.layers.begin(), m.layers.end(), 0) != m.layers.end()) {
            fail("mlp layer sizes must be positive");
        }
        if (m.examples == 0) fail("mlp examples must be positive");
        if (m.batch_size == 0 || m.batch_size > m.examples) {
            fail("mlp batch_size must lie in [1, examples]");
        }
        if (m.task == Task::classification && m.layers.back() < 2) {
            fail("classification needs at least two outputs");
        }
        if (!(m.label_noise >= 0.0)) fail("mlp label_noise must be nonnegative");
        if (!(m.init_scale >= 0.0)) fail("mlp init_scale must be nonnegative");
    } else {
        std::size_t dim = 0;
        if (o.name == "double_well") dim = 1;
        if (o.name == "quadratic") {
            dim = o.stiffness.size();
            if (dim == 0) fail("quadratic stiffness must be nonempty");
            for (double k : o.stiffness) {
                if (!(k > 0.0)) fail("quadratic stiffness must be positive");
            }
        }
        if (o.name == "rosenbrock" || o.name == "rastrigin" || o.name == "flat") {
            dim = o.dim;
            if (dim < (o.name == "rosenbrock" ? 2u : 1u)) fail(o.name + " dimension too small");
        }
        if (o.x0.size() != dim) {
            fail("x0 has " + std::to_string(o.x0.size()) + " entries, objective dimension is " +
                 std::to_string(dim));
        }
        for (double v : o.x0) {
            if (!std::isfinite(v)) fail("x0 must be finite");
        }
        if (!(o.noise_sigma >= 0.0) || !std::isfinite(o.noise_sigma)) {
            fail("noise_sigma must be nonnegative");
        }
    }

    try {
        std::visit(Overloaded{
                       [](const SgdParams& p) {
                           if (!(p.lr > 0.0)) throw ConfigError("sgd lr must be positive");
                       },
                       [](const MomentumParams& p) {
                           if (!(p.lr > 0.0)) throw ConfigError("momentum lr must be positive");
                           if (!(p.rho >= 0.0 && p.rho <= 1.0)) {
                               throw ConfigError("momentum rho must lie in [0, 1]");
                           }
                       },
                       [](const auto& c) { c.validate(); },
                   },
                   resolve_optimizer(config.optimizer, config.steps));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ExperimentConfig parse_config(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    const std::string where = "config";
    check_keys(j, where, {"name", "objective", "optimizer", "steps", "steps_per_epoch", "seeds",
                          "output_dir", "log_granularity"});

    ExperimentConfig c;
    c.name = get<std::string>(j, "name", where);
    c.objective = parse_objective(get<ordered_json>(j, "objective", where));
    c.optimizer = parse_optimizer(get<ordered_json>(j, "optimizer", where));
    c.steps = get<std::uint64_t>(j, "steps", where);
    c.steps_per_epoch = get<std::uint64_t>(j, "steps_per_epoch", where);
    c.seeds = get<std::vector<std::uint64_t>>(j, "seeds", where);
    c.output_dir = get_or<std::string>(j, "output_dir", where, c.output_dir);
    c.granularity =
        parse_granularity(get_or<std::string>(j, "log_granularity", where, "per-step"));
    validate(c);
    return c;
}

std::string serialize_config(const ExperimentConfig& config) {
    ordered_json j;
    j["name"] = config.name;
    j["objective"] = dump_objective(config.objective);
    j["optimizer"] = dump_optimizer(config.optimizer);
    j["steps"] = config.steps;
    j["steps_per_epoch"] = config.steps_per_epoch;
    j["seeds"] = config.seeds;
    j["output_dir"] = config.output_dir;
    j["log_granularity"] = granularity_name(config.granularity);
    return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

}  // namespace coolmom::bench
