#include "unisphere/harness/config.hpp"

#include "unisphere/asymptotics/scaling.hpp"
#include "unisphere/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace unisphere {

namespace {

using nlohmann::json;

template <class T>
T get_field(const json& j, const char* name) {
    if (!j.contains(name)) throw ParseError(std::string("config: missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("config: field '") + name + "' has the wrong type");
    }
}

json calibration_to_json(const Calibration& c) {
    if (c.kind == Calibration::Kind::Asymptotic) return json{{"kind", "asymptotic"}};
    return json{{"kind", "monte-carlo"}, {"reps", c.reps}, {"seed", c.seed}};
}

Calibration calibration_from_json(const json& j) {
    Calibration c;
    const std::string kind = j.is_string() ? j.get<std::string>() : get_field<std::string>(j, "kind");
    if (kind == "asymptotic") return c;
    if (kind != "monte-carlo" && kind != "mc") {
        throw ParseError("config: field 'calibration' has unknown kind '" + kind + "'");
    }
    c.kind = Calibration::Kind::MonteCarlo;
    if (j.is_object()) {
        c.reps = j.contains("reps") ? get_field<std::size_t>(j, "reps") : 2000;
        c.seed = j.contains("seed") ? get_field<std::uint64_t>(j, "seed") : 0;
    } else {
        c.reps = 2000;
    }
    return c;
}

MethodSettings method_from_json(const json& j) {
    MethodSettings m;
    try {
        if (j.is_string()) {
            m.method = parse_method(j.get<std::string>());
            return m;
        }
        if (!j.is_object()) throw ParseError("config: field 'methods' entries must be names or objects");
        m.method = parse_method(get_field<std::string>(j, "method"));
        if (j.contains("tail")) m.tail = parse_tail(get_field<std::string>(j, "tail"));
        if (j.contains("calibration")) m.calibration = calibration_from_json(j.at("calibration"));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(std::string("config: field 'methods': ") + e.what());
    }
    return m;
}

}  // namespace

bool operator==(const Calibration& a, const Calibration& b) {
    return a.kind == b.kind && a.reps == b.reps && a.seed == b.seed;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return config_to_json(a) == config_to_json(b);
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["n"] = c.n;
    j["p"] = c.p;
    j["alpha"] = c.alpha;
    j["reps"] = c.reps;
    j["model_family"] = model_to_json(c.model_family);
    j["signal_grid"] = c.signal_grid;
    json methods = json::array();
    for (const auto& m : c.methods) {
        methods.push_back({{"method", method_name(m.method)},
                           {"tail", tail_name(m.tail)},
                           {"calibration", calibration_to_json(m.calibration)}});
    }
    j["methods"] = methods;
    j["seed"] = c.seed;
    j["output_path"] = c.output_path;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("config: expected a JSON object at the top level");
    static const char* known[] = {"n", "p", "alpha", "reps", "model_family", "signal_grid",
                                  "methods", "seed", "output_path"};
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || item.key() == k;
        if (!ok) throw ParseError("config: unknown field '" + item.key() + "'");
    }
    ExperimentConfig c;
    c.n = get_field<std::size_t>(j, "n");
    c.p = get_field<std::size_t>(j, "p");
    if (j.contains("alpha")) c.alpha = get_field<double>(j, "alpha");
    if (j.contains("reps")) c.reps = get_field<std::size_t>(j, "reps");
    if (j.contains("model_family")) {
        try {
            c.model_family = model_from_json(j.at("model_family"));
        } catch (const ParseError& e) {
            throw ParseError(std::string("config: field 'model_family': ") + e.what());
        }
    }
    if (j.contains("signal_grid")) c.signal_grid = get_field<std::vector<double>>(j, "signal_grid");
    if (!j.contains("methods") || !j.at("methods").is_array()) {
        throw ParseError("config: field 'methods' must be an array");
    }
    for (const auto& m : j.at("methods")) c.methods.push_back(method_from_json(m));
    if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
    if (j.contains("output_path")) c.output_path = get_field<std::string>(j, "output_path");
    // Keep the template dimension in step with the experiment.
    std::visit([&c](auto& v) { v.p = c.p; }, c.model_family);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("config '" + path + "': malformed JSON at byte " + std::to_string(e.byte) +
                         ": " + e.what());
    }
    return config_from_json(j);
}

void save_config(const ExperimentConfig& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write config '" + path + "'");
    out << config_to_json(c).dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

ModelSpec model_for_signal(const ExperimentConfig& c, double tau) {
    ModelSpec m = c.model_family;
    std::visit(
        [&](auto& v) {
            using T = std::decay_t<decltype(v)>;
            v.p = c.p;
            if constexpr (std::is_same_v<T, FvmlModel>) {
                v.kappa = fvml_kappa(tau, c.n, c.p);
            } else if constexpr (std::is_same_v<T, WatsonModel>) {
                v.kappa = watson_kappa(tau, c.n, c.p);
            } else if constexpr (std::is_same_v<T, LowRankModel>) {
                v.k = lowrank_k(tau, c.n, c.p);
            }
        },
        m);
    return m;
}

void validate_config(const ExperimentConfig& c) {
    if (c.n < 2 || c.p < 2) throw ConfigError("config: need n >= 2 and p >= 2");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("config: alpha must lie in (0, 1)");
    if (c.reps < 100) throw ConfigError("config: reps must be at least 100");
    if (c.signal_grid.empty()) throw ConfigError("config: signal_grid is empty");
    for (std::size_t i = 0; i < c.signal_grid.size(); ++i) {
        if (!(c.signal_grid[i] >= 0.0)) throw ConfigError("config: signal_grid values must be >= 0");
        if (i > 0 && !(c.signal_grid[i] > c.signal_grid[i - 1])) {
            throw ConfigError("config: signal_grid must be strictly increasing");
        }
    }
    if (c.methods.empty()) throw ConfigError("config: no methods");
    for (const auto& m : c.methods) {
        try {
            check_tail(m.method, m.tail);
        } catch (const BadTail& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        if (m.method == Method::Packing && c.n < 3) throw ConfigError("config: Packing needs n >= 3");
        if (m.calibration.kind == Calibration::Kind::MonteCarlo && m.calibration.reps < 1000) {
            throw ConfigError("config: Monte Carlo calibration needs reps >= 1000");
        }
    }
    for (double tau : c.signal_grid) {
        const ModelSpec m = model_for_signal(c, tau);
        if (const auto* w = std::get_if<WatsonModel>(&m); w && !(w->kappa < 0.5 * static_cast<double>(c.p))) {
            throw InRegimeError("config: Watson kappa must stay below p/2");
        }
        try {
            normalized_model(m);
        } catch (const DomainError& e) {
            throw InRegimeError(std::string("config: tau = ") + std::to_string(tau) + ": " + e.what());
        }
    }
}

std::string config_hash(const ExperimentConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config_to_json(c).dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace unisphere
