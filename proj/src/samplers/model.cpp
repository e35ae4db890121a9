#include "unisphere/samplers/model.hpp"

#include "unisphere/errors.hpp"

#include <cmath>
#include <numbers>

namespace unisphere {

namespace {

void check_mu(std::vector<double>& mu, std::size_t p) {
    if (mu.empty()) {
        mu.assign(p, 0.0);
        mu[0] = 1.0;
        return;
    }
    if (mu.size() != p) throw DomainError("mu must have p entries");
    double s = 0.0;
    for (double v : mu) s += v * v;
    if (std::abs(std::sqrt(s) - 1.0) > 1e-8) throw DomainError("mu must be a unit vector");
}

bool is_first_axis(const std::vector<double>& mu) {
    if (mu.empty()) return true;
    if (mu[0] != 1.0) return false;
    for (std::size_t i = 1; i < mu.size(); ++i) {
        if (mu[i] != 0.0) return false;
    }
    return true;
}

template <class T>
T field(const nlohmann::json& j, const char* name) {
    if (!j.contains(name)) throw ParseError(std::string("model: missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(std::string("model: field '") + name + "' has the wrong type");
    }
}

template <class T>
T field_or(const nlohmann::json& j, const char* name, T fallback) {
    return j.contains(name) ? field<T>(j, name) : fallback;
}

}  // namespace

ModelSpec normalized_model(ModelSpec m) {
    std::visit(
        [](auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, UniformModel>) {
                if (v.p < 2) throw DomainError("uniform model needs p >= 2");
            } else if constexpr (std::is_same_v<T, FvmlModel> || std::is_same_v<T, WatsonModel>) {
                if (v.p < 3) throw DomainError("FvML/Watson models need p >= 3");
                if (!(v.kappa >= 0.0) || !std::isfinite(v.kappa)) {
                    throw DomainError("kappa must be finite and nonnegative");
                }
                check_mu(v.mu, v.p);
            } else if constexpr (std::is_same_v<T, LowRankModel>) {
                if (v.k < 2 || v.k > v.p) throw DomainError("low-rank model needs 2 <= k <= p");
            } else if constexpr (std::is_same_v<T, AlphaSphericalModel>) {
                if (v.p < 2) throw DomainError("alpha-spherical model needs p >= 2");
                if (!(v.alpha > 0.0 && v.alpha < 2.0)) throw DomainError("alpha must lie in (0, 2)");
            } else {
                if (v.p < 3) throw DomainError("cap mixture needs p >= 3");
                if (v.eps <= 0.0) v.eps = 1.0 / (4.0 * static_cast<double>(v.p));
                if (!(v.eps < std::numbers::pi / 4.0)) throw DomainError("cap radius must lie in (0, pi/4)");
            }
        },
        m);
    return m;
}

std::size_t model_dimension(const ModelSpec& m) {
    return std::visit([](const auto& v) { return v.p; }, m);
}

std::string model_family(const ModelSpec& m) {
    static const char* names[] = {"uniform", "fvml", "watson", "lowrank", "alpha", "capmix"};
    return names[m.index()];
}

nlohmann::json model_to_json(const ModelSpec& m) {
    nlohmann::json j;
    j["family"] = model_family(m);
    std::visit(
        [&j](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            j["p"] = v.p;
            if constexpr (std::is_same_v<T, FvmlModel> || std::is_same_v<T, WatsonModel>) {
                j["kappa"] = v.kappa;
                if (!is_first_axis(v.mu)) j["mu"] = v.mu;
            } else if constexpr (std::is_same_v<T, LowRankModel>) {
                j["k"] = v.k;
                j["rotate"] = v.rotate;
            } else if constexpr (std::is_same_v<T, AlphaSphericalModel>) {
                j["alpha"] = v.alpha;
            } else if constexpr (std::is_same_v<T, CapMixtureModel>) {
                j["eps"] = v.eps;
            }
        },
        m);
    return j;
}

ModelSpec model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("model: expected a JSON object");
    const auto family = field<std::string>(j, "family");
    const auto p = field_or<std::size_t>(j, "p", 0);
    if (family == "uniform") return UniformModel{p};
    if (family == "fvml") {
        return FvmlModel{p, field_or(j, "kappa", 0.0), field_or(j, "mu", std::vector<double>{})};
    }
    if (family == "watson") {
        return WatsonModel{p, field_or(j, "kappa", 0.0), field_or(j, "mu", std::vector<double>{})};
    }
    if (family == "lowrank") {
        return LowRankModel{p, field_or<std::size_t>(j, "k", p), field_or(j, "rotate", false)};
    }
    if (family == "alpha") return AlphaSphericalModel{p, field_or(j, "alpha", 1.0)};
    if (family == "capmix") return CapMixtureModel{p, field_or(j, "eps", 0.0)};
    throw ParseError("model: field 'family' has unknown value '" + family + "'");
}

}  // namespace unisphere
