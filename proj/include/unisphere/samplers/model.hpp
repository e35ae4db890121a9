#pragma once

#include "json.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace unisphere {

struct UniformModel {
    std::size_t p = 0;
};

/// Density proportional to exp(kappa mu.x).
struct FvmlModel {
    std::size_t p = 0;
    double kappa = 0.0;
    std::vector<double> mu;  // unit; empty means e_1
};

/// Density proportional to exp(kappa (mu.x)^2).
struct WatsonModel {
    std::size_t p = 0;
    double kappa = 0.0;
    std::vector<double> mu;
};

/// Uniform on the unit sphere of a k-dimensional coordinate subspace,
/// optionally moved by a fixed rotation.
struct LowRankModel {
    std::size_t p = 0;
    std::size_t k = 0;
    bool rotate = false;
};

/// Normalized vector of i.i.d. symmetric Pareto(alpha) coordinates.
struct AlphaSphericalModel {
    std::size_t p = 0;
    double alpha = 1.0;
};

/// Equal mixture of uniform laws on caps of angular radius eps around the
/// p+1 vertices of the regular simplex. eps <= 0 selects 1/(4p).
struct CapMixtureModel {
    std::size_t p = 0;
    double eps = 0.0;
};

using ModelSpec = std::variant<UniformModel, FvmlModel, WatsonModel, LowRankModel,
                               AlphaSphericalModel, CapMixtureModel>;

/// Fills defaults (mu = e_1, cap eps = 1/(4p)) and checks every constraint.
/// Throws DomainError.
ModelSpec normalized_model(ModelSpec m);

std::size_t model_dimension(const ModelSpec& m);

/// "uniform", "fvml", "watson", "lowrank", "alpha", "capmix".
std::string model_family(const ModelSpec& m);

/// JSON object with a "family" key and the model's parameters. mu is written
/// only when it differs from e_1.
nlohmann::json model_to_json(const ModelSpec& m);
/// Inverse of model_to_json; ParseError names the offending field.
ModelSpec model_from_json(const nlohmann::json& j);

}  // namespace unisphere
