#pragma once

#include "unisphere/samplers/model.hpp"
#include "unisphere/stats/decision.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace unisphere {

struct MethodSettings {
    Method method = Method::SupDistance;
    Tail tail = Tail::Upper;
    Calibration calibration;

    bool operator==(const MethodSettings&) const = default;
};

/// One Monte Carlo experiment. `model_family` is a template: its p is
/// replaced by `p` and, for FvML, Watson and low rank, its kappa or k by the
/// value mapped from each signal tau (see scaling.hpp).
struct ExperimentConfig {
    std::size_t n = 0;
    std::size_t p = 0;
    double alpha = 0.05;
    std::size_t reps = 2000;
    ModelSpec model_family = UniformModel{};
    std::vector<double> signal_grid{0.0};
    std::vector<MethodSettings> methods;
    std::uint64_t seed = 0;
    std::string output_path;
};

bool operator==(const Calibration& a, const Calibration& b);
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Snake-case JSON with the field names of ExperimentConfig. Methods are
/// written as {"method", "tail", "calibration"} objects; on input a bare
/// method name is also accepted.
nlohmann::json config_to_json(const ExperimentConfig& c);
/// ParseError names the offending field.
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& c, const std::string& path);

/// Throws ConfigError for structural problems (reps < 100, empty or
/// non-increasing grid, bad alpha, bad tail for a method) and
/// InRegimeError when a mapped model parameter leaves its range.
void validate_config(const ExperimentConfig& c);

/// The model at signal tau.
ModelSpec model_for_signal(const ExperimentConfig& c, double tau);

/// 16 hex digits of FNV-1a over the compact JSON form.
std::string config_hash(const ExperimentConfig& c);

}  // namespace unisphere
