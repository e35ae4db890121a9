#pragma once

#include "unisphere/harness/config.hpp"
#include "unisphere/stats/statistics.hpp"

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace unisphere {

struct RateRow {
    std::string family;
    double tau = 0.0;
    Method method = Method::SupDistance;
    std::size_t rejections = 0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;

    double rate() const { return reps == 0 ? 0.0 : static_cast<double>(rejections) / static_cast<double>(reps); }
    /// Binomial standard error sqrt(r (1 - r) / reps).
    double se() const;
};

struct PowerCurve {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<RateRow> rows;  // tau-major, methods in config order
    double wall_clock_seconds = 0.0;
    std::vector<std::string> warnings;

    const RateRow& at(double tau, Method m) const;
};

/// Rejection rates over config.reps fresh samples per signal value.
/// Replication r at signal index i draws from stream
/// (mix(mix(seed, family), i), r); all methods share that sample, and the
/// Projection direction is drawn from the same stream after the sample.
/// Monte Carlo critical values are simulated once per method. Deterministic
/// for any thread count.
PowerCurve run_power_curve(const ExperimentConfig& config, std::size_t threads = 0);

/// run_power_curve with the model forced to uniform and a single tau = 0.
PowerCurve run_size_experiment(const ExperimentConfig& config, std::size_t threads = 0);

struct NullCheck {
    double ks = 0.0;         // sup |empirical CDF - Kolmogorov CDF|
    double size = 0.0;       // rejection rate at alpha = 0.05
    std::vector<double> standardized;  // sorted sqrt(n(n-1)/2) T_n
};

/// Null law of the standardized sup-distance statistic against the
/// Kolmogorov law. Replication r uses stream (seed, r).
NullCheck run_null_distribution_check(std::size_t n, std::size_t p, std::size_t reps,
                                      std::uint64_t seed, std::size_t threads = 0);

enum class NonlocalKind { CapMixture, AlphaSpherical };

struct NonlocalResult {
    std::vector<RateRow> rates;  // SupDistance, Rayleigh, Bingham, Packing; upper tail
    double mean_R = 0.0;
    double se_R = 0.0;
    double mean_abs_R = 0.0;
    double se_abs_R = 0.0;
    double share_B_negative = 0.0;
    /// Share of replications with P_n below the alpha-quantile of its null.
    double share_P_below = 0.0;
};

/// Four classical-and-proposed tests against a non-local alternative.
/// The cap mixture uses eps = 1/(4p) and requires p >= 2 n^2
/// (ConfigError otherwise); `alpha_index` is the tail index of the
/// alpha-spherical law.
NonlocalResult run_nonlocal_experiment(NonlocalKind kind, std::size_t n, std::size_t p, double alpha,
                                       std::size_t reps, std::uint64_t seed, double alpha_index = 1.0,
                                       std::size_t threads = 0);

/// Columns family,tau,method,rate,se,reps,seed.
void write_csv(const PowerCurve& curve, std::ostream& out);
void export_csv(const PowerCurve& curve, const std::string& path);

/// Minimal SVG line chart: rejection rate against tau, one line per method.
void export_svg(const PowerCurve& curve, const std::string& path);

}  // namespace unisphere
