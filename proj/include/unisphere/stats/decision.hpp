#pragma once

#include "unisphere/core/point_set.hpp"
#include "unisphere/stats/statistics.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace unisphere {

struct Calibration {
    enum class Kind { Asymptotic, MonteCarlo };
    Kind kind = Kind::Asymptotic;
    std::size_t reps = 0;     // Monte Carlo only
    std::uint64_t seed = 0;   // Monte Carlo only

    /// "asymptotic" or "monte-carlo(reps,seed)".
    std::string describe() const;
};

struct TestOutcome {
    Method method = Method::SupDistance;
    double statistic = 0.0;
    double standardized = 0.0;
    double p_value = 1.0;
    bool reject = false;
    double alpha = 0.05;
    Tail tail = Tail::Upper;
    Calibration calibration;

    static std::string csv_header();
    std::string csv_row() const;
};

struct TestOptions {
    double alpha = 0.05;
    Tail tail = Tail::Upper;
    Calibration calibration;
    /// Projection only. Empty means one uniform draw from direction_seed.
    std::vector<double> direction;
    std::uint64_t direction_seed = 0;
    /// Worker cap for Monte Carlo calibration; 0 = hardware concurrency.
    std::size_t threads = 0;
};

/// Throws BadTail unless the method supports the tail. Rayleigh, Bingham
/// and Packing take both; SupDistance and Projection are upper only.
void check_tail(Method m, Tail t);

/// Asymptotic decision for an already computed statistic:
///   SupDistance, Projection: Kolmogorov law of the standardized value;
///   Rayleigh, Bingham: standard normal;
///   Packing: exp(-(8 pi)^{-1/2} e^{-x/2}).
/// Two-sided p-values are 2 min(F, 1 - F).
TestOutcome decide_asymptotic(Method m, double statistic, std::size_t n, double alpha, Tail tail);

/// Decision against a sorted simulated null sample of the raw statistic.
/// Upper: p = (1 + #{null >= stat}) / (reps + 1), reject when stat reaches
/// the (1 - alpha) order statistic. Two-sided doubles the smaller tail count
/// and rejects outside the alpha/2 and 1 - alpha/2 order statistics.
TestOutcome decide_monte_carlo(Method m, double statistic, std::size_t n, double alpha, Tail tail,
                               const std::vector<double>& sorted_null,
                               const Calibration& calibration);

/// The statistic for one method. `direction` is used by Projection only.
double compute_statistic(Method m, const UnitPointSet& s, std::span<const double> direction);

/// Statistic values under `reps` uniform samples of size n in dimension p;
/// replication r uses stream (seed, r). Projection uses the direction e_1.
/// Returned sorted ascending; identical for every thread count.
std::vector<double> simulate_null_statistics(std::size_t n, std::size_t p, Method m,
                                             std::size_t reps, std::uint64_t seed,
                                             std::size_t threads = 0);

/// Empirical (1 - alpha) quantile of the raw statistic under the null: the
/// order statistic of index ceil((1 - alpha) reps) - 1, so alpha = 1 gives
/// the minimum. Needs reps >= 1000.
double calibrate_critical_value_mc(std::size_t n, std::size_t p, Method m, double alpha,
                                   std::size_t reps, std::uint64_t seed, std::size_t threads = 0);

/// Full test. Monte Carlo p-values are (1 + #{null >= observed}) / (reps + 1)
/// (upper) and reject when the statistic reaches the calibrated quantile.
TestOutcome run_test(const UnitPointSet& s, Method m, const TestOptions& opt);

}  // namespace unisphere
