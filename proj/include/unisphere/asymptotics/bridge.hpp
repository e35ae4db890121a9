#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace unisphere {

/// Drift of the limiting shifted bridge.
///   Fvml:      b(t) = tau^2 / sqrt(2) phi(Phi^{-1}(t))
///   Quadratic: b(t) = tau / (2 sqrt(2)) Phi^{-1}(t) phi(Phi^{-1}(t))
struct ShiftFunction {
    enum class Kind { Fvml, Quadratic };
    Kind kind = Kind::Fvml;
    double tau = 0.0;
};

double shift_value(const ShiftFunction& shift, double t);

/// Sorted draws of sup_t |B_t - b(t)| over a uniform grid.
struct BridgeLaw {
    std::vector<double> sups;

    /// Fraction of draws >= x.
    double exceedance(double x) const;
    double mean() const;
};

/// Each replication builds the bridge on the grid from grid_size Gaussian
/// increments, B_k = W_k - (k/g) W_g, then draws the exact extremes of the
/// connecting bridge inside every cell, so the sup carries no grid bias
/// beyond the curvature of b within a cell. Replication r uses stream
/// (seed, r).
BridgeLaw simulate_sup_shifted_bridge(const std::optional<ShiftFunction>& shift,
                                      std::size_t grid_size, std::size_t reps, std::uint64_t seed,
                                      std::size_t threads = 0);

/// P(sup |B_t - b(t)| >= c_alpha) with c_alpha the Kolmogorov quantile.
double predict_asymptotic_power(const std::optional<ShiftFunction>& shift, double alpha,
                                std::size_t reps, std::uint64_t seed, std::size_t grid_size = 2048,
                                std::size_t threads = 0);

}  // namespace unisphere
