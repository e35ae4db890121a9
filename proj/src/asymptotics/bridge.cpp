#include "unisphere/asymptotics/bridge.hpp"

#include "unisphere/errors.hpp"
#include "unisphere/harness/parallel.hpp"
#include "unisphere/samplers/rng.hpp"
#include "unisphere/specfun/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace unisphere {

double shift_value(const ShiftFunction& shift, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("shift argument outside [0, 1]");
    if (t == 0.0 || t == 1.0) return 0.0;
    const double z = normal_quantile(t);
    const double base = normal_pdf(z);
    if (shift.kind == ShiftFunction::Kind::Fvml) {
        return shift.tau * shift.tau / std::numbers::sqrt2 * base;
    }
    return shift.tau / (2.0 * std::numbers::sqrt2) * z * base;
}

double BridgeLaw::exceedance(double x) const {
    if (sups.empty()) return 0.0;
    const auto it = std::lower_bound(sups.begin(), sups.end(), x);
    return static_cast<double>(sups.end() - it) / static_cast<double>(sups.size());
}

double BridgeLaw::mean() const {
    double s = 0.0;
    for (double v : sups) s += v;
    return sups.empty() ? 0.0 : s / static_cast<double>(sups.size());
}

BridgeLaw simulate_sup_shifted_bridge(const std::optional<ShiftFunction>& shift,
                                      std::size_t grid_size, std::size_t reps, std::uint64_t seed,
                                      std::size_t threads) {
    if (grid_size < 2) throw DomainError("bridge grid needs at least two steps");
    if (reps == 0) throw DomainError("bridge simulation needs reps >= 1");
    const double g = static_cast<double>(grid_size);
    std::vector<double> drift(grid_size + 1, 0.0);
    if (shift) {
        for (std::size_t k = 1; k < grid_size; ++k) drift[k] = shift_value(*shift, static_cast<double>(k) / g);
    }
    const double h = 1.0 / g;
    const double step = std::sqrt(h);

    BridgeLaw law;
    law.sups.resize(reps);
    parallel_for(reps, threads, [&](std::size_t r) {
        Rng rng({seed, r});
        std::vector<double> w(grid_size + 1, 0.0);
        for (std::size_t k = 1; k <= grid_size; ++k) w[k] = w[k - 1] + step * rng.normal();
        const double end = w[grid_size];
        // Between grid points the path is a Brownian bridge joining the grid
        // values, so its max and min over each cell are drawn exactly from
        // P(max >= m) = exp(-2 (m - a)(m - b) / h).
        double top = 0.0;
        double prev = 0.0;
        for (std::size_t k = 1; k <= grid_size; ++k) {
            const double x = w[k] - static_cast<double>(k) / g * end - drift[k];
            const double d2 = (x - prev) * (x - prev);
            const double hi = 0.5 * (prev + x + std::sqrt(d2 - 2.0 * h * std::log(rng.uniform())));
            const double lo = 0.5 * (prev + x - std::sqrt(d2 - 2.0 * h * std::log(rng.uniform())));
            top = std::max({top, hi, -lo});
            prev = x;
        }
        law.sups[r] = top;
    });
    std::sort(law.sups.begin(), law.sups.end());
    return law;
}

double predict_asymptotic_power(const std::optional<ShiftFunction>& shift, double alpha,
                                std::size_t reps, std::uint64_t seed, std::size_t grid_size,
                                std::size_t threads) {
    const double c = kolmogorov_quantile(alpha);
    return simulate_sup_shifted_bridge(shift, grid_size, reps, seed, threads).exceedance(c);
}

}  // namespace unisphere
