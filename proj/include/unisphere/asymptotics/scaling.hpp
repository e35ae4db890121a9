#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace unisphere {

// Local-alternative parametrizations: signal tau at sample size n and
// dimension p mapped to the model parameter.

/// kappa = tau p^{3/4} / sqrt(n).
inline double fvml_kappa(double tau, std::size_t n, std::size_t p) {
    return tau * std::pow(static_cast<double>(p), 0.75) / std::sqrt(static_cast<double>(n));
}

/// kappa = p^{3/2} sqrt(tau) / (2 (sqrt(n) + sqrt(tau p))); always below p/2
/// and satisfies n kappa^2 / (p (p/2 - kappa)^2) = tau exactly.
inline double watson_kappa(double tau, std::size_t n, std::size_t p) {
    const double pd = static_cast<double>(p);
    const double st = std::sqrt(tau);
    return std::pow(pd, 1.5) * st / (2.0 * (std::sqrt(static_cast<double>(n)) + st * std::sqrt(pd)));
}

/// k = round(p (1 - tau/n)), clamped to [2, p].
inline std::size_t lowrank_k(double tau, std::size_t n, std::size_t p) {
    const double k = std::round(static_cast<double>(p) * (1.0 - tau / static_cast<double>(n)));
    return static_cast<std::size_t>(std::clamp(k, 2.0, static_cast<double>(p)));
}

}  // namespace unisphere
