#include "unisphere/asymptotics/llr.hpp"

#include "unisphere/errors.hpp"
#include "unisphere/specfun/quadrature.hpp"
#include "unisphere/specfun/special.hpp"

#include <cmath>
#include <vector>

namespace unisphere {

double fvml_llr_second_moment(std::size_t n, std::size_t p, double kappa) {
    if (p < 3) throw DomainError("LLR second moment needs p >= 3");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be nonnegative");
    if (kappa == 0.0) return 1.0;
    const double nd = static_cast<double>(n);
    const double e = 0.5 * (static_cast<double>(p) - 3.0);
    const double base = 2.0 * fvml_log_normalizer(kappa, p);
    const double log_const = null_log_constant(p);

    auto exponent = [&](double u) {
        const double k2 = kappa * std::sqrt(std::max(0.0, 2.0 * (1.0 + u)));
        return nd * (base - fvml_log_normalizer(k2, p));
    };
    auto log_integrand = [&](double u) {
        if (u <= -1.0 || u >= 1.0) return e == 0.0 ? exponent(u) + log_const : -INFINITY;
        const double x = exponent(u);
        if (x > 700.0) throw InRegimeError("LLR second moment: exponent above 700, signal too strong");
        return x + log_const + e * (std::log1p(-u) + std::log1p(u));
    };

    // Coarse scan for the peak and to enforce the overflow guard everywhere.
    constexpr int kScan = 400;
    double best_u = 0.0, best = -INFINITY;
    for (int i = 0; i <= kScan; ++i) {
        const double u = -1.0 + 2.0 * i / kScan;
        if (exponent(u) > 700.0) {
            throw InRegimeError("LLR second moment: exponent above 700, signal too strong");
        }
        if (i == 0 || i == kScan) continue;
        const double l = log_integrand(u);
        if (l > best) {
            best = l;
            best_u = u;
        }
    }
    const double width = 1.0 / std::sqrt(static_cast<double>(p));
    std::vector<double> bp;
    for (double k : {-12.0, -4.0, -1.0, 1.0, 4.0, 12.0}) bp.push_back(best_u + k * width);
    quad::Options opt;
    opt.abs_tol = 1e-300;
    opt.rel_tol = 1e-10;
    return std::exp(quad::log_integrate(log_integrand, -1.0, 1.0, best_u, bp, opt));
}

double competitor_low_rank_power(Competitor method, std::size_t n, std::size_t p, std::size_t k,
                                 double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (k < 2 || k > p) throw DomainError("need 2 <= k <= p");
    if (n < 3) throw DomainError("need n >= 3");
    const double ratio = static_cast<double>(k) / static_cast<double>(p);
    switch (method) {
        case Competitor::Bingham: {
            const double tau = static_cast<double>(n) * (1.0 - ratio);
            return normal_sf(normal_quantile(1.0 - alpha) - tau / 2.0);
        }
        case Competitor::Rayleigh2sided:
            return 2.0 * normal_sf(normal_quantile(1.0 - alpha / 2.0) / std::sqrt(ratio));
        case Competitor::Packing: {
            const double ln = std::log(static_cast<double>(n));
            const double drift = (1.0 - ratio) * (4.0 * ln - std::log(ln));
            return packing_gumbel_sf(ratio * packing_gumbel_quantile(alpha) - drift);
        }
    }
    throw DomainError("unknown competitor");
}

}  // namespace unisphere
