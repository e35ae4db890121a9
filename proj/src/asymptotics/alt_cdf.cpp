#include "unisphere/asymptotics/alt_cdf.hpp"

#include "unisphere/core/point_set.hpp"
#include "unisphere/errors.hpp"
#include "unisphere/harness/parallel.hpp"
#include "unisphere/samplers/samplers.hpp"
#include "unisphere/specfun/marginal.hpp"
#include "unisphere/specfun/special.hpp"
#include "unisphere/stats/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace unisphere {

namespace {

constexpr double kTail = 1e-12;
constexpr std::size_t kGrid = 4096;
constexpr std::size_t kBlock = 1024;

}  // namespace

AltInnerCdf::AltInnerCdf(const ModelSpec& spec, std::size_t panels, std::size_t order) {
    const ModelSpec model = normalized_model(spec);
    p_ = model_dimension(model);
    if (const auto* lr = std::get_if<LowRankModel>(&model)) {
        k_ = lr->k;
        return;
    }
    std::optional<Marginal> marginal;
    if (const auto* f = std::get_if<FvmlModel>(&model)) marginal = Marginal::fvml(f->kappa, p_);
    if (const auto* w = std::get_if<WatsonModel>(&model)) marginal = Marginal::watson(w->kappa, p_);
    if (!marginal) throw DomainError("alt_inner_cdf supports FvML, Watson and low-rank models");

    const quad::Rule rule = marginal->probability_rule(panels, order);
    const std::size_t q = rule.size();
    nodes_.reserve(q * (q + 1) / 2);
    for (std::size_t i = 0; i < q; ++i) {
        const double ti = rule.nodes[i];
        for (std::size_t j = i; j < q; ++j) {
            const double tj = rule.nodes[j];
            const double w = rule.weights[i] * rule.weights[j] * (i == j ? 1.0 : 2.0);
            if (w < 1e-300) continue;
            const double b = std::sqrt((1.0 - ti * ti) * (1.0 - tj * tj));
            if (!(b > 0.0)) continue;
            nodes_.push_back({ti * tj, b, w});
        }
    }
}

double AltInnerCdf::null_cdf(double u) const {
    const double s = u / std::sqrt(static_cast<double>(p_));
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return null_cdf_m(s, p_);
}

double AltInnerCdf::operator()(double u) const {
    const double s = u / std::sqrt(static_cast<double>(p_));
    if (k_ > 0) {
        if (s <= -1.0) return 0.0;
        if (s >= 1.0) return 1.0;
        return null_cdf_m(s, k_);
    }
    double acc = 0.0;
    for (const Node& nd : nodes_) {
        const double x = (s - nd.a) / nd.b;
        if (x <= -1.0) continue;
        acc += nd.w * (x >= 1.0 ? 1.0 : null_cdf_m(x, p_ - 1));
    }
    return std::clamp(acc, 0.0, 1.0);
}

double alt_inner_cdf(const ModelSpec& model, double u) { return AltInnerCdf(model)(u); }

DistanceResult distance_d(const ModelSpec& model) {
    const AltInnerCdf alt(model);
    const double cap = std::sqrt(static_cast<double>(alt.p()));
    auto gap = [&](double u) { return std::abs(alt(u) - alt.null_cdf(u)); };

    double U = 4.0;
    while (U < cap) {
        const bool low = std::max(alt(-U), alt.null_cdf(-U)) <= kTail;
        const bool high = std::min(alt(U), alt.null_cdf(U)) >= 1.0 - kTail;
        if (low && high) break;
        U = std::min(cap, U * 1.25);
    }

    const double h = 2.0 * U / static_cast<double>(kGrid - 1);
    std::size_t best = 0;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < kGrid; ++i) {
        const double g = gap(-U + h * static_cast<double>(i));
        if (g > best_gap) {
            best_gap = g;
            best = i;
        }
    }

    // Golden-section search for the maximum on the neighbouring cells.
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = -U + h * static_cast<double>(best == 0 ? 0 : best - 1);
    double b = -U + h * static_cast<double>(std::min(best + 1, kGrid - 1));
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double gc = gap(c), gd = gap(d);
    while (b - a > 1e-8) {
        if (gc > gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - phi * (b - a);
            gc = gap(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + phi * (b - a);
            gd = gap(d);
        }
    }
    DistanceResult out{best_gap, -U + h * static_cast<double>(best)};
    const double mid = 0.5 * (a + b);
    const double gm = gap(mid);
    if (gm > out.d) out = {gm, mid};
    return out;
}

double estimate_distance_d_mc(const ModelSpec& model, std::size_t pairs, std::uint64_t seed,
                              std::size_t threads) {
    if (pairs == 0) throw DomainError("need at least one pair");
    const Sampler sampler(model);
    const std::size_t p = sampler.p();
    const std::size_t blocks = (pairs + kBlock - 1) / kBlock;
    std::vector<double> values(pairs);
    parallel_for(blocks, threads, [&](std::size_t blk) {
        Rng rng({seed, blk});
        std::vector<double> x(p), y(p);
        const std::size_t end = std::min(pairs, (blk + 1) * kBlock);
        for (std::size_t i = blk * kBlock; i < end; ++i) {
            sampler.draw(rng, x);
            sampler.draw(rng, y);
            values[i] = std::clamp(dot(x, y), -1.0, 1.0);
        }
    });
    std::sort(values.begin(), values.end());
    return sup_distance(values, [p](double t) { return null_cdf_m(t, p); });
}

}  // namespace unisphere
