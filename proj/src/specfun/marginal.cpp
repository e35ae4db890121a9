#include "unisphere/specfun/marginal.hpp"

#include "unisphere/errors.hpp"
#include "unisphere/specfun/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

namespace unisphere {

namespace {

constexpr double kWindowDrop = 46.0;  // e^{-46} ~ 1e-20
constexpr std::size_t kTablePanels = 512;
constexpr std::size_t kTableOrder = 16;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

quad::Options tight_options() {
    quad::Options opt;
    opt.abs_tol = 1e-300;
    opt.rel_tol = 1e-14;
    opt.max_evaluations = 20000;
    return opt;
}

}  // namespace

struct Marginal::Table {
    std::vector<double> edges;
    std::vector<double> cumulative;  // normalized, cumulative.front() = 0, back() = 1
    double total = 0.0;              // unnormalized mass relative to exp(log_peak)
};

struct Marginal::TableSlot {
    std::once_flag once;
    std::unique_ptr<Table> table;
};

Marginal Marginal::fvml(double kappa, std::size_t p) {
    if (p < 3) throw DomainError("FvML marginal needs p >= 3");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("FvML kappa must be >= 0");
    return Marginal(Kind::Fvml, kappa, p);
}

Marginal Marginal::watson(double kappa, std::size_t p) {
    if (p < 3) throw DomainError("Watson marginal needs p >= 3");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("Watson kappa must be >= 0");
    return Marginal(Kind::Watson, kappa, p);
}

Marginal Marginal::cap_angle(double eps, std::size_t p) {
    if (p < 3) throw DomainError("cap marginal needs p >= 3");
    if (!(eps > 0.0) || eps >= std::numbers::pi / 4.0) {
        throw DomainError("cap radius must lie in (0, pi/4)");
    }
    return Marginal(Kind::CapAngle, eps, p);
}

double Marginal::log_kernel(double t) const noexcept {
    if (t < support_lo_ || t > support_hi_) return kNegInf;
    switch (kind_) {
        case Kind::Fvml:
        case Kind::Watson: {
            const double tilt = kind_ == Kind::Fvml ? param_ * t : param_ * t * t;
            if (exponent_ == 0.0) return tilt;
            if (t == -1.0 || t == 1.0) return kNegInf;
            return tilt + exponent_ * (std::log1p(-t) + std::log1p(t));
        }
        case Kind::CapAngle:
            if (t <= 0.0) return kNegInf;
            return exponent_ * std::log(std::sin(t));
    }
    return kNegInf;
}

Marginal::Marginal(Kind kind, double param, std::size_t p)
    : kind_(kind), param_(param), p_(p), slot_(std::make_shared<TableSlot>()) {
    const double pd = static_cast<double>(p);
    if (kind == Kind::CapAngle) {
        exponent_ = pd - 2.0;
        support_lo_ = 0.0;
        support_hi_ = param;
        mode_ = param;
    } else {
        exponent_ = 0.5 * (pd - 3.0);
        support_lo_ = -1.0;
        support_hi_ = 1.0;
        if (kind == Kind::Fvml) {
            mode_ = param == 0.0 ? 0.0
                                 : 2.0 * param / ((pd - 3.0) + std::hypot(pd - 3.0, 2.0 * param));
        } else if (param > exponent_) {
            mode_ = exponent_ == 0.0 ? 1.0 : std::sqrt(1.0 - exponent_ / param);
        } else {
            mode_ = 0.0;
        }
    }
    log_peak_ = log_kernel(mode_);

    // Distance from `from` in direction `dir` at which the kernel has dropped
    // by `drop` below its peak, clipped to the support.
    auto reach = [this](double from, double dir, double drop) {
        const double target = log_peak_ - drop;
        const double edge = dir > 0 ? support_hi_ : support_lo_;
        const double room = std::abs(edge - from);
        if (room == 0.0) return 0.0;
        double inside = 0.0;
        double step = room * 1e-7;
        while (true) {
            if (step >= room) {
                if (log_kernel(edge) > target) return room;
                step = room;
                break;
            }
            if (log_kernel(from + dir * step) <= target) break;
            inside = step;
            step *= 2.0;
        }
        double a = inside, b = step;
        for (int i = 0; i < 80 && b - a > 1e-16 * room; ++i) {
            const double mid = 0.5 * (a + b);
            if (log_kernel(from + dir * mid) > target) {
                a = mid;
            } else {
                b = mid;
            }
        }
        return b;
    };

    const double right_scale = reach(mode_, 1.0, 0.5);
    const double left_scale = reach(mode_, -1.0, 0.5);
    scale_ = std::max(right_scale, left_scale);
    if (!(scale_ > 0.0)) scale_ = (support_hi_ - support_lo_) * 1e-3;

    if (kind == Kind::Watson) {
        hi_ = mode_ + reach(mode_, 1.0, kWindowDrop);
        lo_ = -hi_;
    } else {
        hi_ = mode_ + reach(mode_, 1.0, kWindowDrop);
        lo_ = mode_ - reach(mode_, -1.0, kWindowDrop);
    }

    std::vector<double> bp{lo_, hi_};
    for (double k : {1.0, 4.0, 12.0}) {
        bp.push_back(mode_ - k * scale_);
        bp.push_back(mode_ + k * scale_);
        if (kind == Kind::Watson && mode_ > 0.0) {
            bp.push_back(-mode_ - k * scale_);
            bp.push_back(-mode_ + k * scale_);
        }
    }
    if (kind == Kind::Watson && mode_ > 0.0) bp.push_back(-mode_);
    log_norm_ = quad::log_integrate([this](double t) { return log_kernel(t); }, support_lo_,
                                    support_hi_, mode_, bp, tight_options());
}

double Marginal::log_null_expectation() const {
    if (kind_ == Kind::CapAngle) throw DomainError("cap marginal has no null expectation");
    return log_norm_ + null_log_constant(p_);
}

double Marginal::expectation(const std::function<double(double)>& g) const {
    std::vector<double> bp{lo_, hi_, mode_, mode_ - scale_, mode_ + scale_, mode_ - 4 * scale_,
                           mode_ + 4 * scale_};
    if (kind_ == Kind::Watson) {
        bp.push_back(-mode_);
        bp.push_back(0.0);
    }
    auto f = [&](double t) {
        const double l = log_kernel(t);
        return std::isfinite(l) ? g(t) * std::exp(l - log_norm_) : 0.0;
    };
    return quad::integrate(f, support_lo_, support_hi_, bp, tight_options()).value;
}

double Marginal::moment(int k) const {
    if (k < 0 || k > 8) throw DomainError("moment order must lie in [0, 8]");
    if (k == 0) return 1.0;
    return expectation([k](double t) {
        double r = 1.0;
        for (int i = 0; i < k; ++i) r *= t;
        return r;
    });
}

quad::Rule Marginal::probability_rule(std::size_t panels, std::size_t order) const {
    quad::Rule r = quad::composite_gauss_legendre(lo_, hi_, panels, order);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double l = log_kernel(r.nodes[i]);
        r.weights[i] *= std::isfinite(l) ? std::exp(l - log_peak_) : 0.0;
        sum += r.weights[i];
    }
    for (double& w : r.weights) w /= sum;
    return r;
}

const Marginal::Table& Marginal::table() const {
    std::call_once(slot_->once, [this] {
        auto t = std::make_unique<Table>();
        const quad::Rule& g = quad::gauss_legendre(kTableOrder);
        t->edges.resize(kTablePanels + 1);
        t->cumulative.assign(kTablePanels + 1, 0.0);
        const double h = (hi_ - lo_) / static_cast<double>(kTablePanels);
        for (std::size_t j = 0; j <= kTablePanels; ++j) {
            t->edges[j] = j == kTablePanels ? hi_ : lo_ + h * static_cast<double>(j);
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < kTablePanels; ++j) {
            const double a = t->edges[j], b = t->edges[j + 1];
            const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
            double s = 0.0;
            for (std::size_t k = 0; k < kTableOrder; ++k) {
                const double l = log_kernel(c + hw * g.nodes[k]);
                if (std::isfinite(l)) s += g.weights[k] * std::exp(l - log_peak_);
            }
            acc += s * hw;
            t->cumulative[j + 1] = acc;
        }
        t->total = acc;
        for (double& v : t->cumulative) v /= acc;
        t->cumulative.back() = 1.0;
        slot_->table = std::move(t);
    });
    return *slot_->table;
}

double Marginal::cdf(double t) const {
    if (t <= lo_) return 0.0;
    if (t >= hi_) return 1.0;
    const Table& tab = table();
    const double h = (hi_ - lo_) / static_cast<double>(kTablePanels);
    auto j = static_cast<std::size_t>((t - lo_) / h);
    j = std::min(j, kTablePanels - 1);
    while (j > 0 && t < tab.edges[j]) --j;
    while (j + 1 < kTablePanels && t >= tab.edges[j + 1]) ++j;
    const quad::Rule& g = quad::gauss_legendre(kTableOrder);
    const double a = tab.edges[j];
    const double c = 0.5 * (a + t), hw = 0.5 * (t - a);
    double s = 0.0;
    for (std::size_t k = 0; k < kTableOrder; ++k) {
        const double l = log_kernel(c + hw * g.nodes[k]);
        if (std::isfinite(l)) s += g.weights[k] * std::exp(l - log_peak_);
    }
    return std::min(1.0, tab.cumulative[j] + s * hw / tab.total);
}

double Marginal::quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level outside [0, 1]");
    const Table& tab = table();
    if (u <= 0.0) return lo_;
    if (u >= 1.0) return hi_;
    const auto it = std::upper_bound(tab.cumulative.begin(), tab.cumulative.end(), u);
    std::size_t j = static_cast<std::size_t>(it - tab.cumulative.begin());
    j = std::clamp<std::size_t>(j, 1, kTablePanels) - 1;
    double a = tab.edges[j], b = tab.edges[j + 1];
    const double ca = tab.cumulative[j], cb = tab.cumulative[j + 1];
    double x = cb > ca ? a + (b - a) * (u - ca) / (cb - ca) : 0.5 * (a + b);
    // Safeguarded Newton on F(x) - u within the bracketing panel.
    for (int it2 = 0; it2 < 60; ++it2) {
        const double f = cdf(x) - u;
        if (std::abs(f) < 1e-13) break;
        if (f > 0) {
            b = x;
        } else {
            a = x;
        }
        const double dens = std::exp(log_kernel(x) - log_peak_) / tab.total;
        double next = dens > 0.0 ? x - f / dens : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (next == x || b - a < 1e-17) break;
        x = next;
    }
    return x;
}

}  // namespace unisphere
