#include "unisphere/specfun/quadrature.hpp"

#include "unisphere/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <utility>

namespace unisphere::quad {

namespace {

// Kronrod 21-point abscissae and weights; every other node (odd index) is a
// node of the embedded 10-point Gauss rule.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707, 0.142775938577060080797094273138717,
    0.147739104901338491374841515972068, 0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double rk = fc * kWgk[10];
    double rg = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        rk += kWgk[j] * s;
        if (j % 2 == 1) rg += kWg[j / 2] * s;
    }
    const double value = rk * h;
    const double error = std::abs((rk - rg) * h);
    return {a, b, value, error};
}

}  // namespace

const Rule& gauss_legendre(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, Rule> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");

    // P_n(x) and P_{n-1}(x) by the three-term recurrence.
    auto legendre = [n](double x) {
        double prev = 1.0, cur = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
            prev = cur;
            cur = next;
        }
        return std::pair{cur, prev};
    };

    Rule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 2.0);
    if (n > 1) {
        for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(n) + 0.5));
            double deriv = 1.0;
            for (int iter = 0; iter < 100; ++iter) {
                auto [pn, pm] = legendre(x);
                deriv = static_cast<double>(n) * (x * pn - pm) / (x * x - 1.0);
                const double dx = pn / deriv;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            auto [pn, pm] = legendre(x);
            deriv = static_cast<double>(n) * (x * pn - pm) / (x * x - 1.0);
            const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            r.nodes[i] = -x;
            r.nodes[n - 1 - i] = x;
            r.weights[i] = w;
            r.weights[n - 1 - i] = w;
        }
        if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    }
    return cache.emplace(n, std::move(r)).first->second;
}

Rule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t order) {
    const Rule& g = gauss_legendre(order);
    Rule out;
    out.nodes.reserve(panels * order);
    out.weights.reserve(panels * order);
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t k = 0; k < panels; ++k) {
        const double lo = a + width * static_cast<double>(k);
        const double hi = k + 1 == panels ? b : lo + width;
        const double c = 0.5 * (lo + hi);
        const double h = 0.5 * (hi - lo);
        for (std::size_t j = 0; j < order; ++j) {
            out.nodes.push_back(c + h * g.nodes[j]);
            out.weights.push_back(h * g.weights[j]);
        }
    }
    return out;
}

Result integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints, const Options& opt) {
    Result res;
    if (!(a < b)) return res.converged = true, res;

    std::vector<double> edges{a, b};
    for (double x : breakpoints) {
        if (x > a && x < b) edges.push_back(x);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<Panel> heap;
    double total = 0.0;
    double err = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        Panel p = kronrod(f, edges[k], edges[k + 1]);
        res.evaluations += 21;
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    while (true) {
        const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
        if (err <= tol) {
            res.converged = true;
            break;
        }
        if (res.evaluations + 42 > opt.max_evaluations) break;
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        Panel left = kronrod(f, worst.a, mid);
        Panel right = kronrod(f, mid, worst.b);
        res.evaluations += 42;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum from the panels to shed accumulated update rounding.
    double sum = 0.0, esum = 0.0;
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& p : panels) {
        sum += p.value;
        esum += p.error;
    }
    res.value = sum;
    res.error = esum;
    return res;
}

double log_integrate(const std::function<double(double)>& log_f, double a, double b,
                     double anchor, std::span<const double> breakpoints, const Options& opt) {
    const double shift = log_f(anchor);
    if (!std::isfinite(shift)) throw DomainError("log_integrate: anchor has non-finite log density");
    auto f = [&](double x) {
        const double l = log_f(x);
        return std::isfinite(l) ? std::exp(l - shift) : 0.0;
    };
    std::vector<double> bp(breakpoints.begin(), breakpoints.end());
    bp.push_back(anchor);
    const Result r = integrate(f, a, b, bp, opt);
    return shift + std::log(r.value);
}

}  // namespace unisphere::quad
