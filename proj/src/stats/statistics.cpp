#include "unisphere/stats/statistics.hpp"

#include "unisphere/errors.hpp"
#include "unisphere/specfun/special.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace unisphere {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

double packing_offset(std::size_t n) {
    if (n < 3) throw DomainError("packing statistic needs n >= 3");
    const double ln = std::log(static_cast<double>(n));
    return -4.0 * ln + std::log(ln);
}

double null_sup(std::span<const double> sorted, std::size_t p) {
    return sup_distance(sorted, [p](double t) { return null_cdf_m(t, p); });
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::SupDistance: return "SupDistance";
        case Method::Rayleigh: return "Rayleigh";
        case Method::Bingham: return "Bingham";
        case Method::Packing: return "Packing";
        case Method::Projection: return "Projection";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    const std::string k = lower(s);
    if (k == "supdistance" || k == "sup" || k == "t") return Method::SupDistance;
    if (k == "rayleigh" || k == "r") return Method::Rayleigh;
    if (k == "bingham" || k == "b") return Method::Bingham;
    if (k == "packing" || k == "p") return Method::Packing;
    if (k == "projection" || k == "d") return Method::Projection;
    throw DomainError("unknown method '" + s + "'");
}

std::string tail_name(Tail t) { return t == Tail::Upper ? "upper" : "two-sided"; }

Tail parse_tail(const std::string& s) {
    const std::string k = lower(s);
    if (k == "upper") return Tail::Upper;
    if (k == "two-sided" || k == "twosided" || k == "two_sided" || k == "both") return Tail::TwoSided;
    throw BadTail("unknown tail '" + s + "'");
}

double sup_distance(std::span<const double> sorted, const std::function<double(double)>& cdf) {
    const std::size_t N = sorted.size();
    if (N == 0) throw DomainError("sup distance of an empty sample");
    const double inv = 1.0 / static_cast<double>(N);
    double best = 0.0;
    std::size_t first = 0;
    while (first < N) {
        std::size_t last = first;
        while (last + 1 < N && sorted[last + 1] == sorted[first]) ++last;
        const double f = cdf(sorted[first]);
        const double above = static_cast<double>(last + 1) * inv - f;
        const double below = f - static_cast<double>(first) * inv;
        best = std::max({best, above, below});
        first = last + 1;
    }
    return std::min(best, 1.0);
}

double statistic_T(const UnitPointSet& s) { return statistic_T(pairwise_inner_products(s), s.p()); }

double statistic_T(const InnerProductList& list, std::size_t p) { return null_sup(list.values, p); }

double statistic_R(const UnitPointSet& s) {
    const auto pairs = pairwise_inner_products_unsorted(s);
    double sum = 0.0;
    for (double v : pairs) sum += v;
    return std::sqrt(2.0 * static_cast<double>(s.p())) / static_cast<double>(s.n()) * sum;
}

double statistic_B(const UnitPointSet& s) {
    const auto pairs = pairwise_inner_products_unsorted(s);
    const double ip = 1.0 / static_cast<double>(s.p());
    double sum = 0.0;
    for (double v : pairs) sum += v * v - ip;
    return static_cast<double>(s.p()) / static_cast<double>(s.n()) * sum;
}

double statistic_P(const UnitPointSet& s) {
    const double offset = packing_offset(s.n());
    const auto pairs = pairwise_inner_products_unsorted(s);
    double top = 0.0;
    for (double v : pairs) top = std::max(top, std::min(v * v, 1.0));
    return static_cast<double>(s.p()) * top + offset;
}

double statistic_projection_D(const UnitPointSet& s, std::span<const double> direction) {
    if (direction.size() != s.p()) throw BadShape("projection direction has wrong dimension");
    double norm = 0.0;
    for (double v : direction) norm += v * v;
    if (std::abs(std::sqrt(norm) - 1.0) > 1e-8) throw DomainError("projection direction must be unit");
    std::vector<double> proj(s.n());
    for (std::size_t i = 0; i < s.n(); ++i) proj[i] = std::clamp(dot(s.row(i), direction), -1.0, 1.0);
    std::sort(proj.begin(), proj.end());
    return null_sup(proj, s.p());
}

Statistics all_statistics(const UnitPointSet& s, bool with_T) {
    auto pairs = pairwise_inner_products_unsorted(s);
    const double p = static_cast<double>(s.p());
    const double n = static_cast<double>(s.n());
    double sum = 0.0, sq = 0.0, top = 0.0;
    for (double& v : pairs) {
        v = std::clamp(v, -1.0, 1.0);
        sum += v;
        sq += v * v - 1.0 / p;
        top = std::max(top, v * v);
    }
    Statistics out;
    out.R = std::sqrt(2.0 * p) / n * sum;
    out.B = p / n * sq;
    out.P = s.n() >= 3 ? p * top + packing_offset(s.n()) : std::numeric_limits<double>::quiet_NaN();
    if (with_T) {
        std::stable_sort(pairs.begin(), pairs.end());
        out.T = null_sup(pairs, s.p());
    } else {
        out.T = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

double standardize(Method m, double statistic, std::size_t n) {
    const double nd = static_cast<double>(n);
    switch (m) {
        case Method::SupDistance: return std::sqrt(nd * (nd - 1.0) / 2.0) * statistic;
        case Method::Projection: return std::sqrt(nd) * statistic;
        default: return statistic;
    }
}

}  // namespace unisphere
