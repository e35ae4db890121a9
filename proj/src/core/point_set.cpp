#include "unisphere/core/point_set.hpp"

#include "unisphere/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace unisphere {

namespace {

constexpr double kZeroRowNorm = 1e-12;
constexpr double kUnitTolerance = 1e-6;
constexpr double kOrthogonalTolerance = 1e-8;

// Pair blocks keep a tile of rows resident in cache while the inner loop
// streams the partner rows.
constexpr std::size_t kBlock = 32;

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    const std::size_t len = a.size();
    double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t k = 0;
    for (; k + 8 <= len; k += 8) {
        for (std::size_t l = 0; l < 8; ++l) acc[l] += a[k + l] * b[k + l];
    }
    for (std::size_t l = 0; k < len; ++k, ++l) acc[l] += a[k] * b[k];
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

UnitPointSet make_unit_point_set(std::vector<double> raw, std::size_t n, std::size_t p,
                                 bool normalize) {
    if (n < 2 || p < 2) {
        throw BadShape("point set needs n >= 2 and p >= 2, got n=" + std::to_string(n) +
                       " p=" + std::to_string(p));
    }
    if (raw.size() != n * p) {
        throw BadShape("expected " + std::to_string(n * p) + " values, got " +
                       std::to_string(raw.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::span<double> row(raw.data() + i * p, p);
        double norm = std::sqrt(dot(row, row));
        if (!std::isfinite(norm)) {
            throw BadShape("row " + std::to_string(i) + " contains a non-finite value");
        }
        if (norm < kZeroRowNorm) {
            throw ZeroRow(i, "row " + std::to_string(i) + " has zero norm");
        }
        if (!normalize && std::abs(norm - 1.0) > kUnitTolerance) {
            throw NotUnit(i, "row " + std::to_string(i) + " has norm " + std::to_string(norm) +
                                 ", expected 1 (pass normalize to rescale)");
        }
        for (double& v : row) v = std::clamp(v / norm, -1.0, 1.0);
    }
    return UnitPointSet(std::move(raw), n, p);
}

std::vector<double> pairwise_inner_products_unsorted(const UnitPointSet& s) {
    const std::size_t n = s.n();
    std::vector<double> out(n * (n - 1) / 2);
    // Offset of pair (i, i+1) in lexicographic order.
    auto offset = [n](std::size_t i) { return i * (2 * n - i - 1) / 2; };
    for (std::size_t ib = 0; ib < n; ib += kBlock) {
        const std::size_t ie = std::min(n, ib + kBlock);
        for (std::size_t jb = ib; jb < n; jb += kBlock) {
            const std::size_t je = std::min(n, jb + kBlock);
            for (std::size_t i = ib; i < ie; ++i) {
                const auto xi = s.row(i);
                for (std::size_t j = std::max(jb, i + 1); j < je; ++j) {
                    out[offset(i) + (j - i - 1)] = dot(xi, s.row(j));
                }
            }
        }
    }
    return out;
}

InnerProductList pairwise_inner_products(const UnitPointSet& s) {
    InnerProductList list;
    list.n = s.n();
    list.values = pairwise_inner_products_unsorted(s);
    for (double& v : list.values) v = std::clamp(v, -1.0, 1.0);
    std::stable_sort(list.values.begin(), list.values.end());
    return list;
}

UnitPointSet apply_rotation(const UnitPointSet& s, std::span<const double> q) {
    const std::size_t p = s.p();
    if (q.size() != p * p) {
        throw BadShape("rotation must be " + std::to_string(p) + "x" + std::to_string(p));
    }
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a; b < p; ++b) {
            double g = 0.0;
            for (std::size_t k = 0; k < p; ++k) g += q[k * p + a] * q[k * p + b];
            const double target = a == b ? 1.0 : 0.0;
            if (std::abs(g - target) > kOrthogonalTolerance) {
                throw NotOrthogonal("q^T q deviates from identity at (" + std::to_string(a) +
                                    "," + std::to_string(b) + ")");
            }
        }
    }
    std::vector<double> out(s.n() * p);
    for (std::size_t i = 0; i < s.n(); ++i) {
        const auto x = s.row(i);
        for (std::size_t r = 0; r < p; ++r) {
            out[i * p + r] = dot(q.subspan(r * p, p), x);
        }
    }
    for (std::size_t i = 0; i < s.n(); ++i) {
        std::span<double> row(out.data() + i * p, p);
        const double norm = std::sqrt(dot(row, row));
        for (double& v : row) v = std::clamp(v / norm, -1.0, 1.0);
    }
    return UnitPointSet(std::move(out), s.n(), p);
}

}  // namespace unisphere
