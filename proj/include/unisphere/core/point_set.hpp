#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace unisphere {

/// n observations on S^{p-1}, stored row-major. Every row is unit norm.
class UnitPointSet {
public:
    std::size_t n() const noexcept { return n_; }
    std::size_t p() const noexcept { return p_; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * p_, p_};
    }
    std::span<const double> data() const noexcept { return data_; }

    friend UnitPointSet make_unit_point_set(std::vector<double> raw, std::size_t n,
                                            std::size_t p, bool normalize);
    friend UnitPointSet apply_rotation(const UnitPointSet& s, std::span<const double> q);

private:
    UnitPointSet(std::vector<double> data, std::size_t n, std::size_t p)
        : data_(std::move(data)), n_(n), p_(p) {}

    std::vector<double> data_;
    std::size_t n_ = 0;
    std::size_t p_ = 0;
};

/// Builds a validated point set from n*p row-major values.
///
/// With `normalize` every row is rescaled to unit norm; rows with norm below
/// 1e-12 raise ZeroRow. Without it, a row whose norm deviates from 1 by more
/// than 1e-6 raises NotUnit; accepted rows are still renormalized exactly.
/// Throws BadShape unless n >= 2, p >= 2 and raw.size() == n*p.
UnitPointSet make_unit_point_set(std::vector<double> raw, std::size_t n, std::size_t p,
                                 bool normalize);

/// Sorted pairwise inner products X_i.X_j, i < j, clamped to [-1, 1].
struct InnerProductList {
    std::vector<double> values;
    std::size_t n = 0;
};

InnerProductList pairwise_inner_products(const UnitPointSet& s);

/// Same pairs as pairwise_inner_products but left in (i, j) lexicographic
/// order and unclamped. Exposed for the statistics that do not need sorting.
std::vector<double> pairwise_inner_products_unsorted(const UnitPointSet& s);

/// Replaces each row x by q x. `q` is a p x p row-major orthogonal matrix;
/// q^T q must equal the identity within 1e-8 or NotOrthogonal is thrown.
UnitPointSet apply_rotation(const UnitPointSet& s, std::span<const double> q);

/// Dot product with a fixed summation order (eight interleaved partial sums).
double dot(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace unisphere
