#pragma once

#include "unisphere/samplers/model.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace unisphere {

/// u -> P(sqrt(p) X.Y <= u) for X, Y independent draws from a FvML, Watson
/// or low-rank model.
///
/// FvML and Watson use the tangent decomposition: with T = mu.X,
/// T' = mu.Y, the tangent parts are independent uniform on S^{p-2}, so
///   P(X.Y <= s) = E m_{p-1}((s - T T') / sqrt((1 - T^2)(1 - T'^2))),
/// integrated over a tensor Gauss-Legendre rule on the bulk of the marginal.
/// Low rank is exact: m_k(u / sqrt(p)).
class AltInnerCdf {
public:
    explicit AltInnerCdf(const ModelSpec& model, std::size_t panels = 8, std::size_t order = 10);

    double operator()(double u) const;
    /// m_p(u / sqrt(p)), the same quantity under uniformity.
    double null_cdf(double u) const;
    std::size_t p() const noexcept { return p_; }

private:
    struct Node {
        double a, b, w;  // s -> m_{p-1}((s - a) / b), weight w
    };

    std::size_t p_;
    std::size_t k_ = 0;  // low rank; 0 for the quadrature models
    std::vector<Node> nodes_;
};

double alt_inner_cdf(const ModelSpec& model, double u);

struct DistanceResult {
    double d = 0.0;      // sup_u |alt(u) - null(u)|
    double argmax = 0.0; // location of the sup on the sqrt(p) X.Y scale
};

/// Sup distance between the alternative and null inner-product laws.
/// 4096-point grid over the window where either CDF lies in
/// [1e-12, 1 - 1e-12], then golden-section refinement around the best
/// grid point to 1e-8 in u.
DistanceResult distance_d(const ModelSpec& model);

/// Sup over jumps of |empirical CDF of `pairs` sampled X.Y - m_p|. Pairs
/// are drawn in blocks of 1024, block b from stream (seed, b).
double estimate_distance_d_mc(const ModelSpec& model, std::size_t pairs, std::uint64_t seed,
                              std::size_t threads = 0);

}  // namespace unisphere
