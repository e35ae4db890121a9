#pragma once

#include "unisphere/core/point_set.hpp"
#include "unisphere/samplers/model.hpp"
#include "unisphere/samplers/rng.hpp"
#include "unisphere/specfun/marginal.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace unisphere {

/// Normalized standard Gaussian vector.
void sample_uniform_direction(Rng& rng, std::span<double> out);

/// X = T mu + sqrt(1 - T^2) W with T drawn from `marginal` by inversion and W
/// uniform on the unit sphere of mu's orthogonal complement.
void sample_tangent_normal(const Marginal& marginal, std::span<const double> mu, Rng& rng,
                           std::span<double> out);

/// Uniform on the sphere of the first k coordinates; the rest are zero.
void sample_lowrank(std::size_t k, Rng& rng, std::span<double> out);

/// Rademacher sign times V^{-1/alpha}, V ~ U(0,1), per coordinate, then
/// normalized. Magnitudes are handled in log space.
void sample_alpha_spherical(double alpha, Rng& rng, std::span<double> out);

/// Regular simplex with p+1 unit vertices in R^p, pairwise inner product -1/p.
///
/// Vertices are generated on demand in O(p): the centered standard basis of
/// R^{p+1} is mapped onto R^p x {0} by the Householder reflection sending
/// 1/sqrt(p+1) to e_{p+1}, so no (p+1) x p matrix is ever stored.
class SimplexFrame {
public:
    explicit SimplexFrame(std::size_t p);

    std::size_t p() const noexcept { return p_; }
    std::size_t size() const noexcept { return p_ + 1; }
    void vertex(std::size_t i, std::span<double> out) const;
    std::vector<double> vertex(std::size_t i) const;

private:
    std::size_t p_;
};

/// All p+1 vertices explicitly. Throws DomainError for p < 3.
std::vector<std::vector<double>> build_simplex_frame(std::size_t p);

/// One draw from the cap mixture; returns the cap label in [0, p].
std::size_t sample_cap_mixture(const SimplexFrame& frame, const Marginal& angle, Rng& rng,
                               std::span<double> out);

/// Draws observations from a fixed model. Holds the model's read-only
/// state (inverse-CDF tables, rotation, simplex frame) and may be shared
/// across threads; each thread supplies its own Rng.
class Sampler {
public:
    explicit Sampler(const ModelSpec& model);

    const ModelSpec& model() const noexcept { return model_; }
    std::size_t p() const noexcept { return p_; }

    void draw(Rng& rng, std::span<double> out) const;
    UnitPointSet sample(std::size_t n, Rng& rng) const;
    UnitPointSet sample(std::size_t n, RngSeed seed) const;

private:
    void rotate(std::span<double> x) const;

    ModelSpec model_;
    std::size_t p_;
    std::optional<Marginal> marginal_;
    std::optional<SimplexFrame> frame_;
    std::vector<double> mu_;
    // Two unit reflection normals; their product is the low-rank rotation.
    std::vector<double> h1_, h2_;
};

UnitPointSet sample(const ModelSpec& model, std::size_t n, RngSeed seed);

}  // namespace unisphere
