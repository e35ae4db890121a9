#include "unisphere/samplers/samplers.hpp"

#include "unisphere/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace unisphere {

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

void reflect(std::span<const double> h, std::span<double> x) {
    const double c = 2.0 * dot(h, x);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * h[i];
}

// Uniform unit vector orthogonal to the unit vector `axis`.
void sample_orthogonal_direction(std::span<const double> axis, Rng& rng, std::span<double> out) {
    while (true) {
        for (double& v : out) v = rng.normal();
        const double c = dot(axis, out);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * axis[i];
        const double s = norm2(out);
        if (s > 1e-20) {
            const double inv = 1.0 / std::sqrt(s);
            for (double& v : out) v *= inv;
            return;
        }
    }
}

}  // namespace

void sample_uniform_direction(Rng& rng, std::span<double> out) {
    if (out.size() < 2) throw DomainError("uniform direction needs p >= 2");
    while (true) {
        for (double& v : out) v = rng.normal();
        const double s = norm2(out);
        if (s > 0.0) {
            const double inv = 1.0 / std::sqrt(s);
            for (double& v : out) v *= inv;
            return;
        }
    }
}

void sample_tangent_normal(const Marginal& marginal, std::span<const double> mu, Rng& rng,
                           std::span<double> out) {
    if (marginal.kind() == Marginal::Kind::CapAngle) {
        throw DomainError("tangent-normal sampling needs a coordinate marginal");
    }
    if (mu.size() != out.size() || mu.size() != marginal.p()) {
        throw DomainError("tangent-normal: dimension mismatch");
    }
    const double t = std::clamp(marginal.quantile(rng.uniform()), -1.0, 1.0);
    sample_orthogonal_direction(mu, rng, out);
    const double r = std::sqrt((1.0 - t) * (1.0 + t));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = t * mu[i] + r * out[i];
}

void sample_lowrank(std::size_t k, Rng& rng, std::span<double> out) {
    if (k < 2 || k > out.size()) throw DomainError("low-rank sampling needs 2 <= k <= p");
    sample_uniform_direction(rng, out.first(k));
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(k), out.end(), 0.0);
}

void sample_alpha_spherical(double alpha, Rng& rng, std::span<double> out) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0, 2)");
    double top = -std::numeric_limits<double>::infinity();
    for (double& v : out) {
        v = -std::log(rng.uniform()) / alpha;  // log |coordinate|
        top = std::max(top, v);
    }
    double s = 0.0;
    for (double& v : out) {
        const double sign = (rng.next_u64() >> 63) != 0 ? -1.0 : 1.0;
        v = sign * std::exp(v - top);
        s += v * v;
    }
    const double inv = 1.0 / std::sqrt(s);
    for (double& v : out) v *= inv;
}

SimplexFrame::SimplexFrame(std::size_t p) : p_(p) {
    if (p < 3) throw DomainError("simplex frame needs p >= 3");
}

void SimplexFrame::vertex(std::size_t i, std::span<double> out) const {
    if (i > p_ || out.size() != p_) throw DomainError("simplex vertex: bad index or size");
    const double m = static_cast<double>(p_ + 1);
    const double scale = std::sqrt(m / static_cast<double>(p_));
    const double root = std::sqrt(m);
    // u = scale (e_i - 1/m), a zero-sum vector in R^{p+1}. With
    // v = 1/root - e_{p+1}, v.u = -u_{p+1} and v.v = 2 (1 - 1/root).
    const double last = scale * ((i == p_ ? 1.0 : 0.0) - 1.0 / m);
    const double gamma = -2.0 * last / (2.0 * (1.0 - 1.0 / root));
    for (std::size_t j = 0; j < p_; ++j) {
        const double u = scale * ((j == i ? 1.0 : 0.0) - 1.0 / m);
        out[j] = u - gamma / root;
    }
}

std::vector<double> SimplexFrame::vertex(std::size_t i) const {
    std::vector<double> v(p_);
    vertex(i, v);
    return v;
}

std::vector<std::vector<double>> build_simplex_frame(std::size_t p) {
    const SimplexFrame frame(p);
    std::vector<std::vector<double>> out;
    out.reserve(p + 1);
    for (std::size_t i = 0; i <= p; ++i) out.push_back(frame.vertex(i));
    return out;
}

std::size_t sample_cap_mixture(const SimplexFrame& frame, const Marginal& angle, Rng& rng,
                               std::span<double> out) {
    if (angle.kind() != Marginal::Kind::CapAngle || angle.p() != frame.p()) {
        throw DomainError("cap mixture needs a cap-angle marginal of matching dimension");
    }
    const auto label = static_cast<std::size_t>(rng.below(frame.size()));
    std::vector<double> v(frame.p());
    frame.vertex(label, v);
    const double theta = angle.quantile(rng.uniform());
    sample_orthogonal_direction(v, rng, out);
    const double c = std::cos(theta), s = std::sin(theta);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * v[i] + s * out[i];
    return label;
}

Sampler::Sampler(const ModelSpec& model) : model_(normalized_model(model)), p_(model_dimension(model_)) {
    std::visit(
        [this](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FvmlModel>) {
                marginal_ = Marginal::fvml(v.kappa, v.p);
                mu_ = v.mu;
            } else if constexpr (std::is_same_v<T, WatsonModel>) {
                marginal_ = Marginal::watson(v.kappa, v.p);
                mu_ = v.mu;
            } else if constexpr (std::is_same_v<T, LowRankModel>) {
                if (v.rotate) {
                    // Fixed per model so that every sampler of the same model
                    // lands on the same subspace.
                    Rng rng({mix_seed(v.p, v.k), 0x5eedULL});
                    h1_.resize(v.p);
                    h2_.resize(v.p);
                    sample_uniform_direction(rng, h1_);
                    sample_uniform_direction(rng, h2_);
                }
            } else if constexpr (std::is_same_v<T, CapMixtureModel>) {
                marginal_ = Marginal::cap_angle(v.eps, v.p);
                frame_.emplace(v.p);
            }
        },
        model_);
}

void Sampler::rotate(std::span<double> x) const {
    if (h1_.empty()) return;
    reflect(h1_, x);
    reflect(h2_, x);
}

void Sampler::draw(Rng& rng, std::span<double> out) const {
    if (out.size() != p_) throw DomainError("sampler: output size differs from p");
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, UniformModel>) {
                sample_uniform_direction(rng, out);
            } else if constexpr (std::is_same_v<T, FvmlModel> || std::is_same_v<T, WatsonModel>) {
                if (v.kappa == 0.0) {
                    sample_uniform_direction(rng, out);
                } else {
                    sample_tangent_normal(*marginal_, mu_, rng, out);
                }
            } else if constexpr (std::is_same_v<T, LowRankModel>) {
                sample_lowrank(v.k, rng, out);
                rotate(out);
            } else if constexpr (std::is_same_v<T, AlphaSphericalModel>) {
                sample_alpha_spherical(v.alpha, rng, out);
            } else {
                sample_cap_mixture(*frame_, *marginal_, rng, out);
            }
        },
        model_);
}

UnitPointSet Sampler::sample(std::size_t n, Rng& rng) const {
    std::vector<double> raw(n * p_);
    for (std::size_t i = 0; i < n; ++i) draw(rng, std::span<double>(raw).subspan(i * p_, p_));
    return make_unit_point_set(std::move(raw), n, p_, true);
}

UnitPointSet Sampler::sample(std::size_t n, RngSeed seed) const {
    Rng rng(seed);
    return sample(n, rng);
}

UnitPointSet sample(const ModelSpec& model, std::size_t n, RngSeed seed) {
    return Sampler(model).sample(n, seed);
}

}  // namespace unisphere
