#pragma once

#include "unisphere/specfun/quadrature.hpp"

#include <cstddef>
#include <functional>
#include <memory>

namespace unisphere {

/// One-dimensional law on a bounded interval with a log-concave-ish kernel,
/// used for the projection T = mu.X of rotationally symmetric models and for
/// the polar angle inside a spherical cap.
///
///   fvml(kappa, p):   kernel exp(kappa t)   (1 - t^2)^{(p-3)/2} on [-1, 1]
///   watson(kappa, p): kernel exp(kappa t^2) (1 - t^2)^{(p-3)/2} on [-1, 1]
///   cap_angle(eps, p): kernel sin(theta)^{p-2} on [0, eps]
///
/// The bulk window is where the kernel is within e^{-46} of its peak; all
/// tabulated rules live there. Normalizers and moments use adaptive
/// Gauss-Kronrod on the whole support seeded at the mode. The inverse-CDF
/// table is built on first use and is read-only afterwards, so a Marginal
/// may be shared across threads.
class Marginal {
public:
    enum class Kind { Fvml, Watson, CapAngle };

    static Marginal fvml(double kappa, std::size_t p);
    static Marginal watson(double kappa, std::size_t p);
    static Marginal cap_angle(double eps, std::size_t p);

    Kind kind() const noexcept { return kind_; }
    std::size_t p() const noexcept { return p_; }
    double kappa() const noexcept { return param_; }

    double log_kernel(double t) const noexcept;
    double log_normalizer() const noexcept { return log_norm_; }
    double log_density(double t) const noexcept { return log_kernel(t) - log_norm_; }

    /// log E_0 exp(kappa f(T)) for T the null coordinate law (FvML, Watson).
    double log_null_expectation() const;

    /// E g(T) by adaptive quadrature.
    double expectation(const std::function<double(double)>& g) const;
    /// E T^k, 0 <= k <= 8.
    double moment(int k) const;

    double mode() const noexcept { return mode_; }
    double scale() const noexcept { return scale_; }
    double window_lower() const noexcept { return lo_; }
    double window_upper() const noexcept { return hi_; }
    double support_lower() const noexcept { return support_lo_; }
    double support_upper() const noexcept { return support_hi_; }

    /// Composite Gauss-Legendre rule on the window whose weights are
    /// probabilities (they sum to one).
    quad::Rule probability_rule(std::size_t panels, std::size_t order) const;

    double cdf(double t) const;
    /// Inverse CDF with CDF residual below 1e-10.
    double quantile(double u) const;

private:
    struct Table;
    struct TableSlot;

    Marginal(Kind kind, double param, std::size_t p);
    const Table& table() const;

    Kind kind_;
    double param_;
    std::size_t p_;
    double exponent_;  // power of (1 - t^2), or of sin(theta)
    double support_lo_, support_hi_;
    double mode_ = 0.0;
    double scale_ = 1.0;
    double lo_ = 0.0, hi_ = 0.0;
    double log_peak_ = 0.0;
    double log_norm_ = 0.0;
    std::shared_ptr<TableSlot> slot_;
};

/// Watson projection law; see Marginal::watson. Named for the 1-D density
/// handle used by samplers and quadrature.
inline Marginal watson_marginal(double kappa, std::size_t p) { return Marginal::watson(kappa, p); }

}  // namespace unisphere
