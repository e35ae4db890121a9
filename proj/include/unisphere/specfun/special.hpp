#pragma once

#include <cstddef>

namespace unisphere {

/// Regularized incomplete beta I_x(a, b) for x in [0, 1], 0 < a, b <= 1e7.
///
/// Continued fraction (modified Lentz) with complement switching at
/// x > a/(a+b). The prefactor x^a (1-x)^b / B(a,b) is assembled in log space
/// around the mode a/(a+b) so that a = b ~ 5e3 neither overflows nor loses
/// digits to cancellation of large log-Gamma values.
double regularized_incomplete_beta(double x, double a, double b);

/// log B(a, b), accurate for large arguments.
double log_beta(double a, double b);

/// CDF of X.Y for X, Y independent uniform on S^{p-1}:
/// m(t) = I_{(1+t)/2}((p-1)/2, (p-1)/2). Arguments outside [-1, 1] by at
/// most 1e-12 are clamped; larger deviations throw DomainError.
double null_cdf_m(double t, std::size_t p);

/// Density of X.Y under uniformity, Gamma(p/2)/(sqrt(pi) Gamma((p-1)/2)) (1-t^2)^((p-3)/2).
double null_density(double t, std::size_t p);

/// log of Gamma(p/2) / (sqrt(pi) Gamma((p-1)/2)).
double null_log_constant(std::size_t p);

/// P(sup |B_t| > x) for a standard Brownian bridge. Returns 1 at x = 0,
/// throws DomainError for x < 0.
double kolmogorov_sf(double x);
double kolmogorov_cdf(double x);

/// c with kolmogorov_sf(c) = alpha, alpha in (0, 1).
double kolmogorov_quantile(double alpha);

double normal_pdf(double u) noexcept;
double normal_cdf(double u) noexcept;
/// Upper tail 1 - Phi(u) without cancellation.
double normal_sf(double u) noexcept;
/// Phi^{-1}(q); DomainError unless 0 < q < 1.
double normal_quantile(double q);

/// Limiting null CDF of the packing statistic, exp(-(8 pi)^{-1/2} e^{-x/2}).
double packing_gumbel_cdf(double x) noexcept;
double packing_gumbel_sf(double x) noexcept;
/// x with packing_gumbel_sf(x) = alpha: -2 log(-sqrt(8 pi) log(1 - alpha)).
double packing_gumbel_quantile(double alpha);

/// log C_p(kappa), where C_p(kappa)^{-1} = E exp(kappa <mu, X>) for X
/// uniform on S^{p-1}. Exactly 0 at kappa = 0. Requires p >= 3.
double fvml_log_normalizer(double kappa, std::size_t p);

}  // namespace unisphere
