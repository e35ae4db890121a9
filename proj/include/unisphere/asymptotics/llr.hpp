#pragma once

#include <cstddef>

namespace unisphere {

/// E_0 L_n^2 for the FvML likelihood ratio of n observations, from
///   E L_n^2 = E_U exp(n [2 log C_p(kappa) - log C_p(kappa sqrt(2(1+U)))])
/// with U the null inner-product law, integrated in log space. Throws
/// InRegimeError when the exponent passes 700 anywhere on [-1, 1].
double fvml_llr_second_moment(std::size_t n, std::size_t p, double kappa);

enum class Competitor { Rayleigh2sided, Bingham, Packing };

/// Limiting power of the classical tests against the rank-k uniform law,
/// with tau = n (1 - k/p):
///   Bingham:   1 - Phi(z_alpha - tau/2)
///   Rayleigh:  sqrt(p/k) R_n -> N(0,1), so 2 (1 - Phi(z_{alpha/2} sqrt(p/k)))
///   Packing:   (k/p) P_n - (1 - k/p)(4 log n - log log n) -> Gumbel
double competitor_low_rank_power(Competitor method, std::size_t n, std::size_t p, std::size_t k,
                                 double alpha);

}  // namespace unisphere
