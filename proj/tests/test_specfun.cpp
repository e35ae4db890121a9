#include "unisphere/errors.hpp"
#include "unisphere/specfun/marginal.hpp"
#include "unisphere/specfun/quadrature.hpp"
#include "unisphere/specfun/special.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace unisphere;

namespace {

// Kolmogorov survival function straight from the alternating series.
double series_sf(double x) {
    long double s = 0;
    for (int k = 1; k <= 200; ++k) s += (k % 2 ? 2.0L : -2.0L) * std::exp(-2.0L * k * k * x * x);
    return static_cast<double>(s);
}

// log C_p(kappa) = -log sum_k (kappa^2/4)^k / (k! (nu+1)_k), nu = p/2 - 1,
// from the power series of I_nu; the Gamma prefactors cancel exactly.
double log_normalizer_series(double kappa, std::size_t p) {
    const long double nu = 0.5L * p - 1.0L;
    const long double q = 0.25L * kappa * kappa;
    long double term = 1, sum = 1;
    for (int k = 1; k < 100000; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        if (term < 1e-22L * sum) break;
    }
    return -static_cast<double>(std::log(sum));
}

// Simpson rule in long double on the null density of X.Y.
double null_cdf_simpson(double t, std::size_t p) {
    const long double e = 0.5L * (p - 3.0L);
    const long double logc = std::lgamma(0.5L * p) - std::lgamma(0.5L * (p - 1.0L)) - 0.5L * std::log(std::numbers::pi_v<long double>);
    auto f = [&](long double x) { return x <= -1 || x >= 1 ? 0.0L : std::exp(logc + e * std::log1p(-x * x)); };
    const int m = 400000;
    const long double h = (t + 1.0L) / m;
    long double s = f(-1.0L) + f(t);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0L : 2.0L) * f(-1.0L + i * h);
    return static_cast<double>(s * h / 3.0L);
}

}  // namespace

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
    for (std::size_t n : {1, 2, 5, 10, 16, 40}) {
        const auto& r = quad::gauss_legendre(n);
        for (std::size_t k = 0; k < 2 * n; ++k) {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], static_cast<double>(k));
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1.0);
            EXPECT_NEAR(s, exact, 1e-14) << "n=" << n << " k=" << k;
        }
    }
}

TEST(Quadrature, AdaptiveHandlesEndpointSingularity) {
    const auto r = quad::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-12);
}

TEST(Quadrature, LogIntegrateNarrowGaussian) {
    const double s = 1e-4;
    const double bp[] = {0.3 - 12 * s, 0.3 - s, 0.3 + s, 0.3 + 12 * s};
    const double v = quad::log_integrate([s](double x) { return -0.5 * (x - 0.3) * (x - 0.3) / (s * s); },
                                         -1.0, 1.0, 0.3, bp);
    EXPECT_NEAR(v, std::log(s * std::sqrt(2.0 * std::numbers::pi)), 1e-12);
}

TEST(IncompleteBeta, TrivialValues) {
    for (double a : {0.5, 1.0, 7.0, 49.5, 4999.5}) EXPECT_EQ(regularized_incomplete_beta(0.5, a, a), 0.5);
    EXPECT_NEAR(regularized_incomplete_beta(0.75, 1, 1), 0.75, 1e-15);
    EXPECT_EQ(regularized_incomplete_beta(0.0, 2, 3), 0.0);
    EXPECT_EQ(regularized_incomplete_beta(1.0, 2, 3), 1.0);
}

TEST(IncompleteBeta, AgreesWithBoost) {
    const double shapes[][2] = {{49.5, 49.5}, {0.5, 3.0}, {2.0, 7.5}, {300, 300}, {4999.5, 4999.5}, {1e6, 1e6}};
    for (const auto& ab : shapes) {
        for (double x : {1e-4, 0.1, 0.3, 0.49, 0.499, 0.5001, 0.6, 0.9, 0.9999}) {
            EXPECT_NEAR(regularized_incomplete_beta(x, ab[0], ab[1]), boost::math::ibeta(ab[0], ab[1], x), 1e-12)
                << "a=" << ab[0] << " b=" << ab[1] << " x=" << x;
        }
    }
}

TEST(IncompleteBeta, MatchesQuadratureAtSixTenths) {
    // m_p(0.2) with p = 100 is I_0.6(49.5, 49.5).
    EXPECT_NEAR(regularized_incomplete_beta(0.6, 49.5, 49.5), null_cdf_simpson(0.2, 100), 1e-10);
}

TEST(IncompleteBeta, DomainErrors) {
    EXPECT_THROW(regularized_incomplete_beta(-0.1, 1, 1), DomainError);
    EXPECT_THROW(regularized_incomplete_beta(0.5, 0, 1), DomainError);
    EXPECT_THROW(regularized_incomplete_beta(0.5, 1, 2e7), DomainError);
}

TEST(NullCdf, Examples) {
    for (std::size_t p : {2, 3, 10, 600, 10000}) EXPECT_NEAR(null_cdf_m(0.0, p), 0.5, 1e-15);
    EXPECT_NEAR(null_cdf_m(0.5, 3), 0.75, 1e-15);
    EXPECT_NEAR(null_cdf_m(0.1, 100), null_cdf_simpson(0.1, 100), 1e-10);
    EXPECT_EQ(null_cdf_m(-1.0, 50), 0.0);
    EXPECT_EQ(null_cdf_m(1.0, 50), 1.0);
}

TEST(NullCdf, ClampsTinyOvershootOnly) {
    EXPECT_EQ(null_cdf_m(1.0 + 5e-13, 10), 1.0);
    EXPECT_THROW(null_cdf_m(1.0 + 1e-9, 10), DomainError);
    EXPECT_THROW(null_cdf_m(0.0, 1), DomainError);
}

TEST(NullCdf, MonotoneAndSymmetric) {
    for (std::size_t p : {2, 3, 4, 80, 2000}) {
        double prev = 0.0;
        for (int i = -200; i <= 200; ++i) {
            const double t = i / 200.0;
            const double m = null_cdf_m(t, p);
            EXPECT_GE(m, prev);
            EXPECT_NEAR(m + null_cdf_m(-t, p), 1.0, 1e-14);
            prev = m;
        }
    }
}

TEST(NullCdf, DensityIntegratesToCdf) {
    const std::size_t p = 37;
    const auto r = quad::integrate([p](double t) { return null_density(t, p); }, -1.0, 0.3);
    EXPECT_NEAR(r.value, null_cdf_m(0.3, p), 1e-12);
}

TEST(NullCdf, GaussianLimitRate) {
    auto gap = [](std::size_t p) {
        double worst = 0;
        for (int i = 0; i <= 1000; ++i) {
            const double u = -5.0 + i * 0.01;
            worst = std::max(worst, std::abs(null_cdf_m(u / std::sqrt(double(p)), p) - normal_cdf(u)));
        }
        return worst;
    };
    const double g100 = gap(100), g400 = gap(400);
    EXPECT_LE(g400, 0.5 * g100) << g100 << " " << g400;
}

TEST(Kolmogorov, SurvivalValues) {
    // The series at 1.36 is 0.049486; 1.36 is the rounded 5% point.
    EXPECT_NEAR(kolmogorov_sf(1.36), series_sf(1.36), 1e-14);
    EXPECT_NEAR(kolmogorov_sf(1.36), 0.0494859, 1e-7);
    EXPECT_NEAR(kolmogorov_sf(3.0) / (2.0 * std::exp(-18.0)), 1.0, 1e-12);
    EXPECT_LT(kolmogorov_sf(40.0), 1e-300);
    EXPECT_EQ(kolmogorov_sf(0.0), 1.0);
    EXPECT_THROW(kolmogorov_sf(-0.1), DomainError);
}

TEST(Kolmogorov, BranchesAgreeWithSeries) {
    for (double x = 0.3; x < 3.0; x += 0.01) {
        EXPECT_NEAR(kolmogorov_sf(x), series_sf(x), 1e-13) << x;
        EXPECT_NEAR(kolmogorov_cdf(x) + kolmogorov_sf(x), 1.0, 1e-15);
    }
}

TEST(Kolmogorov, StrictlyDecreasing) {
    double prev = 1.0;
    for (double x = 0.3; x < 4.0; x += 0.05) {
        const double s = kolmogorov_sf(x);
        EXPECT_LT(s, prev);
        prev = s;
    }
}

TEST(Kolmogorov, MeanOfSupIsSqrtHalfPiLog2) {
    const auto r = quad::integrate([](double x) { return x == 0 ? 1.0 : kolmogorov_sf(x); }, 0.0, 10.0);
    EXPECT_NEAR(r.value, std::sqrt(std::numbers::pi / 2.0) * std::numbers::ln2, 1e-10);
}

TEST(Kolmogorov, Quantile) {
    EXPECT_NEAR(kolmogorov_quantile(0.05), 1.36, 0.005);
    for (double a : {0.01, 0.05, 0.10}) EXPECT_NEAR(kolmogorov_sf(kolmogorov_quantile(a)), a, 1e-12);
    // Bisection on the raw series as an independent root.
    double lo = 0.5, hi = 3.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (series_sf(mid) > 0.10 ? lo : hi) = mid;
    }
    EXPECT_NEAR(kolmogorov_quantile(0.10), lo, 1e-10);
    for (double x = 0.5; x <= 2.5; x += 0.1) EXPECT_NEAR(kolmogorov_quantile(kolmogorov_sf(x)), x, 1e-9);
    EXPECT_THROW(kolmogorov_quantile(0.0), DomainError);
    EXPECT_THROW(kolmogorov_quantile(1.0), DomainError);
}

TEST(Normal, Values) {
    EXPECT_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_pdf(0.0), 0.3989422804014327, 1e-16);
    EXPECT_NEAR(normal_cdf(normal_quantile(0.975)), 0.975, 1e-12);
    EXPECT_EQ(normal_quantile(0.5), 0.0);
    EXPECT_THROW(normal_quantile(0.0), DomainError);
    EXPECT_THROW(normal_quantile(1.0), DomainError);
}

TEST(Normal, AgreesWithBoost) {
    for (double u = -8.0; u <= 8.0; u += 0.125) {
        EXPECT_NEAR(normal_cdf(u), 0.5 * boost::math::erfc(-u / std::numbers::sqrt2), 1e-15);
    }
    for (double q : {1e-12, 1e-6, 0.001, 0.02, 0.0243, 0.1, 0.3, 0.5, 0.7, 0.975, 0.999999}) {
        const double oracle = -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
        EXPECT_NEAR(normal_quantile(q), oracle, 1e-12 * std::max(1.0, std::abs(oracle))) << q;
    }
}

TEST(Packing, Quantile) {
    // Bisection on the stated CDF.
    double lo = -10, hi = 20;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (packing_gumbel_cdf(mid) < 0.95 ? lo : hi) = mid;
    }
    EXPECT_NEAR(packing_gumbel_quantile(0.05), lo, 1e-10);
    EXPECT_NEAR(packing_gumbel_quantile(0.05), 2.716, 5e-4);
    for (double a : {0.01, 0.05, 0.1}) {
        EXPECT_NEAR(packing_gumbel_cdf(packing_gumbel_quantile(a)), 1.0 - a, 1e-12);
        EXPECT_NEAR(packing_gumbel_sf(packing_gumbel_quantile(a)), a, 1e-12);
    }
    double prev = packing_gumbel_quantile(0.5);
    for (double a : {0.6, 0.8, 0.9, 0.99, 0.999999}) {
        const double x = packing_gumbel_quantile(a);
        EXPECT_LT(x, prev);
        prev = x;
    }
}

TEST(FvmlNormalizer, ZeroAndErrors) {
    EXPECT_EQ(fvml_log_normalizer(0.0, 50), 0.0);
    EXPECT_THROW(fvml_log_normalizer(1.0, 2), DomainError);
    EXPECT_THROW(fvml_log_normalizer(-1.0, 10), DomainError);
}

TEST(FvmlNormalizer, MatchesBesselSeries) {
    for (std::size_t p : {3, 5, 50, 200, 1000, 3000}) {
        for (double k : {0.01, 1.0, 3.0, 10.0, p / 4.0, double(p)}) {
            EXPECT_NEAR(fvml_log_normalizer(k, p), log_normalizer_series(k, p), 1e-10) << p << " " << k;
        }
    }
}

TEST(FvmlNormalizer, MatchesBoostBessel) {
    for (std::size_t p : {3, 10, 50}) {
        for (double k : {0.5, 3.0, 20.0}) {
            const double nu = 0.5 * p - 1.0;
            const double oracle =
                -(std::lgamma(0.5 * p) + nu * std::log(2.0 / k) + std::log(boost::math::cyl_bessel_i(nu, k)));
            EXPECT_NEAR(fvml_log_normalizer(k, p), oracle, 1e-10);
        }
    }
}

TEST(FvmlNormalizer, SecondRuleCrossCheck) {
    const std::size_t p = 200;
    const double k = 10.0;
    const auto rule = quad::composite_gauss_legendre(-1.0, 1.0, 400, 20);
    const double e = 0.5 * (p - 3.0);
    double s = 0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double t = rule.nodes[i];
        s += rule.weights[i] * std::exp(null_log_constant(p) + k * t + e * std::log1p(-t * t));
    }
    EXPECT_NEAR(fvml_log_normalizer(k, p), -std::log(s), 1e-9);
}

TEST(FvmlNormalizer, QuadraticTermWithCubicRemainder) {
    // |log C_p + k^2/(2p)| <= k^4 / (2 p^3) for k <= p.
    for (std::size_t p : {50, 200, 1000}) {
        for (double k : {1.0, 3.0, 10.0, p / 4.0}) {
            const double dev = std::abs(fvml_log_normalizer(k, p) + k * k / (2.0 * p));
            EXPECT_LE(dev, std::pow(k, 4) / (2.0 * std::pow(double(p), 3))) << p << " " << k;
        }
    }
}

TEST(Marginal, NullMomentsAreBetaMoments) {
    for (std::size_t p : {3, 10, 100, 1000}) {
        const auto m = Marginal::fvml(0.0, p);
        EXPECT_NEAR(m.moment(2), 1.0 / p, 1e-12 / p);
        EXPECT_NEAR(m.moment(4), 3.0 / (p * (p + 2.0)), 1e-12 / (p * p));
        EXPECT_NEAR(m.moment(1), 0.0, 1e-14);
    }
}

TEST(Marginal, FvmlMeanIsBesselRatio) {
    for (auto [p, k] : {std::pair<std::size_t, double>{5, 0.7}, {5, 5.0}, {40, 0.7}, {40, 60.0}, {300, 5.0}, {300, 60.0}}) {
        {
            const double nu = 0.5 * p - 1.0;
            const double ratio = boost::math::cyl_bessel_i(nu + 1.0, k) / boost::math::cyl_bessel_i(nu, k);
            EXPECT_NEAR(Marginal::fvml(k, p).moment(1), ratio, 1e-11) << p << " " << k;
        }
    }
}

TEST(Marginal, WatsonNormalizerIsKummer) {
    // E_0 exp(k T^2) = 1F1(1/2; p/2; k) because T^2 ~ Beta(1/2, (p-1)/2).
    for (std::size_t p : {3, 20, 200, 600}) {
        for (double k : {0.5, 10.0, p / 4.0}) {
            const double oracle = std::log(boost::math::hypergeometric_1F1(0.5, 0.5 * p, k));
            EXPECT_NEAR(Marginal::watson(k, p).log_null_expectation(), oracle, 1e-10 * std::max(1.0, std::abs(oracle)));
        }
    }
}

TEST(Marginal, WatsonMomentIdentity) {
    for (auto [p, k] : {std::pair{600.0, 150.0}, std::pair{3000.0, 951.0}, std::pair{200.0, 99.0}}) {
        const auto m = Marginal::watson(k, static_cast<std::size_t>(p));
        const double delta = p / 2.0 - k;
        EXPECT_NEAR(1.0 - 2.0 * delta * m.moment(2) - 2.0 * k * m.moment(4), 0.0, 1e-8);
    }
}

TEST(Marginal, WatsonSecondMomentBand) {
    const double p = 600, k = 150, delta = p / 2 - k, r = k / delta;
    const double lead = (1 + r) / p;
    const double band = 5 * std::pow(1 + r, 3) / (p * p);
    EXPECT_NEAR(Marginal::watson(k, 600).moment(2), lead, band);
}

TEST(Marginal, WatsonNormalizerRatioStable) {
    // Z / (sqrt(p) delta^{-1/2}) at fixed k/p = 1/4 stays bounded across p.
    std::vector<double> ratios;
    for (std::size_t p : {200, 800, 3200}) {
        const double k = p / 4.0, delta = p / 2.0 - k;
        const double z = std::exp(Marginal::watson(k, p).log_null_expectation());
        ratios.push_back(z * std::sqrt(delta) / std::sqrt(double(p)));
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    EXPECT_GT(*lo, 0.5);
    EXPECT_LT(*hi, 1.0);
    EXPECT_LT(*hi / *lo, 1.05);
}

TEST(Marginal, QuantileInvertsCdf) {
    const Marginal models[] = {Marginal::fvml(12.0, 200), Marginal::watson(150.0, 600),
                               Marginal::watson(0.4, 3), Marginal::fvml(3.0, 3),
                               Marginal::cap_angle(1.0 / 2000.0, 500)};
    for (const auto& m : models) {
        double prev = -2.0;
        for (double u = 0.001; u < 1.0; u += 0.0123) {
            const double x = m.quantile(u);
            EXPECT_NEAR(m.cdf(x), u, 1e-10);
            EXPECT_GT(x, prev);
            prev = x;
        }
    }
}

TEST(Marginal, CdfMatchesAdaptiveIntegral) {
    const auto m = Marginal::fvml(40.0, 300);
    for (double t : {-0.05, 0.0, 0.1, 0.13, 0.2, 0.3}) {
        const double bp[] = {m.mode()};
        const auto r = quad::integrate([&](double x) { return std::exp(m.log_density(x)); }, -1.0, t, bp);
        EXPECT_NEAR(m.cdf(t), r.value, 1e-11) << t;
    }
}

TEST(Marginal, CapAngleStaysInCap) {
    const double eps = 1.0 / 400.0;
    const auto m = Marginal::cap_angle(eps, 100);
    EXPECT_GE(m.quantile(1e-9), 0.0);
    EXPECT_LE(m.quantile(1.0 - 1e-12), eps);
    // sin^{p-2} on [0, eps] is close to theta^{p-2}: the median is eps 2^{-1/(p-1)}.
    EXPECT_NEAR(m.quantile(0.5), eps * std::pow(0.5, 1.0 / 99.0), 1e-8);
    EXPECT_THROW(Marginal::cap_angle(1.0, 10), DomainError);
}

TEST(Marginal, ProbabilityRuleSumsToOne) {
    const auto rule = Marginal::watson(300.0, 800).probability_rule(8, 10);
    double s = 0, m2 = 0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        s += rule.weights[i];
        m2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
    EXPECT_NEAR(m2, Marginal::watson(300.0, 800).moment(2), 1e-9);
}
