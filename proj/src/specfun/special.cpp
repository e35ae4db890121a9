#include "unisphere/specfun/special.hpp"

#include "unisphere/errors.hpp"
#include "unisphere/specfun/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace unisphere {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

// lgamma(x) - [(x - 1/2) log x - x + log(2 pi)/2].
double stirling_correction(double x) {
    if (x >= 10.0) {
        const double r = 1.0 / x;
        const double r2 = r * r;
        return r * (1.0 / 12.0 -
                    r2 * (1.0 / 360.0 -
                          r2 * (1.0 / 1260.0 -
                                r2 * (1.0 / 1680.0 -
                                      r2 * (1.0 / 1188.0 - r2 * (691.0 / 360360.0 - r2 / 156.0))))));
    }
    return std::lgamma(x) - ((x - 0.5) * std::log(x) - x + kHalfLog2Pi);
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-16;
    constexpr int kMaxIter = 1'000'000;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw DomainError("incomplete beta continued fraction did not converge");
}

// log[x^a (1-x)^b / B(a, b)], expanded around the mode x0 = a/(a+b).
double log_beta_prefactor(double x, double a, double b) {
    const double s = a + b;
    const double x0 = a / s;
    const double y0 = b / s;
    const double lx = std::log1p((x - x0) / x0);
    const double ly = std::log1p((x0 - x) / y0);
    const double delta = stirling_correction(a) + stirling_correction(b) - stirling_correction(s);
    return a * lx + b * ly + 0.5 * std::log(a * b / s) - kHalfLog2Pi - delta;
}

double alternating_kolmogorov_series(double x) {
    double sum = 0.0;
    for (int k = 1; k < 1000; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (2.0 * term < 1e-16 * std::max(sum, 1e-300) || term == 0.0) break;
    }
    return sum;
}

// Jacobi-theta dual: P(sup|B| <= x) = sqrt(2 pi)/x sum exp(-(2k-1)^2 pi^2/(8 x^2)).
double theta_kolmogorov_cdf(double x) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int k = 1; k < 1000; ++k) {
        const double j = 2.0 * k - 1.0;
        const double term = std::exp(-j * j * pi2 / (8.0 * x * x));
        sum += term;
        if (term < 1e-17 * sum || term == 0.0) break;
    }
    return std::sqrt(2.0 * std::numbers::pi) / x * sum;
}

}  // namespace

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_beta needs positive arguments");
    const double s = a + b;
    return (a - 0.5) * std::log(a / s) + b * std::log(b / s) - 0.5 * std::log(b) + kHalfLog2Pi + stirling_correction(a) + stirling_correction(b) -
           stirling_correction(s);
}

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || a > 1e7 || b > 1e7) {
        throw DomainError("incomplete beta: shape parameters must lie in (0, 1e7]");
    }
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta: x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    if (a == b && x == 0.5) return 0.5;
    if (x > a / (a + b)) {
        const double y = 1.0 - x;
        const double front = std::exp(log_beta_prefactor(x, a, b));
        return 1.0 - front * beta_continued_fraction(y, b, a) / b;
    }
    const double front = std::exp(log_beta_prefactor(x, a, b));
    return front * beta_continued_fraction(x, a, b) / a;
}

double null_cdf_m(double t, std::size_t p) {
    if (p < 2) throw DomainError("null_cdf_m: p must be at least 2");
    if (std::isnan(t) || t < -1.0 - 1e-12 || t > 1.0 + 1e-12) {
        throw DomainError("null_cdf_m: t = " + std::to_string(t) + " outside [-1, 1]");
    }
    t = std::clamp(t, -1.0, 1.0);
    const double a = 0.5 * (static_cast<double>(p) - 1.0);
    if (t <= 0.0) return regularized_incomplete_beta(0.5 * (1.0 + t), a, a);
    return 1.0 - regularized_incomplete_beta(0.5 * (1.0 - t), a, a);
}

double null_log_constant(std::size_t p) {
    if (p < 2) throw DomainError("null_log_constant: p must be at least 2");
    return -log_beta(0.5, 0.5 * (static_cast<double>(p) - 1.0));
}

double null_density(double t, std::size_t p) {
    if (t <= -1.0 || t >= 1.0) return p == 3 ? 0.5 : 0.0;
    const double e = 0.5 * (static_cast<double>(p) - 3.0);
    return std::exp(null_log_constant(p) + (e == 0.0 ? 0.0 : e * std::log1p(-t * t)));
}

double kolmogorov_sf(double x) {
    if (std::isnan(x) || x < 0.0) throw DomainError("kolmogorov_sf: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < 1.0) return 1.0 - theta_kolmogorov_cdf(x);
    return alternating_kolmogorov_series(x);
}

double kolmogorov_cdf(double x) {
    if (std::isnan(x) || x < 0.0) throw DomainError("kolmogorov_cdf: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < 1.0) return theta_kolmogorov_cdf(x);
    return 1.0 - alternating_kolmogorov_series(x);
}

double kolmogorov_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("kolmogorov_quantile: alpha outside (0, 1)");
    double lo = 1e-3;
    double hi = 1.0;
    while (kolmogorov_sf(hi) > alpha) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_sf(mid) > alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double normal_pdf(double u) noexcept {
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double u) noexcept { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

double normal_sf(double u) noexcept { return 0.5 * std::erfc(u / std::numbers::sqrt2); }

double normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("normal_quantile: q outside (0, 1)");
    if (q > 0.5) return -normal_quantile(1.0 - q);
    // Acklam's rational approximation, then two Halley steps.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    double x;
    if (q < 0.02425) {
        const double r = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
            ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
    } else {
        const double r0 = q - 0.5;
        const double r = r0 * r0;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * r0 /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double e = normal_cdf(x) - q;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double packing_gumbel_cdf(double x) noexcept {
    return std::exp(-std::exp(-0.5 * x) / std::sqrt(8.0 * std::numbers::pi));
}

double packing_gumbel_sf(double x) noexcept {
    return -std::expm1(-std::exp(-0.5 * x) / std::sqrt(8.0 * std::numbers::pi));
}

double packing_gumbel_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("packing_gumbel_quantile: alpha outside (0, 1)");
    }
    return -2.0 * std::log(-std::sqrt(8.0 * std::numbers::pi) * std::log1p(-alpha));
}

double fvml_log_normalizer(double kappa, std::size_t p) {
    if (p < 3) throw DomainError("fvml_log_normalizer: p must be at least 3");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw DomainError("fvml_log_normalizer: kappa must be finite and nonnegative");
    }
    if (kappa == 0.0) return 0.0;
    return -Marginal::fvml(kappa, p).log_null_expectation();
}

}  // namespace unisphere
