#include "unisphere/stats/decision.hpp"

#include "unisphere/errors.hpp"
#include "unisphere/harness/parallel.hpp"
#include "unisphere/samplers/samplers.hpp"
#include "unisphere/specfun/special.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace unisphere {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

std::size_t quantile_index(double level, std::size_t reps) {
    const auto k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(reps) - 1e-9));
    return k == 0 ? 0 : std::min(k, reps) - 1;
}

}  // namespace

std::string Calibration::describe() const {
    if (kind == Kind::Asymptotic) return "asymptotic";
    return "monte-carlo(" + std::to_string(reps) + "," + std::to_string(seed) + ")";
}

std::string TestOutcome::csv_header() {
    return "method,statistic,standardized,p_value,reject,alpha,tail,calibration";
}

std::string TestOutcome::csv_row() const {
    std::ostringstream os;
    os.precision(10);
    os << method_name(method) << ',' << statistic << ',' << standardized << ',' << p_value << ','
       << (reject ? "true" : "false") << ',' << alpha << ',' << tail_name(tail) << ",\""
       << calibration.describe() << '"';
    return os.str();
}

void check_tail(Method m, Tail t) {
    if (t == Tail::TwoSided && (m == Method::SupDistance || m == Method::Projection)) {
        throw BadTail(method_name(m) + " is upper-tailed only");
    }
}

TestOutcome decide_asymptotic(Method m, double statistic, std::size_t n, double alpha, Tail tail) {
    check_alpha(alpha);
    check_tail(m, tail);
    TestOutcome out;
    out.method = m;
    out.statistic = statistic;
    out.standardized = standardize(m, statistic, n);
    out.alpha = alpha;
    out.tail = tail;
    const double z = out.standardized;
    double upper = 0.0, lower = 0.0;
    switch (m) {
        case Method::SupDistance:
        case Method::Projection:
            upper = kolmogorov_sf(std::max(z, 0.0));
            break;
        case Method::Rayleigh:
        case Method::Bingham:
            upper = normal_sf(z);
            lower = normal_cdf(z);
            break;
        case Method::Packing:
            if (n < 3) throw CalibrationUnavailable("packing null needs n >= 3");
            upper = packing_gumbel_sf(z);
            lower = packing_gumbel_cdf(z);
            break;
    }
    out.p_value = tail == Tail::Upper ? upper : std::min(1.0, 2.0 * std::min(upper, lower));
    if (m == Method::SupDistance) {
        // T_n >= sqrt(2) c_alpha / sqrt(n(n-1)), on the standardized scale.
        out.reject = z >= kolmogorov_quantile(alpha);
    } else {
        out.reject = out.p_value <= alpha;
    }
    return out;
}

double compute_statistic(Method m, const UnitPointSet& s, std::span<const double> direction) {
    switch (m) {
        case Method::SupDistance: return statistic_T(s);
        case Method::Rayleigh: return statistic_R(s);
        case Method::Bingham: return statistic_B(s);
        case Method::Packing: return statistic_P(s);
        case Method::Projection: return statistic_projection_D(s, direction);
    }
    throw DomainError("unknown method");
}

std::vector<double> simulate_null_statistics(std::size_t n, std::size_t p, Method m,
                                             std::size_t reps, std::uint64_t seed,
                                             std::size_t threads) {
    const Sampler sampler(UniformModel{p});
    std::vector<double> axis(p, 0.0);
    axis[0] = 1.0;
    std::vector<double> values(reps);
    parallel_for(reps, threads, [&](std::size_t r) {
        const UnitPointSet s = sampler.sample(n, RngSeed{seed, r});
        values[r] = compute_statistic(m, s, axis);
    });
    std::sort(values.begin(), values.end());
    return values;
}

double calibrate_critical_value_mc(std::size_t n, std::size_t p, Method m, double alpha,
                                   std::size_t reps, std::uint64_t seed, std::size_t threads) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
    if (reps < 1000) throw CalibrationUnavailable("Monte Carlo calibration needs reps >= 1000");
    const auto null = simulate_null_statistics(n, p, m, reps, seed, threads);
    return null[quantile_index(1.0 - alpha, reps)];
}

TestOutcome run_test(const UnitPointSet& s, Method m, const TestOptions& opt) {
    check_alpha(opt.alpha);
    check_tail(m, opt.tail);
    std::vector<double> direction = opt.direction;
    if (m == Method::Projection && direction.empty()) {
        direction.resize(s.p());
        Rng rng({opt.direction_seed, 0});
        sample_uniform_direction(rng, direction);
    }
    const double stat = compute_statistic(m, s, direction);
    if (opt.calibration.kind == Calibration::Kind::Asymptotic) {
        return decide_asymptotic(m, stat, s.n(), opt.alpha, opt.tail);
    }

    const std::size_t reps = opt.calibration.reps;
    if (reps < 1000) throw CalibrationUnavailable("Monte Carlo calibration needs reps >= 1000");
    const auto null =
        simulate_null_statistics(s.n(), s.p(), m, reps, opt.calibration.seed, opt.threads);
    return decide_monte_carlo(m, stat, s.n(), opt.alpha, opt.tail, null, opt.calibration);
}

TestOutcome decide_monte_carlo(Method m, double stat, std::size_t n, double alpha, Tail tail,
                               const std::vector<double>& null, const Calibration& calibration) {
    check_alpha(alpha);
    check_tail(m, tail);
    if (null.empty()) throw CalibrationUnavailable("empty null sample");
    const std::size_t reps = null.size();
    TestOutcome out;
    out.method = m;
    out.statistic = stat;
    out.standardized = standardize(m, stat, n);
    out.alpha = alpha;
    out.tail = tail;
    out.calibration = calibration;
    const auto ge = static_cast<double>(null.end() - std::lower_bound(null.begin(), null.end(), stat));
    const auto le = static_cast<double>(std::upper_bound(null.begin(), null.end(), stat) - null.begin());
    const double denom = static_cast<double>(reps) + 1.0;
    if (tail == Tail::Upper) {
        out.p_value = (1.0 + ge) / denom;
        out.reject = stat >= null[quantile_index(1.0 - alpha, reps)];
    } else {
        out.p_value = std::min(1.0, 2.0 * (1.0 + std::min(ge, le)) / denom);
        out.reject = stat >= null[quantile_index(1.0 - alpha / 2.0, reps)] ||
                     stat <= null[quantile_index(alpha / 2.0, reps)];
    }
    return out;
}

}  // namespace unisphere
