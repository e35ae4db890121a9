#include "unisphere/harness/experiments.hpp"

#include "unisphere/errors.hpp"
#include "unisphere/harness/parallel.hpp"
#include "unisphere/samplers/samplers.hpp"
#include "unisphere/specfun/special.hpp"
#include "unisphere/stats/decision.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace unisphere {

namespace {

std::uint64_t tag(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

bool needs_pairs(Method m) { return m != Method::Projection; }

double pick(const Statistics& st, Method m) {
    switch (m) {
        case Method::SupDistance: return st.T;
        case Method::Rayleigh: return st.R;
        case Method::Bingham: return st.B;
        case Method::Packing: return st.P;
        case Method::Projection: break;
    }
    throw DomainError("projection is not a pair statistic");
}

}  // namespace

double RateRow::se() const {
    const double r = rate();
    return reps == 0 ? 0.0 : std::sqrt(r * (1.0 - r) / static_cast<double>(reps));
}

const RateRow& PowerCurve::at(double tau, Method m) const {
    for (const auto& row : rows) {
        if (row.tau == tau && row.method == m) return row;
    }
    throw DomainError("no row for tau " + std::to_string(tau) + " and " + method_name(m));
}

PowerCurve run_power_curve(const ExperimentConfig& config, std::size_t threads) {
    validate_config(config);
    const auto t0 = std::chrono::steady_clock::now();
    PowerCurve curve;
    curve.config_hash = config_hash(config);
    curve.seed = config.seed;
    const std::string family = model_family(config.model_family);
    if (family == "watson" &&
        static_cast<double>(config.p) < 5.0 * std::pow(static_cast<double>(config.n), 2.0 / 3.0)) {
        curve.warnings.push_back("Watson local regime is loose: p < 5 n^(2/3)");
    }

    const std::size_t grid = config.signal_grid.size();
    const std::size_t methods = config.methods.size();
    std::vector<Sampler> samplers;
    samplers.reserve(grid);
    for (double tau : config.signal_grid) samplers.emplace_back(model_for_signal(config, tau));

    std::vector<std::vector<double>> null(methods);
    bool pairs = false, want_T = false;
    for (std::size_t j = 0; j < methods; ++j) {
        const auto& ms = config.methods[j];
        pairs = pairs || needs_pairs(ms.method);
        want_T = want_T || ms.method == Method::SupDistance;
        if (ms.calibration.kind == Calibration::Kind::MonteCarlo) {
            null[j] = simulate_null_statistics(config.n, config.p, ms.method, ms.calibration.reps,
                                               ms.calibration.seed, threads);
        }
    }

    const std::uint64_t family_seed = mix_seed(config.seed, tag(family));
    std::vector<unsigned char> reject(grid * config.reps * methods, 0);
    parallel_for(grid * config.reps, threads, [&](std::size_t cell) {
        const std::size_t i = cell / config.reps;
        const std::size_t r = cell % config.reps;
        Rng rng({mix_seed(family_seed, i), r});
        const UnitPointSet s = samplers[i].sample(config.n, rng);
        Statistics st;
        if (pairs) st = all_statistics(s, want_T);
        std::vector<double> direction;
        for (std::size_t j = 0; j < methods; ++j) {
            const auto& ms = config.methods[j];
            double stat;
            if (ms.method == Method::Projection) {
                if (direction.empty()) {
                    direction.resize(config.p);
                    sample_uniform_direction(rng, direction);
                }
                stat = statistic_projection_D(s, direction);
            } else {
                stat = pick(st, ms.method);
            }
            const TestOutcome o =
                ms.calibration.kind == Calibration::Kind::Asymptotic
                    ? decide_asymptotic(ms.method, stat, config.n, config.alpha, ms.tail)
                    : decide_monte_carlo(ms.method, stat, config.n, config.alpha, ms.tail, null[j],
                                         ms.calibration);
            reject[cell * methods + j] = o.reject ? 1 : 0;
        }
    });

    for (std::size_t i = 0; i < grid; ++i) {
        for (std::size_t j = 0; j < methods; ++j) {
            RateRow row;
            row.family = family;
            row.tau = config.signal_grid[i];
            row.method = config.methods[j].method;
            row.reps = config.reps;
            row.seed = config.seed;
            for (std::size_t r = 0; r < config.reps; ++r) {
                row.rejections += reject[((i * config.reps) + r) * methods + j];
            }
            curve.rows.push_back(row);
        }
    }
    curve.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return curve;
}

PowerCurve run_size_experiment(const ExperimentConfig& config, std::size_t threads) {
    ExperimentConfig c = config;
    c.model_family = UniformModel{config.p};
    c.signal_grid = {0.0};
    return run_power_curve(c, threads);
}

NullCheck run_null_distribution_check(std::size_t n, std::size_t p, std::size_t reps,
                                      std::uint64_t seed, std::size_t threads) {
    if (reps == 0) throw ConfigError("null check needs reps >= 1");
    NullCheck out;
    out.standardized = simulate_null_statistics(n, p, Method::SupDistance, reps, seed, threads);
    for (double& v : out.standardized) v = standardize(Method::SupDistance, v, n);
    const double c = kolmogorov_quantile(0.05);
    const double N = static_cast<double>(reps);
    std::size_t rejected = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        const double x = out.standardized[i];
        const double F = kolmogorov_cdf(x);
        out.ks = std::max({out.ks, static_cast<double>(i + 1) / N - F, F - static_cast<double>(i) / N});
        if (x >= c) ++rejected;
    }
    out.size = static_cast<double>(rejected) / N;
    return out;
}

NonlocalResult run_nonlocal_experiment(NonlocalKind kind, std::size_t n, std::size_t p, double alpha,
                                       std::size_t reps, std::uint64_t seed, double alpha_index,
                                       std::size_t threads) {
    if (n < 3) throw ConfigError("non-local experiment needs n >= 3");
    if (reps == 0) throw ConfigError("non-local experiment needs reps >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    ModelSpec model;
    if (kind == NonlocalKind::CapMixture) {
        if (p < 2 * n * n) throw ConfigError("cap mixture experiment needs p >= 2 n^2");
        model = CapMixtureModel{p, 0.0};
    } else {
        model = AlphaSphericalModel{p, alpha_index};
    }
    const Sampler sampler(model);
    const std::string family = model_family(sampler.model());
    const std::uint64_t base = mix_seed(seed, tag(family));

    std::vector<Statistics> stats(reps);
    parallel_for(reps, threads, [&](std::size_t r) {
        Rng rng({base, r});
        stats[r] = all_statistics(sampler.sample(n, rng));
    });

    const Method order[] = {Method::SupDistance, Method::Rayleigh, Method::Bingham, Method::Packing};
    NonlocalResult out;
    for (Method m : order) {
        RateRow row{family, 0.0, m, 0, reps, seed};
        for (const auto& st : stats) {
            if (decide_asymptotic(m, pick(st, m), n, alpha, Tail::Upper).reject) ++row.rejections;
        }
        out.rates.push_back(row);
    }
    const double N = static_cast<double>(reps);
    const double p_low = packing_gumbel_quantile(1.0 - alpha);
    double s1 = 0, s2 = 0, a1 = 0, a2 = 0;
    std::size_t bneg = 0, plow = 0;
    for (const auto& st : stats) {
        s1 += st.R;
        s2 += st.R * st.R;
        a1 += std::abs(st.R);
        if (st.B < 0.0) ++bneg;
        if (st.P < p_low) ++plow;
    }
    a2 = s2;
    out.mean_R = s1 / N;
    out.mean_abs_R = a1 / N;
    const double denom = reps > 1 ? N - 1.0 : 1.0;
    out.se_R = std::sqrt(std::max(0.0, (s2 - N * out.mean_R * out.mean_R) / denom) / N);
    out.se_abs_R = std::sqrt(std::max(0.0, (a2 - N * out.mean_abs_R * out.mean_abs_R) / denom) / N);
    out.share_B_negative = static_cast<double>(bneg) / N;
    out.share_P_below = static_cast<double>(plow) / N;
    return out;
}

void write_csv(const PowerCurve& curve, std::ostream& out) {
    out << "family,tau,method,rate,se,reps,seed\n";
    for (const auto& r : curve.rows) {
        out << r.family << ',' << fmt("%.6g", r.tau) << ',' << method_name(r.method) << ','
            << fmt("%.6f", r.rate()) << ',' << fmt("%.6f", r.se()) << ',' << r.reps << ','
            << r.seed << '\n';
    }
}

void export_csv(const PowerCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    write_csv(curve, out);
    if (!out) throw IoError("write failed for '" + path + "'");
}

void export_svg(const PowerCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    constexpr double W = 640, H = 400, L = 60, R = 150, T = 20, B = 50;
    double tmin = 0, tmax = 1;
    if (!curve.rows.empty()) {
        tmin = tmax = curve.rows.front().tau;
        for (const auto& r : curve.rows) {
            tmin = std::min(tmin, r.tau);
            tmax = std::max(tmax, r.tau);
        }
        if (tmax == tmin) tmax = tmin + 1.0;
    }
    auto x = [&](double t) { return L + (W - L - R) * (t - tmin) / (tmax - tmin); };
    auto y = [&](double v) { return H - B - (H - T - B) * v; };
    static const char* colors[] = {"#1b6ca8", "#d1495b", "#66a182", "#edae49", "#6c4f77"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << y(0) << "\" x2=\"" << W - R << "\" y2=\"" << y(0)
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << y(0) << "\" x2=\"" << L << "\" y2=\"" << y(1)
        << "\" stroke=\"black\"/>\n";
    for (double v : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        out << "<text x=\"" << L - 8 << "\" y=\"" << y(v) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << v << "</text>\n";
    }
    out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
        << "\" font-size=\"12\" text-anchor=\"middle\">tau</text>\n";
    out << "<text x=\"" << L << "\" y=\"" << y(0) + 18 << "\" font-size=\"11\">" << tmin << "</text>\n";
    out << "<text x=\"" << W - R << "\" y=\"" << y(0) + 18 << "\" font-size=\"11\" text-anchor=\"end\">"
        << tmax << "</text>\n";

    std::vector<Method> seen;
    for (const auto& r : curve.rows) {
        if (std::find(seen.begin(), seen.end(), r.method) == seen.end()) seen.push_back(r.method);
    }
    for (std::size_t k = 0; k < seen.size(); ++k) {
        const char* color = colors[k % 5];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& r : curve.rows) {
            if (r.method == seen[k]) out << x(r.tau) << ',' << y(r.rate()) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (k + 1) << "\" font-size=\"12\" fill=\""
            << color << "\">" << method_name(seen[k]) << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace unisphere
