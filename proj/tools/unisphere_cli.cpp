// Command-line front end. Every command prints one key=value result line on
// stdout; human-readable detail goes to stderr.

#include "unisphere/asymptotics/alt_cdf.hpp"
#include "unisphere/asymptotics/bridge.hpp"
#include "unisphere/asymptotics/scaling.hpp"
#include "unisphere/core/csv.hpp"
#include "unisphere/errors.hpp"
#include "unisphere/harness/config.hpp"
#include "unisphere/harness/experiments.hpp"
#include "unisphere/stats/decision.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace unisphere;

constexpr int kUsageError = 64;
constexpr int kRejectStatus = 2;

struct Globals {
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::string out;
    std::string svg;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("UNISPHERE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric UNISPHERE_SEED\n";
        }
    }
    return 0;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& n : names) {
        if (n == "all") {
            out.insert(out.end(), {Method::SupDistance, Method::Rayleigh, Method::Bingham, Method::Packing});
        } else {
            out.push_back(parse_method(n));
        }
    }
    return out;
}

ModelSpec model_from_flags(const std::string& model, double tau, std::size_t n, std::size_t p,
                           double alpha_index) {
    if (model == "uniform") return UniformModel{p};
    if (model == "fvml") return FvmlModel{p, fvml_kappa(tau, n, p), {}};
    if (model == "watson") return WatsonModel{p, watson_kappa(tau, n, p), {}};
    if (model == "lowrank") return LowRankModel{p, lowrank_k(tau, n, p), false};
    if (model == "alpha") return AlphaSphericalModel{p, alpha_index};
    if (model == "capmix") return CapMixtureModel{p, 0.0};
    throw DomainError("unknown model '" + model + "'");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write '" + path + "'");
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uniformity tests on the high-dimensional sphere"};
    app.require_subcommand(1);
    app.set_help_flag();
    app.set_help_all_flag("-h,--help", "Print help for every command and flag");
    Globals g;
    g.seed = default_seed();
    app.add_option("--seed", g.seed, "Master seed (default: $UNISPHERE_SEED or 0)");
    app.add_option("--threads", g.threads, "Worker cap; 0 = all cores");
    app.add_option("--out", g.out, "Write CSV output here");
    app.add_option("--svg", g.svg, "Write an SVG power chart here (power)");

    // test
    auto* test = app.add_subcommand("test", "Run tests on a CSV sample");
    std::string data;
    std::vector<std::string> test_methods{"all"};
    double alpha = 0.05;
    std::string tail = "upper";
    std::string calibration = "asymptotic";
    std::size_t mc_reps = 2000;
    bool normalize = false, exit_on_reject = false;
    test->add_option("--data", data, "CSV file, one observation per line")->required();
    test->add_option("--method", test_methods, "SupDistance, Rayleigh, Bingham, Packing, Projection or all");
    test->add_option("--alpha", alpha, "Level");
    test->add_option("--tail", tail, "upper or two-sided");
    test->add_option("--calibration", calibration, "asymptotic or mc");
    test->add_option("--mc-reps", mc_reps, "Null replications for mc calibration");
    test->add_flag("--normalize", normalize, "Rescale rows to unit norm");
    test->add_flag("--exit-on-reject", exit_on_reject, "Exit with status 2 if any test rejects");

    // size
    auto* size = app.add_subcommand("size", "Null rejection rates");
    std::string size_config;
    std::size_t n = 80, p = 80, reps = 2000;
    std::vector<std::string> size_methods{"SupDistance"};
    size->add_option("--config", size_config, "Experiment JSON; flags below are ignored when given");
    size->add_option("--n", n);
    size->add_option("--p", p);
    size->add_option("--reps", reps);
    size->add_option("--alpha", alpha);
    size->add_option("--method", size_methods);

    // power
    auto* power = app.add_subcommand("power", "Power curve from an experiment config");
    std::string power_config;
    power->add_option("--config", power_config, "Experiment JSON")->required();

    // nulldist
    auto* nulldist = app.add_subcommand("nulldist", "KS distance of the null law to Kolmogorov");
    nulldist->add_option("--n", n);
    nulldist->add_option("--p", p);
    nulldist->add_option("--reps", reps);

    // distance
    auto* distance = app.add_subcommand("distance", "Distance d between alternative and null");
    std::string model = "fvml", mode = "quadrature";
    double tau = 1.0, alpha_index = 1.0;
    std::size_t pairs = 100000;
    distance->add_option("--model", model, "fvml, watson, lowrank, capmix, alpha, uniform");
    distance->add_option("--tau", tau);
    distance->add_option("--n", n);
    distance->add_option("--p", p);
    distance->add_option("--mode", mode, "quadrature or mc");
    distance->add_option("--pairs", pairs, "Sampled pairs for mc mode");
    distance->add_option("--alpha-index", alpha_index, "Tail index of the alpha-spherical model");

    // predict
    auto* predict = app.add_subcommand("predict", "Asymptotic power from the shifted bridge");
    std::string shift = "fvml";
    std::size_t grid = 2048;
    std::size_t predict_reps = 20000;
    predict->add_option("--shift", shift, "fvml, quadratic or none");
    predict->add_option("--tau", tau);
    predict->add_option("--alpha", alpha);
    predict->add_option("--reps", predict_reps);
    predict->add_option("--grid", grid);

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "Monte Carlo critical value");
    std::string cal_method = "SupDistance";
    std::size_t cal_reps = 5000;
    calibrate->add_option("--n", n);
    calibrate->add_option("--p", p);
    calibrate->add_option("--method", cal_method);
    calibrate->add_option("--alpha", alpha);
    calibrate->add_option("--reps", cal_reps);

    // nonlocal
    auto* nonlocal = app.add_subcommand("nonlocal", "Tests against non-local alternatives");
    std::string kind = "capmix";
    std::size_t nl_reps = 200;
    nonlocal->add_option("--kind", kind, "capmix or alpha");
    nonlocal->add_option("--n", n);
    nonlocal->add_option("--p", p);
    nonlocal->add_option("--alpha", alpha);
    nonlocal->add_option("--reps", nl_reps);
    nonlocal->add_option("--alpha-index", alpha_index);

    for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    }

    try {
        if (*test) {
            TestOptions opt;
            opt.alpha = alpha;
            opt.tail = parse_tail(tail);
            opt.threads = g.threads;
            opt.direction_seed = g.seed;
            if (calibration == "mc" || calibration == "monte-carlo") {
                opt.calibration = {Calibration::Kind::MonteCarlo, mc_reps, g.seed};
            } else if (calibration != "asymptotic") {
                throw DomainError("unknown calibration '" + calibration + "'");
            }
            const auto methods = parse_methods(test_methods);
            for (Method m : methods) check_tail(m, opt.tail);
            const UnitPointSet s = read_point_csv_file(data, normalize);
            std::ostringstream csv;
            csv << TestOutcome::csv_header() << '\n';
            bool any = false;
            for (Method m : methods) {
                const TestOutcome o = run_test(s, m, opt);
                any = any || o.reject;
                csv << o.csv_row() << '\n';
                std::cout << "method=" << method_name(m) << " statistic=" << num(o.statistic)
                          << " standardized=" << num(o.standardized) << " p_value=" << num(o.p_value)
                          << " reject=" << (o.reject ? "true" : "false") << " alpha=" << num(o.alpha)
                          << " tail=" << tail_name(o.tail) << " calibration=" << o.calibration.describe()
                          << '\n';
            }
            std::cerr << "n=" << s.n() << " p=" << s.p() << '\n';
            if (!g.out.empty()) write_text(g.out, csv.str());
            return exit_on_reject && any ? kRejectStatus : 0;
        }
        if (*size) {
            ExperimentConfig c;
            if (!size_config.empty()) {
                c = load_config(size_config);
            } else {
                c.n = n;
                c.p = p;
                c.alpha = alpha;
                c.reps = reps;
                for (Method m : parse_methods(size_methods)) c.methods.push_back({m, Tail::Upper, {}});
            }
            c.seed = g.seed;
            const PowerCurve curve = run_size_experiment(c, g.threads);
            std::cout << "command=size n=" << c.n << " p=" << c.p << " alpha=" << num(c.alpha)
                      << " reps=" << c.reps;
            for (const auto& r : curve.rows) {
                std::cout << ' ' << method_name(r.method) << '=' << num(r.rate()) << ' '
                          << method_name(r.method) << "_se=" << num(r.se());
            }
            std::cout << '\n';
            if (!g.out.empty()) export_csv(curve, g.out);
            return 0;
        }
        if (*power) {
            ExperimentConfig c = load_config(power_config);
            if (app.count("--seed") > 0 || std::getenv("UNISPHERE_SEED")) c.seed = g.seed;
            const PowerCurve curve = run_power_curve(c, g.threads);
            for (const auto& w : curve.warnings) std::cerr << "warning: " << w << '\n';
            write_csv(curve, std::cerr);
            const std::string out = g.out.empty() ? c.output_path : g.out;
            if (!out.empty()) export_csv(curve, out);
            if (!g.svg.empty()) export_svg(curve, g.svg);
            std::cout << "command=power config_hash=" << curve.config_hash << " seed=" << curve.seed
                      << " rows=" << curve.rows.size() << " out=" << (out.empty() ? "-" : out)
                      << " wall_clock=" << num(curve.wall_clock_seconds) << '\n';
            return 0;
        }
        if (*nulldist) {
            const NullCheck r = run_null_distribution_check(n, p, reps, g.seed, g.threads);
            std::cout << "command=nulldist n=" << n << " p=" << p << " reps=" << reps
                      << " ks=" << num(r.ks) << " size=" << num(r.size) << '\n';
            if (!g.out.empty()) {
                std::ostringstream csv;
                csv << "standardized\n";
                for (double v : r.standardized) csv << num(v) << '\n';
                write_text(g.out, csv.str());
            }
            return 0;
        }
        if (*distance) {
            const ModelSpec m = model_from_flags(model, tau, n, p, alpha_index);
            double d;
            if (mode == "quadrature") {
                d = distance_d(m).d;
            } else if (mode == "mc") {
                d = estimate_distance_d_mc(m, pairs, g.seed, g.threads);
            } else {
                throw DomainError("unknown mode '" + mode + "'");
            }
            std::cout << "command=distance model=" << model << " mode=" << mode << " tau=" << num(tau)
                      << " n=" << n << " p=" << p << " d=" << num(d)
                      << " n_times_d=" << num(static_cast<double>(n) * d) << '\n';
            return 0;
        }
        if (*predict) {
            std::optional<ShiftFunction> sf;
            if (shift == "fvml") {
                sf = ShiftFunction{ShiftFunction::Kind::Fvml, tau};
            } else if (shift == "quadratic") {
                sf = ShiftFunction{ShiftFunction::Kind::Quadratic, tau};
            } else if (shift != "none") {
                throw DomainError("unknown shift '" + shift + "'");
            }
            const double pw = predict_asymptotic_power(sf, alpha, predict_reps, g.seed, grid, g.threads);
            std::cout << "command=predict shift=" << shift << " tau=" << num(tau) << " alpha="
                      << num(alpha) << " reps=" << predict_reps << " power=" << num(pw) << '\n';
            return 0;
        }
        if (*calibrate) {
            const Method m = parse_method(cal_method);
            const double c = calibrate_critical_value_mc(n, p, m, alpha, cal_reps, g.seed, g.threads);
            std::cout << "command=calibrate method=" << method_name(m) << " n=" << n << " p=" << p
                      << " alpha=" << num(alpha) << " reps=" << cal_reps
                      << " critical_value=" << num(c) << '\n';
            return 0;
        }
        if (*nonlocal) {
            NonlocalKind k;
            if (kind == "capmix") {
                k = NonlocalKind::CapMixture;
            } else if (kind == "alpha") {
                k = NonlocalKind::AlphaSpherical;
            } else {
                throw DomainError("unknown kind '" + kind + "'");
            }
            const NonlocalResult r =
                run_nonlocal_experiment(k, n, p, alpha, nl_reps, g.seed, alpha_index, g.threads);
            std::cout << "command=nonlocal kind=" << kind << " n=" << n << " p=" << p;
            for (const auto& row : r.rates) std::cout << ' ' << method_name(row.method) << '=' << num(row.rate());
            std::cout << " mean_R=" << num(r.mean_R) << " mean_abs_R=" << num(r.mean_abs_R)
                      << " share_B_negative=" << num(r.share_B_negative)
                      << " share_P_below=" << num(r.share_P_below) << '\n';
            std::cerr << "method           rate     se\n";
            for (const auto& row : r.rates) {
                std::fprintf(stderr, "%-16s %.4f   %.4f\n", method_name(row.method).c_str(), row.rate(), row.se());
            }
            return 0;
        }
    } catch (const ZeroRow& e) {
        std::cerr << "error: ZeroRow (row " << e.row() << "): " << e.what() << '\n';
        return 1;
    } catch (const NotUnit& e) {
        std::cerr << "error: NotUnit (row " << e.row() << "): " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
