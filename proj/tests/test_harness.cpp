#include "unisphere/errors.hpp"
#include "unisphere/harness/config.hpp"
#include "unisphere/harness/experiments.hpp"
#include "unisphere/harness/parallel.hpp"
#include "unisphere/asymptotics/scaling.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace unisphere;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("unisphere_test_" + name)).string();
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.n = 20;
    c.p = 15;
    c.reps = 200;
    c.model_family = FvmlModel{15, 0.0, {}};
    c.signal_grid = {0.0, 1.0, 3.0};
    c.methods = {{Method::SupDistance}, {Method::Rayleigh}, {Method::Bingham, Tail::TwoSided}, {Method::Packing}};
    c.seed = 17;
    return c;
}

std::string csv_of(const PowerCurve& pc) {
    std::ostringstream os;
    write_csv(pc, os);
    return os.str();
}

}  // namespace

TEST(Parallel, VisitsEveryIndexOnce) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_GE(resolve_threads(0), 1u);
    EXPECT_EQ(resolve_threads(3), 3u);
}

TEST(Parallel, RethrowsWorkerException) {
    EXPECT_THROW(parallel_for(100, 3,
                              [](std::size_t i) {
                                  if (i == 57) throw DomainError("boom");
                              }),
                 DomainError);
}

TEST(Config, JsonRoundTrip) {
    auto c = small_config();
    c.methods.push_back({Method::Rayleigh, Tail::Upper, {Calibration::Kind::MonteCarlo, 1000, 4}});
    c.output_path = "out.csv";
    EXPECT_EQ(config_from_json(config_to_json(c)), c);
    const auto path = temp_path("cfg.json");
    save_config(c, path);
    EXPECT_EQ(load_config(path), c);
    std::filesystem::remove(path);
}

TEST(Config, BareMethodNames) {
    const auto j = nlohmann::json::parse(R"({"n": 30, "p": 40, "model_family": {"family": "watson"},
        "signal_grid": [1, 2], "methods": ["SupDistance", "rayleigh"], "seed": 3})");
    const auto c = config_from_json(j);
    ASSERT_EQ(c.methods.size(), 2u);
    EXPECT_EQ(c.methods[1].method, Method::Rayleigh);
    EXPECT_EQ(c.methods[1].tail, Tail::Upper);
    EXPECT_EQ(c.reps, 2000u);
    EXPECT_EQ(model_dimension(c.model_family), 40u);
}

TEST(Config, ErrorsNameTheField) {
    auto expect_field = [](const std::string& text, const std::string& field) {
        try {
            config_from_json(nlohmann::json::parse(text));
            ADD_FAILURE() << text;
        } catch (const ParseError& e) {
            EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
        }
    };
    expect_field(R"({"n": "eighty", "p": 80, "methods": ["sup"]})", "n");
    expect_field(R"({"n": 80, "p": 80, "methods": ["sup"], "colour": 1})", "colour");
    expect_field(R"({"n": 80, "p": 80, "methods": ["kuiper"]})", "methods");
    expect_field(R"({"n": 80, "p": 80, "methods": ["sup"], "signal_grid": "0"})", "signal_grid");
}

TEST(Config, MalformedAndMissingFiles) {
    const auto path = temp_path("bad.json");
    std::ofstream(path) << "{\"n\": 80, \"p\": ";
    EXPECT_THROW(load_config(path), ParseError);
    std::filesystem::remove(path);
    EXPECT_THROW(load_config(temp_path("does_not_exist.json")), IoError);
}

TEST(Config, Validation) {
    auto c = small_config();
    EXPECT_NO_THROW(validate_config(c));
    auto bad = c;
    bad.reps = 50;
    EXPECT_THROW(validate_config(bad), ConfigError);
    bad = c;
    bad.signal_grid = {1.0, 1.0};
    EXPECT_THROW(validate_config(bad), ConfigError);
    bad = c;
    bad.alpha = 1.0;
    EXPECT_THROW(validate_config(bad), ConfigError);
    bad = c;
    bad.methods = {{Method::SupDistance, Tail::TwoSided}};
    EXPECT_THROW(validate_config(bad), ConfigError);
    bad = c;
    bad.methods = {{Method::Rayleigh, Tail::Upper, {Calibration::Kind::MonteCarlo, 500, 1}}};
    EXPECT_THROW(validate_config(bad), ConfigError);
    bad = c;
    bad.model_family = CapMixtureModel{15, 1.0};
    EXPECT_THROW(validate_config(bad), InRegimeError);
}

TEST(Config, ShippedConfigsLoad) {
    const auto fig1 = load_config(std::string(UNISPHERE_CONFIG_DIR) + "/fvml_fig1.json");
    EXPECT_EQ(fig1.n, 80u);
    EXPECT_EQ(fig1.p, 80u);
    EXPECT_NO_THROW(validate_config(fig1));
    const auto fig2 = load_config(std::string(UNISPHERE_CONFIG_DIR) + "/watson_fig2.json");
    EXPECT_EQ(fig2.n, 400u);
    EXPECT_EQ(fig2.p, 600u);
    EXPECT_EQ(model_family(fig2.model_family), "watson");
    EXPECT_NO_THROW(validate_config(fig2));
}

TEST(Config, SignalMapping) {
    auto c = small_config();
    EXPECT_DOUBLE_EQ(std::get<FvmlModel>(model_for_signal(c, 1.0)).kappa, fvml_kappa(1.0, 20, 15));
    c.model_family = WatsonModel{};
    EXPECT_DOUBLE_EQ(std::get<WatsonModel>(model_for_signal(c, 2.0)).kappa, watson_kappa(2.0, 20, 15));
    c.model_family = LowRankModel{};
    EXPECT_EQ(std::get<LowRankModel>(model_for_signal(c, 4.0)).k, lowrank_k(4.0, 20, 15));
    c.model_family = UniformModel{};
    EXPECT_EQ(model_dimension(model_for_signal(c, 4.0)), 15u);
}

TEST(Config, HashIsStableAndSensitive) {
    const auto c = small_config();
    EXPECT_EQ(config_hash(c).size(), 16u);
    EXPECT_EQ(config_hash(c), config_hash(config_from_json(config_to_json(c))));
    auto d = c;
    d.seed++;
    EXPECT_NE(config_hash(c), config_hash(d));
}

TEST(PowerCurve, RowAccounting) {
    const auto c = small_config();
    const auto pc = run_power_curve(c);
    ASSERT_EQ(pc.rows.size(), c.signal_grid.size() * c.methods.size());
    EXPECT_EQ(pc.config_hash, config_hash(c));
    for (std::size_t i = 0; i < pc.rows.size(); ++i) {
        const auto& r = pc.rows[i];
        EXPECT_EQ(r.tau, c.signal_grid[i / c.methods.size()]);
        EXPECT_EQ(r.method, c.methods[i % c.methods.size()].method);
        EXPECT_EQ(r.reps, c.reps);
        EXPECT_LE(r.rejections, r.reps);
        EXPECT_NEAR(r.se(), std::sqrt(r.rate() * (1 - r.rate()) / r.reps), 1e-15);
    }
    EXPECT_EQ(&pc.at(1.0, Method::Rayleigh), &pc.rows[5]);
    EXPECT_GT(pc.at(3.0, Method::Rayleigh).rate(), 0.5);

    const auto csv = csv_of(pc);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "family,tau,method,rate,se,reps,seed");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(pc.rows.size() + 1));
}

TEST(PowerCurve, ThreadCountDoesNotChangeOutput) {
    auto c = small_config();
    c.methods.push_back({Method::Projection});
    c.methods.push_back({Method::Bingham, Tail::Upper, {Calibration::Kind::MonteCarlo, 1000, 2}});
    EXPECT_EQ(csv_of(run_power_curve(c, 1)), csv_of(run_power_curve(c, 4)));
}

TEST(PowerCurve, ExportFiles) {
    const auto pc = run_power_curve(small_config());
    const auto csv = temp_path("curve.csv"), svg = temp_path("curve.svg");
    export_csv(pc, csv);
    export_svg(pc, svg);
    std::stringstream a, b;
    a << std::ifstream(csv).rdbuf();
    b << std::ifstream(svg).rdbuf();
    EXPECT_EQ(a.str(), csv_of(pc));
    EXPECT_NE(b.str().find("<svg"), std::string::npos);
    EXPECT_THROW(export_csv(pc, "/nonexistent_dir/x.csv"), IoError);
    std::filesystem::remove(csv);
    std::filesystem::remove(svg);
}

TEST(PowerCurve, WatsonRegimeWarning) {
    auto c = small_config();
    c.model_family = WatsonModel{};
    c.signal_grid = {1.0};
    EXPECT_FALSE(run_power_curve(c).warnings.empty());  // p = 15 < 5 n^{2/3}
}

TEST(Size, SupDistanceAtFivePercent) {
    ExperimentConfig c;
    c.n = c.p = 80;
    c.reps = 5000;
    c.methods = {{Method::SupDistance}};
    c.seed = 101;
    const auto pc = run_size_experiment(c);
    const double r = pc.rows.at(0).rate();
    EXPECT_GE(r, 0.03);
    EXPECT_LE(r, 0.07);
    EXPECT_EQ(csv_of(pc), csv_of(run_size_experiment(c)));
}

TEST(Size, SupDistanceAtHalf) {
    ExperimentConfig c;
    c.n = c.p = 80;
    c.reps = 5000;
    c.alpha = 0.5;
    c.methods = {{Method::SupDistance}};
    c.seed = 102;
    const double r = run_size_experiment(c).rows.at(0).rate();
    EXPECT_GE(r, 0.46);
    EXPECT_LE(r, 0.54);
}

TEST(Size, ForcesUniformNull) {
    auto c = small_config();
    c.signal_grid = {5.0, 10.0};
    const auto pc = run_size_experiment(c);
    ASSERT_EQ(pc.rows.size(), c.methods.size());
    EXPECT_EQ(pc.rows[0].tau, 0.0);
    EXPECT_EQ(pc.rows[0].family, "uniform");
}

TEST(NullCheck, ConvergesWithDimension) {
    const auto a = run_null_distribution_check(80, 80, 5000, 103);
    EXPECT_LE(a.ks, 0.03);
    EXPECT_EQ(a.standardized.size(), 5000u);
    EXPECT_TRUE(std::is_sorted(a.standardized.begin(), a.standardized.end()));
    const auto b = run_null_distribution_check(200, 200, 5000, 104);
    EXPECT_LE(b.ks, a.ks + 0.01);
}

TEST(NullCheck, SmallRunStillReturns) {
    const auto r = run_null_distribution_check(10, 5, 100, 105);
    EXPECT_GT(r.ks, 0.0);
    EXPECT_LE(r.ks, 1.0);
    EXPECT_GE(r.size, 0.0);
}

TEST(Nonlocal, CapMixtureNeedsRoom) {
    EXPECT_THROW(run_nonlocal_experiment(NonlocalKind::CapMixture, 10, 100, 0.05, 10, 1), ConfigError);
}

TEST(Nonlocal, SmallCapMixture) {
    const auto r = run_nonlocal_experiment(NonlocalKind::CapMixture, 10, 400, 0.05, 40, 106);
    ASSERT_EQ(r.rates.size(), 4u);
    EXPECT_EQ(r.rates[0].method, Method::SupDistance);
    EXPECT_EQ(r.rates[3].method, Method::Packing);
    EXPECT_GE(r.rates[0].rate(), 0.9);
    EXPECT_GE(r.share_B_negative, 0.0);
    EXPECT_LE(r.share_B_negative, 1.0);
    EXPECT_GE(r.mean_abs_R, std::abs(r.mean_R) - 1e-12);
}
