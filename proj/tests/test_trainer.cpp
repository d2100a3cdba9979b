#include <doctest.h>

#include <random>
#include <sstream>

#include "em0/errors.hpp"
#include "em0/trainer.hpp"

using namespace em0;

namespace {

const HardwareConfig kCfg{24, true, 1};

// Synthetic dataset drawn from a known ground-truth model, with optional
// multiplicative noise.
std::vector<TrainingSample> synth(size_t n, uint32_t seed,
                                  double noise_frac = 0.0) {
    const std::array<double, 6> truth = {0.9, 2.1, 1.6, 1.4, 1.1, 1.45};
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> counts(0, 2000);
    std::normal_distribution<double> noise(0.0, noise_frac);
    std::vector<TrainingSample> out;
    for (size_t i = 0; i < n; ++i) {
        TrainingSample s;
        s.name = "synthetic_" + std::to_string(i);
        s.counters[0] = counts(rng) + 50; // always retires instructions
        for (unsigned c = 1; c < 6; ++c) s.counters[c] = counts(rng);
        double e = 0;
        for (unsigned c = 0; c < 6; ++c) e += truth[c] * s.counters[c];
        s.energy_nj = e * (1.0 + (noise_frac > 0 ? noise(rng) : 0.0));
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

TEST_CASE("fit_nnls recovers an exact linear model") {
    auto data = synth(60, 1);
    auto model = fit_nnls(data, kCfg);
    CHECK(model.config == kCfg);
    CHECK(model.beta[0] == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(model.beta[5] == doctest::Approx(1.45).epsilon(1e-9));
    CHECK(r_squared(model, data) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mape(model, data) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(model.provenance.rfind("trained (dataset ", 0) == 0);
}

TEST_CASE("fit_nnls requires six samples and a usable design") {
    auto data = synth(5, 2);
    CHECK_THROWS_AS(fit_nnls(data, kCfg), InsufficientData);

    std::vector<TrainingSample> zeros(8);
    for (auto& s : zeros) s.energy_nj = 10;
    CHECK_THROWS_AS(fit_nnls(zeros, kCfg), DegenerateDesign);
}

TEST_CASE("fit_nnls warns about all-zero columns") {
    auto data = synth(30, 3);
    for (auto& s : data) {
        double removed = s.counters[1];
        s.counters[1] = 0;
        s.energy_nj -= 2.1 * removed; // keep the rest exact
    }
    std::vector<std::string> warnings;
    auto model = fit_nnls(data, kCfg, &warnings);
    CHECK(model.beta[1] == 0.0);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("c2") != std::string::npos);
}

TEST_CASE("mape and r_squared on hand-computed values") {
    // model predicts exactly 2*c1; targets are off by known ratios
    EnergyModel m;
    m.beta = {2, 0, 0, 0, 0, 0};
    std::vector<TrainingSample> data(2);
    data[0].counters = {10, 0, 0, 0, 0, 0};
    data[0].energy_nj = 25; // pred 20 -> |err|/y = 0.2
    data[1].counters = {20, 0, 0, 0, 0, 0};
    data[1].energy_nj = 50; // pred 40 -> 0.2
    CHECK(mape(m, data) == doctest::Approx(20.0).epsilon(1e-12));

    // centered R^2: mean 37.5, ss_tot = 312.5, ss_res = 25+100
    CHECK(r_squared(m, data) == doctest::Approx(1.0 - 125.0 / 312.5)
                                    .epsilon(1e-12));
    // uncentered: ss_tot = 625 + 2500
    CHECK(r_squared(m, data, false) == doctest::Approx(1.0 - 125.0 / 3125.0)
                                           .epsilon(1e-12));
}

TEST_CASE("r_squared guards") {
    EnergyModel m;
    std::vector<TrainingSample> one(1);
    CHECK_THROWS_AS(r_squared(m, one), InsufficientData);
    std::vector<TrainingSample> flat(3);
    for (auto& s : flat) s.energy_nj = 7;
    CHECK_THROWS_AS(r_squared(m, flat), ZeroVariance);
    CHECK_NOTHROW(r_squared(m, flat, false)); // uncentered total is nonzero
}

TEST_CASE("mape requires positive targets") {
    EnergyModel m;
    std::vector<TrainingSample> data(1);
    data[0].energy_nj = 0;
    CHECK_THROWS_AS(mape(m, data), InsufficientData);
    CHECK_THROWS_AS(mape(m, {}), InsufficientData);
}

TEST_CASE("cross-validation on noiseless data is perfect") {
    auto data = synth(80, 4);
    auto rep = kfold_cv(data, kCfg, 10, 42);
    CHECK(rep.k == 10);
    CHECK(rep.seed == 42);
    CHECK(rep.r2_per_fold.size() == 10);
    CHECK(rep.r2_mean == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.r2_std == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep.mape_percent == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(rep.residuals.size() == data.size());
}

TEST_CASE("cross-validation tolerates mild noise") {
    auto data = synth(200, 5, 0.01);
    auto rep = kfold_cv(data, kCfg, 10, 7);
    CHECK(rep.r2_mean > 0.99);
    CHECK(rep.r2_std < 0.01);
    CHECK(rep.mape_percent < 3.0);
}

TEST_CASE("cross-validation is deterministic per seed") {
    auto data = synth(60, 6, 0.05);
    auto a = kfold_cv(data, kCfg, 10, 99);
    auto b = kfold_cv(data, kCfg, 10, 99);
    CHECK(a.r2_per_fold == b.r2_per_fold);
    CHECK(a.mape_percent == b.mape_percent);
    auto c = kfold_cv(data, kCfg, 10, 100);
    CHECK(a.r2_per_fold != c.r2_per_fold); // different shuffle
}

TEST_CASE("cross-validation fold sizes differ by at most one") {
    // 23 samples over 10 folds: implied test sizes 3,3,3,2,2,...
    auto data = synth(23, 7, 0.02);
    auto rep = kfold_cv(data, kCfg, 10, 1);
    CHECK(rep.r2_per_fold.size() == 10);
    CHECK_THROWS_AS(kfold_cv(synth(5, 8), kCfg, 10, 1), InsufficientData);
    CHECK_THROWS_AS(kfold_cv(data, kCfg, 1, 1), InsufficientData);
}

TEST_CASE("training CSV loads and validates") {
    std::stringstream good(
        "name,c1,c2,c3,c4,c5,c6,energy_nj\n"
        "prog_a,100,5,10,20,15,4,157.18\n"
        "\n"
        "prog_b,50,0,3,1,1,0,60.5\r\n");
    auto samples = load_training_csv(good);
    REQUIRE(samples.size() == 2);
    CHECK(samples[0].name == "prog_a");
    CHECK(samples[0].counters[0] == 100);
    CHECK(samples[0].counters[5] == 4);
    CHECK(samples[0].energy_nj == doctest::Approx(157.18));
    CHECK(samples[1].name == "prog_b");

    auto loads = [](const std::string& text) {
        std::stringstream ss(text);
        return load_training_csv(ss);
    };
    CHECK_THROWS_AS(loads(""), InsufficientData);
    CHECK_THROWS_AS(loads("wrong,header\n"), SchemaError);
    CHECK_THROWS_AS(loads("name,c1,c2,c3,c4,c5,c6,energy_nj\na,1,2,3\n"),
                    SchemaError);
    CHECK_THROWS_AS(
        loads("name,c1,c2,c3,c4,c5,c6,energy_nj\na,1,2,3,4,5,6,abc\n"),
        SchemaError);
    CHECK_THROWS_AS(
        loads("name,c1,c2,c3,c4,c5,c6,energy_nj\na,1,2,3,4,5,6,-7\n"),
        SchemaError);
    CHECK_THROWS_AS(
        loads("name,c1,c2,c3,c4,c5,c6,energy_nj\na,-1,2,3,4,5,6,7\n"),
        SchemaError);
    CHECK_THROWS_AS(
        loads("name,c1,c2,c3,c4,c5,c6,energy_nj\na,0,0,3,4,5,6,7\n"),
        SchemaError); // retired no instructions
}

TEST_CASE("dataset fingerprint is stable and content-sensitive") {
    auto data = synth(10, 9);
    auto f1 = dataset_fingerprint(data);
    auto f2 = dataset_fingerprint(data);
    CHECK(f1 == f2);
    CHECK(f1.size() == 16);
    auto changed = data;
    changed[3].energy_nj += 0.001;
    CHECK(dataset_fingerprint(changed) != f1);
    auto renamed = data;
    renamed[0].name = "other";
    CHECK(dataset_fingerprint(renamed) != f1);
}
