#include "em0/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "em0/errors.hpp"
#include "em0/nnls.hpp"

namespace em0 {

namespace {

double predict(const EnergyModel& m, const TrainingSample& s) {
    double e = 0;
    for (unsigned i = 0; i < 6; ++i) e += m.beta[i] * s.counters[i];
    return e;
}

} // namespace

EnergyModel fit_nnls(const std::vector<TrainingSample>& dataset,
                     const HardwareConfig& config,
                     std::vector<std::string>* warnings) {
    if (dataset.size() < 6)
        throw InsufficientData("need at least 6 samples, got " +
                               std::to_string(dataset.size()));

    std::vector<std::vector<double>> X;
    std::vector<double> y;
    X.reserve(dataset.size());
    y.reserve(dataset.size());
    std::array<bool, 6> nonzero{};
    for (const auto& s : dataset) {
        X.emplace_back(s.counters.begin(), s.counters.end());
        y.push_back(s.energy_nj);
        for (unsigned i = 0; i < 6; ++i)
            if (s.counters[i] != 0) nonzero[i] = true;
    }
    if (std::none_of(nonzero.begin(), nonzero.end(), [](bool b) { return b; }))
        throw DegenerateDesign("all regressor columns are zero");
    if (warnings) {
        for (unsigned i = 0; i < 6; ++i) {
            if (!nonzero[i])
                warnings->push_back("column c" + std::to_string(i + 1) +
                                    " is all zero; its coefficient is 0");
        }
    }

    auto beta = nnls(X, y);
    EnergyModel model;
    model.config = config;
    for (unsigned i = 0; i < 6; ++i) model.beta[i] = beta[i];
    model.provenance = "trained (dataset " + dataset_fingerprint(dataset) + ")";
    return model;
}

double mape(const EnergyModel& model,
            const std::vector<TrainingSample>& dataset) {
    if (dataset.empty()) throw InsufficientData("mape needs samples");
    double acc = 0;
    for (const auto& s : dataset) {
        if (s.energy_nj <= 0)
            throw InsufficientData("mape requires positive measured energy");
        acc += std::abs(predict(model, s) - s.energy_nj) / s.energy_nj;
    }
    return 100.0 * acc / static_cast<double>(dataset.size());
}

double r_squared(const EnergyModel& model,
                 const std::vector<TrainingSample>& samples, bool centered) {
    if (samples.size() < 2)
        throw InsufficientData("r_squared needs at least 2 samples");
    double mean = 0;
    for (const auto& s : samples) mean += s.energy_nj;
    mean /= static_cast<double>(samples.size());

    double ss_res = 0, ss_tot = 0;
    for (const auto& s : samples) {
        double r = predict(model, s) - s.energy_nj;
        ss_res += r * r;
        double d = centered ? s.energy_nj - mean : s.energy_nj;
        ss_tot += d * d;
    }
    if (ss_tot == 0)
        throw ZeroVariance("all target values are identical");
    return 1.0 - ss_res / ss_tot;
}

EvaluationReport kfold_cv(const std::vector<TrainingSample>& dataset,
                          const HardwareConfig& config, int k,
                          uint64_t shuffle_seed, bool centered_r2) {
    if (k < 2) throw InsufficientData("k must be at least 2");
    if (dataset.size() < static_cast<size_t>(k))
        throw InsufficientData("dataset smaller than fold count");

    std::vector<size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);

    EvaluationReport report;
    report.seed = shuffle_seed;
    report.k = k;

    // Fold sizes differ by at most one.
    size_t base = dataset.size() / k;
    size_t extra = dataset.size() % k;
    size_t pos = 0;
    for (int fold = 0; fold < k; ++fold) {
        size_t len = base + (static_cast<size_t>(fold) < extra ? 1 : 0);
        std::vector<TrainingSample> train, test;
        for (size_t j = 0; j < dataset.size(); ++j) {
            const auto& s = dataset[order[j]];
            if (j >= pos && j < pos + len)
                test.push_back(s);
            else
                train.push_back(s);
        }
        pos += len;
        auto model = fit_nnls(train, config);
        report.r2_per_fold.push_back(r_squared(model, test, centered_r2));
    }

    double mean = std::accumulate(report.r2_per_fold.begin(),
                                  report.r2_per_fold.end(), 0.0) /
                  k;
    double var = 0;
    for (double v : report.r2_per_fold) var += (v - mean) * (v - mean);
    report.r2_mean = mean;
    report.r2_std = std::sqrt(var / k);

    // Final model on all data; cross-validation is diagnostic only.
    auto final_model = fit_nnls(dataset, config);
    report.mape_percent = mape(final_model, dataset);
    report.residuals.reserve(dataset.size());
    for (const auto& s : dataset)
        report.residuals.push_back(predict(final_model, s) - s.energy_nj);
    return report;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

} // namespace

std::vector<TrainingSample> load_training_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw InsufficientData("empty training CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "name,c1,c2,c3,c4,c5,c6,energy_nj")
        throw SchemaError("training CSV header must be "
                          "name,c1,c2,c3,c4,c5,c6,energy_nj");

    std::vector<TrainingSample> samples;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 8)
            throw SchemaError("line " + std::to_string(lineno) +
                              ": expected 8 fields");
        TrainingSample s;
        s.name = fields[0];
        try {
            for (unsigned i = 0; i < 6; ++i)
                s.counters[i] = std::stod(fields[1 + i]);
            s.energy_nj = std::stod(fields[7]);
        } catch (const std::exception&) {
            throw SchemaError("line " + std::to_string(lineno) +
                              ": non-numeric field");
        }
        if (s.energy_nj <= 0)
            throw SchemaError("line " + std::to_string(lineno) +
                              ": energy_nj must be positive");
        bool any = false;
        for (double c : s.counters) {
            if (c < 0)
                throw SchemaError("line " + std::to_string(lineno) +
                                  ": negative counter");
            any = any || c > 0;
        }
        if (s.counters[0] + s.counters[1] <= 0)
            throw SchemaError("line " + std::to_string(lineno) +
                              ": sample retired no instructions");
        samples.push_back(std::move(s));
    }
    return samples;
}

std::vector<TrainingSample> load_training_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open training CSV " + path);
    return load_training_csv(in);
}

std::string dataset_fingerprint(const std::vector<TrainingSample>& dataset) {
    // FNV-1a over the textual form of every sample.
    uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
    };
    char buf[32];
    for (const auto& s : dataset) {
        mix(s.name);
        for (double c : s.counters) {
            std::snprintf(buf, sizeof buf, "%.17g,", c);
            mix(buf);
        }
        std::snprintf(buf, sizeof buf, "%.17g;", s.energy_nj);
        mix(buf);
    }
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

} // namespace em0
