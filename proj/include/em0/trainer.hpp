#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "em0/energy.hpp"
#include "em0/timing.hpp"

namespace em0 {

struct TrainingSample {
    std::string name;
    std::array<double, 6> counters{}; // c1..c6 regressors
    double energy_nj = 0;             // measured target
};

struct EvaluationReport {
    uint64_t seed = 0;
    int k = 0;
    std::vector<double> r2_per_fold;
    double r2_mean = 0;
    double r2_std = 0; // population std over folds
    double mape_percent = 0;
    std::vector<double> residuals; // pred - actual, dataset order
};

// Fits beta >= 0 minimizing ||X beta - y|| with no intercept column.
// Requires >= 6 samples. An all-zero regressor column yields a zero
// coefficient (reported via the optional warnings list).
EnergyModel fit_nnls(const std::vector<TrainingSample>& dataset,
                     const HardwareConfig& config,
                     std::vector<std::string>* warnings = nullptr);

double mape(const EnergyModel& model,
            const std::vector<TrainingSample>& dataset);

// 1 - SS_res/SS_tot. Centered (the default) uses the sample mean of y in
// SS_tot; the uncentered variant uses raw sums of squares.
double r_squared(const EnergyModel& model,
                 const std::vector<TrainingSample>& samples,
                 bool centered = true);

EvaluationReport kfold_cv(const std::vector<TrainingSample>& dataset,
                          const HardwareConfig& config, int k = 10,
                          uint64_t shuffle_seed = 0, bool centered_r2 = true);

// CSV with header "name,c1,c2,c3,c4,c5,c6,energy_nj".
std::vector<TrainingSample> load_training_csv(std::istream& in);
std::vector<TrainingSample> load_training_csv_file(const std::string& path);

std::string dataset_fingerprint(const std::vector<TrainingSample>& dataset);

} // namespace em0
