#include "em0/energy.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "em0/errors.hpp"

namespace em0 {

using json = nlohmann::ordered_json;

double estimate(const EventCounters& counters, const EnergyModel& model) {
    double e = 0;
    for (unsigned i = 0; i < 6; ++i)
        e += model.beta[i] * static_cast<double>(counters.counter(i + 1));
    return e;
}

double estimate(const std::array<double, 6>& counters,
                const EnergyModel& model) {
    double e = 0;
    for (unsigned i = 0; i < 6; ++i) e += model.beta[i] * counters[i];
    return e;
}

namespace {

struct Row {
    int freq;
    bool prefetch;
    int ws;
    const char* beta[6];
    const char* measured;
    const char* mape;
};

// Published STM32F0-Discovery model coefficients, nJ per event.
constexpr Row kBuiltinRows[] = {
    {20, false, 0,
     {"0.964258", "1.652455", "2.091986", "1.109833", "0.650563", "0.633621"},
     "221.4", "2.80"},
    {20, false, 1,
     {"1.282474", "2.110668", "2.191545", "1.185609", "0.416602", "1.178991"},
     "274.9", "2.97"},
    {20, true, 0,
     {"1.003378", "1.885309", "1.802974", "1.122833", "0.849223", "0.475831"},
     "226.38", "2.86"},
    {20, true, 1,
     {"0.895879", "2.185851", "2.001178", "1.493364", "1.076354", "1.573758"},
     "227.9", "3.68"},
    {24, false, 0,
     {"0.959172", "1.888565", "1.357556", "1.089427", "0.993145", "0.562952"},
     "214.62", "3.22"},
    {24, false, 1,
     {"1.178558", "2.540429", "2.042475", "1.190892", "0.979651", "0.891088"},
     "264.88", "3.16"},
    {24, true, 0,
     {"0.985415", "1.933276", "1.448160", "1.075671", "1.011891", "0.617510"},
     "220.03", "3.36"},
    {24, true, 1,
     {"0.883755", "2.156046", "1.633465", "1.436556", "1.152560", "1.455166"},
     "220.05", "4.15"},
    {48, false, 1,
     {"1.096677", "2.364495", "1.627854", "1.173680", "0.681475", "0.652665"},
     "243.44", "3.65"},
    {48, true, 1,
     {"0.816331", "2.014612", "1.372157", "1.402116", "0.835035", "1.250446"},
     "202.5", "4.33"},
};

} // namespace

ModelRegistry::ModelRegistry() {
    for (const auto& row : kBuiltinRows) {
        BuiltinEntry e;
        e.model.config = {row.freq, row.prefetch, row.ws};
        for (unsigned i = 0; i < 6; ++i) {
            e.model.beta_str[i] = row.beta[i];
            e.model.beta[i] = std::stod(row.beta[i]);
        }
        e.model.provenance = "builtin";
        e.measured_energy_j = row.measured;
        e.mape_percent = row.mape;
        entries_.push_back(std::move(e));
    }
}

const ModelRegistry& ModelRegistry::builtin() {
    static const ModelRegistry registry;
    return registry;
}

const BuiltinEntry&
ModelRegistry::lookup_entry(const HardwareConfig& config) const {
    for (const auto& e : entries_)
        if (e.model.config == config) return e;
    throw UnsupportedConfig("no builtin model for " + config.bracket_str());
}

const EnergyModel& ModelRegistry::lookup(const HardwareConfig& config) const {
    return lookup_entry(config).model;
}

namespace {

std::string beta_string(const EnergyModel& m, unsigned i) {
    if (!m.beta_str[i].empty()) return m.beta_str[i];
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", m.beta[i]);
    return buf;
}

} // namespace

void save_model(std::ostream& out, const EnergyModel& model) {
    json j;
    j["config"] = {{"freq_mhz", model.config.freq_mhz},
                   {"prefetch", model.config.prefetch},
                   {"waitstates", model.config.waitstates}};
    json beta;
    for (unsigned i = 0; i < 6; ++i)
        beta["c" + std::to_string(i + 1)] = beta_string(model, i);
    j["beta_nj"] = beta;
    j["provenance"] = model.provenance;
    out << j.dump(2) << "\n";
}

EnergyModel load_model(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("model file is not valid JSON: ") +
                          e.what());
    }
    EnergyModel m;
    try {
        const auto& cfg = j.at("config");
        m.config.freq_mhz = cfg.at("freq_mhz").get<int>();
        m.config.prefetch = cfg.at("prefetch").get<bool>();
        m.config.waitstates = cfg.at("waitstates").get<int>();
        const auto& beta = j.at("beta_nj");
        for (unsigned i = 0; i < 6; ++i) {
            std::string key = "c" + std::to_string(i + 1);
            const auto& v = beta.at(key);
            m.beta_str[i] = v.is_string() ? v.get<std::string>()
                                          : v.dump();
            m.beta[i] = std::stod(m.beta_str[i]);
        }
        m.provenance = j.value("provenance", "unknown");
    } catch (const json::exception& e) {
        throw SchemaError(std::string("model file schema error: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw SchemaError("model coefficient is not a decimal number");
    }
    m.config.validate();
    for (unsigned i = 0; i < 6; ++i) {
        if (m.beta[i] < 0)
            throw NegativeCoefficient("c" + std::to_string(i + 1) +
                                      " coefficient is negative");
    }
    return m;
}

EnergyModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open model file " + path);
    return load_model(in);
}

} // namespace em0
