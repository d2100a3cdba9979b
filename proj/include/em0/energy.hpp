#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "em0/counters.hpp"
#include "em0/timing.hpp"

namespace em0 {

/// Six nonnegative nJ/event coefficients bound to one hardware
/// configuration. The model has no constant term: zero counters predict
/// exactly zero energy.
struct EnergyModel {
    HardwareConfig config;
    std::array<double, 6> beta{}; // nJ per event, indexed c1..c6
    // Canonical decimal strings when known (builtins and loaded files);
    // empty entries fall back to a 17-digit rendering on save.
    std::array<std::string, 6> beta_str{};
    std::string provenance = "trained";
};

double estimate(const EventCounters& counters, const EnergyModel& model);

// Static per-block deltas: counters as plain doubles.
double estimate(const std::array<double, 6>& counters,
                const EnergyModel& model);

struct BuiltinEntry {
    EnergyModel model;
    std::string measured_energy_j; // published aggregate, informational
    std::string mape_percent;      // published validation error
};

/// The ten published operating-point models. Immutable after construction.
class ModelRegistry {
public:
    static const ModelRegistry& builtin();

    const std::vector<BuiltinEntry>& entries() const { return entries_; }

    // Throws UnsupportedConfig for anything outside the ten entries.
    const EnergyModel& lookup(const HardwareConfig& config) const;
    const BuiltinEntry& lookup_entry(const HardwareConfig& config) const;

private:
    ModelRegistry();
    std::vector<BuiltinEntry> entries_;
};

void save_model(std::ostream& out, const EnergyModel& model);
EnergyModel load_model(std::istream& in);
EnergyModel load_model_file(const std::string& path);

} // namespace em0
