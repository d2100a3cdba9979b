#pragma once

#include <cstdint>
#include <string>

#include "em0/executor.hpp"

namespace em0 {

/// One of the measured STM32F0 operating points: frequency in MHz,
/// flash prefetch buffer on/off, flash waitstates 0 or 1. At 48 MHz the
/// flash cannot keep up without a waitstate, so WS=0 is invalid there.
struct HardwareConfig {
    int freq_mhz = 20;
    bool prefetch = false;
    int waitstates = 0;

    void validate() const;
    static HardwareConfig parse(const std::string& text); // "24,ON,1"
    std::string str() const;        // "24,ON,1"
    std::string bracket_str() const; // "[24, ON, 1]"

    bool operator==(const HardwareConfig&) const = default;
};

/// Flash prefetch buffer: one 32-bit word fetched ahead on sequential
/// flow, invalidated by any taken branch.
struct FetchUnitState {
    bool valid = false;
    uint32_t tag = 0; // word-aligned flash address currently buffered
};

unsigned base_cycles(const Instruction& instr, const StepEvents& events);

// Total cycles for one executed instruction: base cost plus waitstate
// penalties for flash instruction fetches that miss the prefetch buffer
// and for flash data reads. Updates the prefetch state.
unsigned cycles_for(const Instruction& instr, const StepEvents& events,
                    const HardwareConfig& cfg, FetchUnitState& fetch);

inline double wall_seconds(uint64_t cycles, const HardwareConfig& cfg) {
    return static_cast<double>(cycles) / (cfg.freq_mhz * 1e6);
}

} // namespace em0
