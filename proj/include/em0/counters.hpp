#pragma once

#include <array>
#include <cstdint>

#include "em0/executor.hpp"

namespace em0 {

/// The six model counters plus cycles and a per-opcode-class histogram.
/// c1: executed instructions excluding muls, c2: muls, c3: taken branches,
/// c4: RAM data reads, c5: RAM writes, c6: flash data reads.
struct EventCounters {
    uint64_t c1 = 0;
    uint64_t c2 = 0;
    uint64_t c3 = 0;
    uint64_t c4 = 0;
    uint64_t c5 = 0;
    uint64_t c6 = 0;
    uint64_t cycles = 0;
    std::array<uint64_t, kNumOpcodeClasses> histogram{};

    uint64_t counter(unsigned index_1_based) const {
        switch (index_1_based) {
        case 1: return c1;
        case 2: return c2;
        case 3: return c3;
        case 4: return c4;
        case 5: return c5;
        default: return c6;
        }
    }

    uint64_t retired() const { return c1 + c2; }
    uint64_t histogram_total() const;

    bool operator==(const EventCounters&) const = default;
};

// Counter increments for one architecturally executed instruction.
// Instruction fetches never touch c4-c6.
EventCounters classify(const StepEvents& events);

// Fieldwise sum; associative and commutative with a default-constructed
// EventCounters as identity.
EventCounters merge(const EventCounters& a, const EventCounters& b);

} // namespace em0
