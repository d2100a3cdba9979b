#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "em0/counters.hpp"
#include "em0/executor.hpp"
#include "em0/machine_state.hpp"
#include "em0/memory.hpp"
#include "em0/timing.hpp"

namespace em0 {

enum class ExitReason {
    Breakpoint,
    UndefinedEncoding,
    MemoryFault,
    BudgetExhausted,
};

const char* exit_reason_name(ExitReason r);

struct StepReport {
    StepEvents events;
    unsigned cycle_delta = 0;
    EventCounters counter_delta;
};

struct RunReport {
    ExitReason exit_reason = ExitReason::Breakpoint;
    uint64_t instr_retired = 0;
    EventCounters counters;
    MachineState final_state;
    std::optional<uint32_t> fault_address;
    std::string detail;

    double wall_seconds(const HardwareConfig& cfg) const {
        return em0::wall_seconds(counters.cycles, cfg);
    }
};

/// Single-threaded; one instance per program run. Independent instances
/// may run on different threads.
class Simulator {
public:
    Simulator(MemoryMap map, HardwareConfig cfg);

    // sp from the word at the flash base, pc from the reset vector.
    void reset_from_vector_table();
    void set_entry(uint32_t pc, uint32_t sp);

    // Executes exactly one instruction. Throws Halted after termination;
    // decode and memory errors propagate.
    StepReport step();

    // Executes until BKPT, an undefined encoding, a memory fault or the
    // instruction budget; never throws for those outcomes.
    RunReport run(uint64_t max_instructions);

    const MachineState& state() const { return state_; }
    MachineState& state() { return state_; }
    const MemoryMap& memory() const { return mem_; }
    MemoryMap& memory() { return mem_; }
    const EventCounters& counters() const { return totals_; }
    const HardwareConfig& config() const { return cfg_; }

private:
    MemoryMap mem_;
    HardwareConfig cfg_;
    MachineState state_;
    FetchUnitState fetch_;
    EventCounters totals_;
};

} // namespace em0
