#include "em0/simulator.hpp"

#include "em0/errors.hpp"

namespace em0 {

const char* exit_reason_name(ExitReason r) {
    switch (r) {
    case ExitReason::Breakpoint: return "breakpoint";
    case ExitReason::UndefinedEncoding: return "undefined_encoding";
    case ExitReason::MemoryFault: return "memory_fault";
    case ExitReason::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

Simulator::Simulator(MemoryMap map, HardwareConfig cfg)
    : mem_(std::move(map)), cfg_(cfg) {
    cfg_.validate();
}

void Simulator::reset_from_vector_table() {
    uint32_t sp = mem_.read(MemoryMap::kFlashBase, 4, Purpose::Data).value;
    uint32_t reset = mem_.read(MemoryMap::kFlashBase + 4, 4,
                               Purpose::Data).value;
    set_entry(reset & ~1u, sp);
}

void Simulator::set_entry(uint32_t pc, uint32_t sp) {
    state_.pc() = pc & ~1u;
    state_.sp() = sp;
    state_.halted = false;
    fetch_ = {};
}

StepReport Simulator::step() {
    if (state_.halted) throw Halted();

    uint32_t addr = state_.pc();
    auto f1 = mem_.read(addr, 2, Purpose::Fetch);
    StepReport report;
    uint16_t hw1 = static_cast<uint16_t>(f1.value);
    uint16_t hw2 = 0;
    report.events.fetch_accesses.push_back({addr, 2, f1.cls.region});
    if (is_32bit_prefix(hw1)) {
        auto f2 = mem_.read(addr + 2, 2, Purpose::Fetch);
        hw2 = static_cast<uint16_t>(f2.value);
        report.events.fetch_accesses.push_back({addr + 2, 2, f2.cls.region});
    }

    Instruction instr = decode(hw1, hw2, addr);
    auto fetches = std::move(report.events.fetch_accesses);
    report.events = execute(state_, instr, mem_);
    report.events.fetch_accesses = std::move(fetches);

    report.cycle_delta = cycles_for(instr, report.events, cfg_, fetch_);
    report.counter_delta = classify(report.events);
    report.counter_delta.cycles = report.cycle_delta;
    totals_ = merge(totals_, report.counter_delta);
    return report;
}

RunReport Simulator::run(uint64_t max_instructions) {
    RunReport report;
    uint64_t retired_before = state_.instr_retired;
    try {
        while (!state_.halted &&
               state_.instr_retired - retired_before < max_instructions) {
            step();
        }
        report.exit_reason = state_.halted ? ExitReason::Breakpoint
                                           : ExitReason::BudgetExhausted;
    } catch (const UndefinedEncoding& e) {
        report.exit_reason = ExitReason::UndefinedEncoding;
        report.fault_address = e.address;
        report.detail = "undefined encoding at " + detail::hex32(e.address);
        state_.halted = true;
    } catch (const MemoryFault& e) {
        report.exit_reason = ExitReason::MemoryFault;
        report.fault_address = e.address;
        report.detail = e.what();
        state_.halted = true;
    }
    report.instr_retired = state_.instr_retired - retired_before;
    report.counters = totals_;
    report.final_state = state_;
    return report;
}

} // namespace em0
