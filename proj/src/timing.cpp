#include "em0/timing.hpp"

#include <bit>

#include "em0/errors.hpp"

namespace em0 {

void HardwareConfig::validate() const {
    if (freq_mhz != 20 && freq_mhz != 24 && freq_mhz != 48)
        throw UnsupportedConfig("frequency must be 20, 24 or 48 MHz");
    if (waitstates != 0 && waitstates != 1)
        throw UnsupportedConfig("waitstates must be 0 or 1");
    if (freq_mhz == 48 && waitstates == 0)
        throw UnsupportedConfig("48 MHz requires 1 waitstate");
}

HardwareConfig HardwareConfig::parse(const std::string& text) {
    auto c1 = text.find(',');
    auto c2 = text.rfind(',');
    if (c1 == std::string::npos || c2 == c1)
        throw UnsupportedConfig("config must look like 24,ON,1: " + text);
    HardwareConfig cfg;
    try {
        cfg.freq_mhz = std::stoi(text.substr(0, c1));
        cfg.waitstates = std::stoi(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw UnsupportedConfig("config must look like 24,ON,1: " + text);
    }
    std::string pf = text.substr(c1 + 1, c2 - c1 - 1);
    if (pf == "ON" || pf == "on")
        cfg.prefetch = true;
    else if (pf == "OFF" || pf == "off")
        cfg.prefetch = false;
    else
        throw UnsupportedConfig("prefetch must be ON or OFF: " + text);
    cfg.validate();
    return cfg;
}

std::string HardwareConfig::str() const {
    return std::to_string(freq_mhz) + (prefetch ? ",ON," : ",OFF,") +
           std::to_string(waitstates);
}

std::string HardwareConfig::bracket_str() const {
    return "[" + std::to_string(freq_mhz) + (prefetch ? ", ON, " : ", OFF, ") +
           std::to_string(waitstates) + "]";
}

// Cortex-M0 cycle table (single-cycle multiplier). BL is treated as one
// instruction of the taken-branch class.
unsigned base_cycles(const Instruction& instr, const StepEvents& events) {
    switch (instr.op) {
    case Op::BCond:
        return events.branch_taken ? 3 : 1;
    case Op::B:
    case Op::Bl:
    case Op::Bx:
    case Op::BlxReg:
        return 3;
    case Op::AddHi:
    case Op::MovHi:
        return instr.rd == 15 ? 3 : 1;
    case Op::Push:
    case Op::Stm:
    case Op::Ldm:
        return 1 + std::popcount(instr.reglist);
    case Op::Pop: {
        unsigned n = std::popcount(instr.reglist);
        return (instr.reglist & 0x8000) ? 4 + n : 1 + n;
    }
    default:
        break;
    }
    switch (instr.kind) {
    case OpcodeClass::Load:
    case OpcodeClass::Store:
        return 2;
    default:
        return 1; // data processing, muls, bkpt, hints, system no-ops
    }
}

unsigned cycles_for(const Instruction& instr, const StepEvents& events,
                    const HardwareConfig& cfg, FetchUnitState& fetch) {
    unsigned cycles = base_cycles(instr, events);

    if (cfg.waitstates > 0) {
        for (const auto& f : events.fetch_accesses) {
            if (f.region != Region::Flash) continue;
            uint32_t word = f.address & ~3u;
            if (cfg.prefetch && fetch.valid && fetch.tag == word) continue;
            cycles += cfg.waitstates;
            if (cfg.prefetch) {
                fetch.valid = true;
                fetch.tag = word;
            }
        }
        for (const auto& d : events.data_accesses) {
            if (d.direction == Direction::Read && d.region == Region::Flash)
                cycles += cfg.waitstates;
        }
    }

    if (events.branch_taken) {
        fetch.valid = false;
    } else if (cfg.prefetch) {
        // Sequential flow: the buffer runs ahead of the next fetch.
        fetch.valid = true;
        fetch.tag = (instr.address + instr.width) & ~3u;
    }
    return cycles;
}

} // namespace em0
