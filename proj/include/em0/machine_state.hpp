#pragma once

#include <array>
#include <cstdint>

namespace em0 {

struct MachineState {
    std::array<uint32_t, 16> regs{}; // r0-r12, sp=13, lr=14, pc=15
    bool flag_n = false;
    bool flag_z = false;
    bool flag_c = false;
    bool flag_v = false;
    bool halted = false;
    uint64_t instr_retired = 0;

    uint32_t& sp() { return regs[13]; }
    uint32_t& lr() { return regs[14]; }
    uint32_t& pc() { return regs[15]; }
    uint32_t sp() const { return regs[13]; }
    uint32_t lr() const { return regs[14]; }
    uint32_t pc() const { return regs[15]; }
};

} // namespace em0
