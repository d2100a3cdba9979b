#pragma once

#include <cstdint>
#include <vector>

#include "em0/instruction.hpp"
#include "em0/machine_state.hpp"
#include "em0/memory.hpp"

namespace em0 {

struct DataAccess {
    uint32_t address;
    uint8_t size;
    Direction direction;
    Region region;
};

struct FetchAccess {
    uint32_t address;
    uint8_t size;
    Region region;
};

struct StepEvents {
    Instruction instruction;
    bool branch_taken = false;
    std::vector<DataAccess> data_accesses;
    std::vector<FetchAccess> fetch_accesses;
};

// Architecturally executes one decoded instruction. The state's pc must
// equal instr.address on entry; on return pc holds the next instruction
// address. fetch_accesses is left empty (the simulator records fetches).
StepEvents execute(MachineState& state, const Instruction& instr,
                   MemoryMap& bus);

} // namespace em0
