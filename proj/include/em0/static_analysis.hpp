#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "em0/counters.hpp"
#include "em0/energy.hpp"
#include "em0/instruction.hpp"
#include "em0/memory.hpp"

namespace em0 {

enum class EdgeKind { Fallthrough, TakenBranch, Call, Return, Indirect };

const char* edge_kind_name(EdgeKind kind);

struct BlockExit {
    EdgeKind kind;
    std::optional<uint32_t> target; // absent for indirect/return edges
};

/// A maximal straight-line ISA region. base_counters assumes the
/// fallthrough exit (c3 = 0); leaving through a taken edge adds one taken
/// branch on top.
struct BasicBlock {
    uint32_t start = 0;
    uint32_t end = 0; // exclusive
    std::vector<Instruction> instructions;
    std::vector<BlockExit> exits;
    EventCounters base_counters;
    bool has_taken_exit = false;
    // Addresses of instructions whose data target region could not be
    // resolved statically (classified as RAM by default).
    std::vector<uint32_t> unresolved_accesses;
};

struct StaticCFG {
    std::map<uint32_t, BasicBlock> blocks;
    uint32_t entry = 0;
    std::vector<std::string> diagnostics; // decode errors etc.
};

// Recursive-descent disassembly from entry plus any extra roots. Blocks
// split at branch targets; indirect transfers end a block with an
// unknown-target edge. Decode errors are reported and analysis continues
// on other paths.
StaticCFG extract_cfg(const MemoryMap& map, uint32_t entry,
                      const std::vector<uint32_t>& roots = {});

// Per-execution counter prediction for one block (fills base_counters,
// has_taken_exit and unresolved_accesses).
void predict_block_counters(BasicBlock& block);

struct BlockCost {
    uint32_t start;
    uint64_t executions;
    uint64_t taken_exits;
    double energy_nj;
};

struct StaticEstimate {
    double total_nj = 0;
    EventCounters combined; // execution-count-scaled counter totals
    std::vector<BlockCost> breakdown;
};

// Block execution counts and taken-edge counts are inputs (profiling or
// user-supplied loop bounds); keys are block start addresses.
StaticEstimate estimate_static(const StaticCFG& cfg,
                               const std::map<uint32_t, uint64_t>& exec_counts,
                               const std::map<uint32_t, uint64_t>& taken_counts,
                               const EnergyModel& model);

} // namespace em0
