#include "em0/static_analysis.hpp"

#include <bit>
#include <deque>
#include <set>

#include "em0/errors.hpp"

namespace em0 {

namespace {

struct Decoded {
    Instruction instr;
    bool terminates;                   // ends a basic block
    std::vector<BlockExit> exits;      // exits when terminating
};

uint32_t branch_target(const Instruction& i) {
    return i.address + 4 + static_cast<int32_t>(i.imm);
}

Decoded analyze(const Instruction& i) {
    Decoded d{i, false, {}};
    uint32_t next = i.address + i.width;
    switch (i.op) {
    case Op::BCond:
        d.terminates = true;
        d.exits = {{EdgeKind::TakenBranch, branch_target(i)},
                   {EdgeKind::Fallthrough, next}};
        break;
    case Op::B:
        d.terminates = true;
        d.exits = {{EdgeKind::TakenBranch, branch_target(i)}};
        break;
    case Op::Bl:
        d.terminates = true;
        d.exits = {{EdgeKind::Call, branch_target(i)},
                   {EdgeKind::Fallthrough, next}};
        break;
    case Op::Bx:
        d.terminates = true;
        d.exits = {{i.rm == 14 ? EdgeKind::Return : EdgeKind::Indirect,
                    std::nullopt}};
        break;
    case Op::BlxReg:
        d.terminates = true;
        d.exits = {{EdgeKind::Call, std::nullopt},
                   {EdgeKind::Fallthrough, next}};
        break;
    case Op::Pop:
        if (i.reglist & 0x8000) {
            d.terminates = true;
            d.exits = {{EdgeKind::Return, std::nullopt}};
        }
        break;
    case Op::AddHi:
    case Op::MovHi:
        if (i.rd == 15) {
            d.terminates = true;
            d.exits = {{EdgeKind::Indirect, std::nullopt}};
        }
        break;
    case Op::Bkpt:
        d.terminates = true; // terminal, no exits
        break;
    default:
        break;
    }
    return d;
}

Instruction decode_at(const MemoryMap& map, uint32_t addr) {
    uint16_t hw1 =
        static_cast<uint16_t>(map.read(addr, 2, Purpose::Fetch).value);
    uint16_t hw2 = 0;
    if (is_32bit_prefix(hw1))
        hw2 = static_cast<uint16_t>(map.read(addr + 2, 2,
                                             Purpose::Fetch).value);
    return decode(hw1, hw2, addr);
}

} // namespace

const char* edge_kind_name(EdgeKind kind) {
    switch (kind) {
    case EdgeKind::Fallthrough: return "fallthrough";
    case EdgeKind::TakenBranch: return "taken_branch";
    case EdgeKind::Call: return "call";
    case EdgeKind::Return: return "return";
    case EdgeKind::Indirect: return "indirect";
    }
    return "?";
}

StaticCFG extract_cfg(const MemoryMap& map, uint32_t entry,
                      const std::vector<uint32_t>& roots) {
    StaticCFG cfg;
    cfg.entry = entry & ~1u;

    // Pass 1: discover block leaders by tracing reachable code.
    std::set<uint32_t> leaders;
    std::set<uint32_t> visited;
    std::deque<uint32_t> work;
    auto enqueue = [&](uint32_t addr) {
        addr &= ~1u;
        if (leaders.insert(addr).second) work.push_back(addr);
    };
    enqueue(cfg.entry);
    for (uint32_t r : roots) enqueue(r);

    while (!work.empty()) {
        uint32_t addr = work.front();
        work.pop_front();
        while (visited.insert(addr).second) {
            Decoded d;
            try {
                d = analyze(decode_at(map, addr));
            } catch (const SimError& e) {
                cfg.diagnostics.push_back("decode error at " +
                                          detail::hex32(addr) + ": " +
                                          e.what());
                break;
            }
            if (!d.terminates) {
                addr += d.instr.width;
                continue;
            }
            for (const auto& x : d.exits)
                if (x.target) enqueue(*x.target);
            break;
        }
    }

    // Pass 2: linear decode from each leader up to the next leader or a
    // control transfer.
    for (uint32_t start : leaders) {
        BasicBlock block;
        block.start = start;
        uint32_t addr = start;
        while (true) {
            Decoded d;
            try {
                d = analyze(decode_at(map, addr));
            } catch (const SimError&) {
                break; // already reported in pass 1
            }
            block.instructions.push_back(d.instr);
            addr += d.instr.width;
            if (d.terminates) {
                block.exits = d.exits;
                break;
            }
            if (leaders.count(addr)) {
                block.exits = {{EdgeKind::Fallthrough, addr}};
                break;
            }
        }
        block.end = addr;
        if (!block.instructions.empty()) {
            predict_block_counters(block);
            cfg.blocks.emplace(start, std::move(block));
        }
    }
    return cfg;
}

void predict_block_counters(BasicBlock& block) {
    EventCounters c;
    block.unresolved_accesses.clear();
    for (const auto& i : block.instructions) {
        if (i.kind == OpcodeClass::Muls)
            c.c2 += 1;
        else
            c.c1 += 1;
        c.histogram[static_cast<size_t>(i.kind)] += 1;

        switch (i.op) {
        case Op::LdrLit:
            c.c6 += 1; // literal pools live in flash
            break;
        case Op::LdrSp:
            c.c4 += 1;
            break;
        case Op::StrSp:
            c.c5 += 1;
            break;
        case Op::Push:
            c.c5 += std::popcount(i.reglist);
            break;
        case Op::Pop:
            c.c4 += std::popcount(i.reglist);
            break;
        // Base-register targets are not resolved; embedded code keeps
        // data in RAM, so the default classification is RAM (flagged).
        case Op::Stm:
            c.c5 += std::popcount(i.reglist);
            block.unresolved_accesses.push_back(i.address);
            break;
        case Op::Ldm:
            c.c4 += std::popcount(i.reglist);
            block.unresolved_accesses.push_back(i.address);
            break;
        case Op::StrReg:
        case Op::StrhReg:
        case Op::StrbReg:
        case Op::StrImm:
        case Op::StrbImm:
        case Op::StrhImm:
            c.c5 += 1;
            block.unresolved_accesses.push_back(i.address);
            break;
        case Op::LdrReg:
        case Op::LdrhReg:
        case Op::LdrbReg:
        case Op::LdrsbReg:
        case Op::LdrshReg:
        case Op::LdrImm:
        case Op::LdrbImm:
        case Op::LdrhImm:
            c.c4 += 1;
            block.unresolved_accesses.push_back(i.address);
            break;
        default:
            break;
        }
    }
    block.base_counters = c;
    block.has_taken_exit = false;
    for (const auto& x : block.exits) {
        if (x.kind != EdgeKind::Fallthrough) block.has_taken_exit = true;
    }
}

StaticEstimate estimate_static(const StaticCFG& cfg,
                               const std::map<uint32_t, uint64_t>& exec_counts,
                               const std::map<uint32_t, uint64_t>& taken_counts,
                               const EnergyModel& model) {
    for (const auto& [addr, n] : exec_counts) {
        (void)n;
        if (!cfg.blocks.count(addr))
            throw UnknownBlock("no block starts at " + detail::hex32(addr));
    }
    for (const auto& [addr, n] : taken_counts) {
        (void)n;
        if (!cfg.blocks.count(addr))
            throw UnknownBlock("no block starts at " + detail::hex32(addr));
    }

    StaticEstimate est;
    const double taken_cost = model.beta[2]; // one c3 event per taken exit
    for (const auto& [addr, block] : cfg.blocks) {
        uint64_t execs = 0, takens = 0;
        if (auto it = exec_counts.find(addr); it != exec_counts.end())
            execs = it->second;
        if (auto it = taken_counts.find(addr); it != taken_counts.end())
            takens = it->second;
        if (execs == 0 && takens == 0) continue;

        double block_nj = static_cast<double>(execs) *
                              estimate(block.base_counters, model) +
                          static_cast<double>(takens) * taken_cost;
        est.total_nj += block_nj;
        est.breakdown.push_back({addr, execs, takens, block_nj});

        EventCounters scaled;
        scaled.c1 = block.base_counters.c1 * execs;
        scaled.c2 = block.base_counters.c2 * execs;
        scaled.c3 = takens;
        scaled.c4 = block.base_counters.c4 * execs;
        scaled.c5 = block.base_counters.c5 * execs;
        scaled.c6 = block.base_counters.c6 * execs;
        for (size_t k = 0; k < scaled.histogram.size(); ++k)
            scaled.histogram[k] = block.base_counters.histogram[k] * execs;
        est.combined = merge(est.combined, scaled);
    }
    return est;
}

} // namespace em0
