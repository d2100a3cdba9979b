#include <doctest.h>

#include <map>

#include "em0/errors.hpp"
#include "em0/simulator.hpp"
#include "em0/static_analysis.hpp"

#include "asm.hpp"

using namespace em0;
using namespace tasm;

TEST_CASE("straight-line code is a single terminal block") {
    Program p;
    p.ins(movs(0, 1)).ins(adds_imm8(0, 2)).ins(bkpt());
    auto cfg = extract_cfg(p.build_map(), p.base);
    CHECK(cfg.entry == p.base);
    REQUIRE(cfg.blocks.size() == 1);
    const auto& b = cfg.blocks.at(p.base);
    CHECK(b.start == p.base);
    CHECK(b.end == p.base + 6);
    CHECK(b.instructions.size() == 3);
    CHECK(b.exits.empty()); // bkpt terminates the program
    CHECK(b.base_counters.c1 == 3);
    CHECK(b.base_counters.c3 == 0);
    CHECK_FALSE(b.has_taken_exit);
    CHECK(cfg.diagnostics.empty());
}

TEST_CASE("a countdown loop splits into three blocks") {
    Program p;
    p.ins(movs(0, 4))          // 0
        .ins(subs_imm8(0, 1))  // 2: loop head (branch target)
        .ins(bcond(NE, -6))    // 4: back to 2
        .ins(bkpt());          // 6
    auto cfg = extract_cfg(p.build_map(), p.base);
    REQUIRE(cfg.blocks.size() == 3);

    const auto& head = cfg.blocks.at(p.base);
    CHECK(head.instructions.size() == 1);
    REQUIRE(head.exits.size() == 1);
    CHECK(head.exits[0].kind == EdgeKind::Fallthrough);
    CHECK(head.exits[0].target == p.base + 2);
    CHECK_FALSE(head.has_taken_exit);

    const auto& body = cfg.blocks.at(p.base + 2);
    CHECK(body.instructions.size() == 2);
    REQUIRE(body.exits.size() == 2);
    CHECK(body.exits[0].kind == EdgeKind::TakenBranch);
    CHECK(body.exits[0].target == p.base + 2);
    CHECK(body.exits[1].kind == EdgeKind::Fallthrough);
    CHECK(body.exits[1].target == p.base + 6);
    CHECK(body.base_counters.c1 == 2);
    CHECK(body.base_counters.c3 == 0); // fallthrough assumption
    CHECK(body.has_taken_exit);

    CHECK(cfg.blocks.at(p.base + 6).instructions.size() == 1);
}

TEST_CASE("bx lr ends a block with a return edge") {
    Program p;
    p.bl_to(p.base + 6)   // 0
        .ins(bkpt())      // 4
        .ins(movs(3, 7))  // 6: callee
        .ins(bx(14));     // 8
    auto cfg = extract_cfg(p.build_map(), p.base);
    REQUIRE(cfg.blocks.count(p.base + 6) == 1);

    const auto& caller = cfg.blocks.at(p.base);
    REQUIRE(caller.exits.size() == 2);
    CHECK(caller.exits[0].kind == EdgeKind::Call);
    CHECK(caller.exits[0].target == p.base + 6);
    CHECK(caller.exits[1].kind == EdgeKind::Fallthrough);
    CHECK(caller.exits[1].target == p.base + 4);

    const auto& callee = cfg.blocks.at(p.base + 6);
    REQUIRE(callee.exits.size() == 1);
    CHECK(callee.exits[0].kind == EdgeKind::Return);
    CHECK_FALSE(callee.exits[0].target.has_value());
    CHECK(callee.has_taken_exit);
}

TEST_CASE("pop into pc and mov pc end blocks with return/indirect edges") {
    Program p;
    p.ins(push(0, true))  // 0: push {lr}
        .ins(pop(0, true)); // 2: pop {pc}
    auto cfg = extract_cfg(p.build_map(), p.base);
    const auto& b = cfg.blocks.at(p.base);
    REQUIRE(b.exits.size() == 1);
    CHECK(b.exits[0].kind == EdgeKind::Return);

    Program q;
    q.ins(mov_hi(15, 1)); // mov pc, r1
    auto cfg2 = extract_cfg(q.build_map(), q.base);
    const auto& b2 = cfg2.blocks.at(q.base);
    REQUIRE(b2.exits.size() == 1);
    CHECK(b2.exits[0].kind == EdgeKind::Indirect);
    CHECK_FALSE(b2.exits[0].target.has_value());
}

TEST_CASE("block counter prediction classifies memory statically") {
    Program p;
    p.ins(ldr_lit(0, 8))        // flash literal -> c6, resolved
        .ins(ldr_sp(1, 0))      // stack -> c4, resolved
        .ins(str_sp(1, 4))      // stack -> c5, resolved
        .ins(push(0b0011))      // 2 stack writes
        .ins(pop(0b0011))       // 2 stack reads
        .ins(ldr_imm(2, 1, 0))  // base register: unresolved, default RAM
        .ins(str_imm(2, 1, 4))  // unresolved
        .ins(muls(2, 2))
        .ins(bkpt());
    auto cfg = extract_cfg(p.build_map(), p.base);
    const auto& b = cfg.blocks.at(p.base);
    CHECK(b.base_counters.c1 == 8);
    CHECK(b.base_counters.c2 == 1);
    CHECK(b.base_counters.c6 == 1);
    CHECK(b.base_counters.c4 == 1 + 2 + 1);
    CHECK(b.base_counters.c5 == 1 + 2 + 1);
    REQUIRE(b.unresolved_accesses.size() == 2);
    CHECK(b.unresolved_accesses[0] == p.base + 10); // the ldr_imm
    CHECK(b.unresolved_accesses[1] == p.base + 12); // the str_imm
}

TEST_CASE("decode errors surface as diagnostics, not exceptions") {
    Program p;
    p.ins(movs(0, 1)).ins(0xDE00); // udf
    auto cfg = extract_cfg(p.build_map(), p.base);
    REQUIRE(cfg.diagnostics.size() == 1);
    CHECK(cfg.diagnostics[0].find("decode error") != std::string::npos);
    // the valid prefix still forms a block
    REQUIRE(cfg.blocks.count(p.base) == 1);
    CHECK(cfg.blocks.at(p.base).instructions.size() == 1);
}

TEST_CASE("static estimate matches dynamic execution on direct control flow") {
    Program p;
    p.ins(movs(0, 4))          // block A: 0
        .ins(subs_imm8(0, 1))  // block B: 2
        .ins(bcond(NE, -6))    // 4
        .ins(bkpt());          // block C: 6
    auto cfg = extract_cfg(p.build_map(), p.base);

    // Derive true execution/taken counts by stepping the simulator.
    std::map<uint32_t, uint64_t> exec, taken;
    auto sim = p.make_sim();
    while (true) {
        uint32_t pc = sim.state().pc();
        if (cfg.blocks.count(pc)) exec[pc] += 1;
        auto rep = sim.step();
        if (rep.events.branch_taken) {
            // attribute the taken edge to the branch's block
            auto it = cfg.blocks.upper_bound(rep.events.instruction.address);
            --it;
            taken[it->first] += 1;
        }
        if (rep.events.instruction.op == Op::Bkpt) break;
    }
    CHECK(exec.at(p.base) == 1);
    CHECK(exec.at(p.base + 2) == 4);
    CHECK(taken.at(p.base + 2) == 3);

    const auto& model = ModelRegistry::builtin().lookup({20, false, 0});
    auto est = estimate_static(cfg, exec, taken, model);

    const auto& dyn = sim.counters();
    CHECK(est.combined.c1 == dyn.c1);
    CHECK(est.combined.c2 == dyn.c2);
    CHECK(est.combined.c3 == dyn.c3);
    CHECK(est.combined.c4 == dyn.c4);
    CHECK(est.combined.c5 == dyn.c5);
    CHECK(est.combined.c6 == dyn.c6);
    CHECK(est.total_nj == doctest::Approx(estimate(dyn, model))
                              .epsilon(1e-12));
    CHECK(est.breakdown.size() == 3);
}

TEST_CASE("static estimate scales linearly with loop counts") {
    Program p;
    p.ins(movs(0, 4))
        .ins(subs_imm8(0, 1))
        .ins(bcond(NE, -6))
        .ins(bkpt());
    auto cfg = extract_cfg(p.build_map(), p.base);
    const auto& model = ModelRegistry::builtin().lookup({24, true, 1});

    // A user-supplied loop bound of 1000 instead of 4.
    std::map<uint32_t, uint64_t> exec = {
        {p.base, 1}, {p.base + 2, 1000}, {p.base + 6, 1}};
    std::map<uint32_t, uint64_t> taken = {{p.base + 2, 999}};
    auto est = estimate_static(cfg, exec, taken, model);
    CHECK(est.combined.c1 == 1 + 2000 + 1);
    CHECK(est.combined.c3 == 999);
    double expected = (1 + 2000 + 1) * model.beta[0] + 999 * model.beta[2];
    CHECK(est.total_nj == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("counts for unknown blocks are rejected") {
    Program p;
    p.ins(bkpt());
    auto cfg = extract_cfg(p.build_map(), p.base);
    const auto& model = ModelRegistry::builtin().lookup({20, false, 0});
    CHECK_THROWS_AS(estimate_static(cfg, {{p.base + 100, 1}}, {}, model),
                    UnknownBlock);
    CHECK_THROWS_AS(estimate_static(cfg, {}, {{p.base + 100, 1}}, model),
                    UnknownBlock);
}

TEST_CASE("extra roots pull in code unreachable from the entry") {
    Program p;
    p.ins(bkpt())         // 0: entry halts immediately
        .ins(movs(0, 1))  // 2: island
        .ins(bkpt());     // 4
    auto just_entry = extract_cfg(p.build_map(), p.base);
    CHECK(just_entry.blocks.size() == 1);
    auto with_root = extract_cfg(p.build_map(), p.base, {p.base + 2});
    CHECK(with_root.blocks.size() == 2);
    CHECK(with_root.blocks.count(p.base + 2) == 1);
}

TEST_CASE("edge kind names") {
    CHECK(std::string(edge_kind_name(EdgeKind::Fallthrough)) == "fallthrough");
    CHECK(std::string(edge_kind_name(EdgeKind::TakenBranch)) ==
          "taken_branch");
    CHECK(std::string(edge_kind_name(EdgeKind::Call)) == "call");
    CHECK(std::string(edge_kind_name(EdgeKind::Return)) == "return");
    CHECK(std::string(edge_kind_name(EdgeKind::Indirect)) == "indirect");
}
