#include <doctest.h>

#include <random>

#include "em0/counters.hpp"
#include "em0/simulator.hpp"

#include "asm.hpp"

using namespace em0;
using namespace tasm;

namespace {

EventCounters totals(const Program& p, uint64_t budget = 100'000) {
    auto sim = p.make_sim();
    auto rep = sim.run(budget);
    REQUIRE(rep.exit_reason == ExitReason::Breakpoint);
    return rep.counters;
}

EventCounters random_counters(std::mt19937& rng) {
    EventCounters c;
    c.c1 = rng() % 100;
    c.c2 = rng() % 100;
    c.c3 = rng() % 100;
    c.c4 = rng() % 100;
    c.c5 = rng() % 100;
    c.c6 = rng() % 100;
    c.cycles = rng() % 1000;
    for (auto& h : c.histogram) h = rng() % 50;
    return c;
}

} // namespace

TEST_CASE("classify: plain instruction bumps only c1") {
    StepEvents ev;
    ev.instruction = decode(adds_reg(0, 0, 1), 0, 0x0800'0000);
    auto d = classify(ev);
    CHECK(d.c1 == 1);
    CHECK(d.c2 == 0);
    CHECK(d.c3 == 0);
    CHECK(d.c4 + d.c5 + d.c6 == 0);
    CHECK(d.histogram[static_cast<size_t>(OpcodeClass::DataProcessing)] == 1);
    CHECK(d.histogram_total() == 1);
}

TEST_CASE("classify: muls counts in c2, not c1") {
    StepEvents ev;
    ev.instruction = decode(muls(0, 1), 0, 0x0800'0000);
    auto d = classify(ev);
    CHECK(d.c1 == 0);
    CHECK(d.c2 == 1);
}

TEST_CASE("classify: taken branch bumps c3, untaken does not") {
    StepEvents ev;
    ev.instruction = decode(bcond(EQ, 0), 0, 0x0800'0000);
    ev.branch_taken = true;
    CHECK(classify(ev).c3 == 1);
    ev.branch_taken = false;
    CHECK(classify(ev).c3 == 0);
}

TEST_CASE("classify: memory accesses split by region and direction") {
    StepEvents ev;
    ev.instruction = decode(ldr_imm(0, 1, 0), 0, 0x0800'0000);
    ev.data_accesses = {
        {0x2000'0000, 4, Direction::Read, Region::Ram},
        {0x2000'0004, 4, Direction::Write, Region::Ram},
        {0x0800'0100, 4, Direction::Read, Region::Flash},
        // flash writes are impossible at runtime, but classification
        // must still never count them in c5
        {0x0800'0104, 4, Direction::Write, Region::Flash},
    };
    auto d = classify(ev);
    CHECK(d.c4 == 1);
    CHECK(d.c5 == 1);
    CHECK(d.c6 == 1);
}

TEST_CASE("classify: push with three registers writes three words") {
    Program p;
    p.ins(movs(4, 1)).ins(movs(5, 2)).ins(push(0b0011'0000, true)).ins(bkpt());
    auto sim = p.make_sim();
    sim.step();
    sim.step();
    auto rep = sim.step(); // push {r4,r5,lr}
    CHECK(rep.counter_delta.c5 == 3);
    CHECK(rep.counter_delta.c1 == 1);
}

TEST_CASE("classify: instruction fetches never count as data reads") {
    Program p;
    for (int k = 0; k < 7; ++k) p.ins(movs(0, static_cast<unsigned>(k)));
    p.ins(bkpt());
    auto c = totals(p);
    CHECK(c.c1 == 8);
    CHECK(c.c4 == 0);
    CHECK(c.c6 == 0); // only data reads reach c6
}

TEST_CASE("counter identities on a mixed program") {
    Program p;
    p.ins(movs(0, 3))            // loop counter
        .ins(movs(1, 1))
        .ins(lsls_imm(1, 1, 29)) // r1 = ram base
        .ins(movs(2, 0))
        .ins(muls(2, 0))         // c2
        .ins(str_imm(2, 1, 0))   // c5
        .ins(ldr_imm(3, 1, 0))   // c4
        .ins(subs_imm8(0, 1))
        .ins(bcond(NE, -12))     // back to muls
        .ins(bkpt());
    auto c = totals(p);
    CHECK(c.retired() == c.c1 + c.c2);
    CHECK(c.histogram_total() == c.retired());
    CHECK(c.c2 == 3);
    CHECK(c.c3 == 2); // taken twice, falls through once
    CHECK(c.c4 == 3);
    CHECK(c.c5 == 3);
    CHECK(c.c6 == 0);
    CHECK(c.c1 == 4 + 5 * 3 + 1 - 3); // 4 setup + 5 body x3 + bkpt - muls
}

TEST_CASE("merge is associative and commutative with a zero identity") {
    std::mt19937 rng(99);
    for (int k = 0; k < 50; ++k) {
        auto a = random_counters(rng);
        auto b = random_counters(rng);
        auto c = random_counters(rng);
        CHECK(merge(a, b) == merge(b, a));
        CHECK(merge(merge(a, b), c) == merge(a, merge(b, c)));
        CHECK(merge(a, EventCounters{}) == a);
    }
}

TEST_CASE("totals equal the merge of per-step deltas") {
    Program p;
    p.ins(movs(0, 5))
        .ins(subs_imm8(0, 1))
        .ins(bcond(NE, -6))
        .ins(bkpt());
    auto sim = p.make_sim();
    EventCounters acc;
    while (true) {
        auto rep = sim.step();
        acc = merge(acc, rep.counter_delta);
        if (rep.events.instruction.op == Op::Bkpt) break;
    }
    CHECK(acc == sim.counters());
}

TEST_CASE("program concatenation adds counters") {
    // Running A;B in sequence counts the same as A and B separately,
    // minus A's breakpoint (replaced by a fall-through nop).
    Program a;
    a.ins(movs(0, 2)).ins(adds_imm8(0, 5)).ins(nop()).ins(bkpt());
    Program b;
    b.ins(movs(1, 4)).ins(muls(1, 1)).ins(bkpt());

    Program joined;
    joined.ins(movs(0, 2)).ins(adds_imm8(0, 5)).ins(nop()).ins(nop());
    joined.ins(movs(1, 4)).ins(muls(1, 1)).ins(bkpt());

    auto ca = totals(a);
    auto cb = totals(b);
    auto cj = totals(joined);
    CHECK(cj.c1 == ca.c1 + cb.c1); // bkpt swapped for nop: both are c1
    CHECK(cj.c2 == ca.c2 + cb.c2);
    CHECK(cj.c3 == ca.c3 + cb.c3);
    CHECK(cj.c4 == ca.c4 + cb.c4);
    CHECK(cj.c5 == ca.c5 + cb.c5);
    CHECK(cj.c6 == ca.c6 + cb.c6);
}
