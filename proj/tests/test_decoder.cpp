#include <doctest.h>

#include "em0/errors.hpp"
#include "em0/instruction.hpp"

#include "asm.hpp"

using namespace em0;

namespace {

Instruction dec(uint16_t hw1, uint16_t hw2 = 0,
                uint32_t address = 0x0800'0100) {
    return decode(hw1, hw2, address);
}

} // namespace

TEST_CASE("decode: known encodings disassemble as expected") {
    // Golden pairs hand-assembled from the Thumb encoding tables.
    CHECK(disassemble(dec(0x1840)) == "adds r0, r0, r1");
    CHECK(disassemble(dec(0x2000)) == "movs r0, #0");
    CHECK(disassemble(dec(0x2105)) == "movs r1, #5");
    CHECK(disassemble(dec(0x3A01)) == "subs r2, #1");
    CHECK(disassemble(dec(0x4348)) == "muls r0, r1");
    CHECK(disassemble(dec(0x0109)) == "lsls r1, r1, #4");
    CHECK(disassemble(dec(0x4770)) == "bx lr");
    CHECK(disassemble(dec(0xB500)) == "push {lr}");
    CHECK(disassemble(dec(0xBD10)) == "pop {r4,pc}");
    CHECK(disassemble(dec(0xBE00)) == "bkpt #0");
    CHECK(disassemble(dec(0x9801)) == "ldr r0, [sp, #4]");
    CHECK(disassemble(dec(0x9102)) == "str r1, [sp, #8]");
    CHECK(disassemble(dec(0xC907)) == "ldm r1!, {r0,r1,r2}");
    CHECK(disassemble(dec(0x6848)) == "ldr r0, [r1, #4]");
    CHECK(disassemble(dec(0xB282)) == "uxth r2, r0");
}

TEST_CASE("decode: opcode classes") {
    CHECK(dec(0x1840).kind == OpcodeClass::DataProcessing);
    CHECK(dec(0x4348).kind == OpcodeClass::Muls);
    CHECK(dec(0x6848).kind == OpcodeClass::Load);
    CHECK(dec(0x6048).kind == OpcodeClass::Store);
    CHECK(dec(0xD0FE).kind == OpcodeClass::BranchCond);
    CHECK(dec(0xE7FE).kind == OpcodeClass::BranchUncond);
    CHECK(dec(0x4770).kind == OpcodeClass::BxBlx);
    CHECK(dec(0xB510).kind == OpcodeClass::PushPop);
    CHECK(dec(0xC901).kind == OpcodeClass::PushPop);
    CHECK(dec(0xBF30).kind == OpcodeClass::Misc); // wfi
}

TEST_CASE("decode: undefined encodings") {
    CHECK_THROWS_AS(dec(0xFFFF, 0xFFFF), UndefinedEncoding);
    CHECK_THROWS_AS(dec(0xDE00), UndefinedEncoding); // udf
    CHECK_THROWS_AS(dec(0xB400), UndefinedEncoding); // push with empty list
    CHECK_THROWS_AS(dec(0xE800), UndefinedEncoding); // 32-bit space, v7-M
    try {
        dec(0xDE42, 0, 0x0800'0200);
        FAIL("expected UndefinedEncoding");
    } catch (const UndefinedEncoding& e) {
        CHECK(e.address == 0x0800'0200);
        CHECK(e.bits == 0xDE42);
    }
}

TEST_CASE("decode: bl is the only width-4 application instruction") {
    auto [h1, h2] = tasm::bl(0x100);
    auto i = dec(h1, h2);
    CHECK(i.width == 4);
    CHECK(i.op == Op::Bl);
    CHECK(static_cast<int32_t>(i.imm) == 0x100);

    auto [n1, n2] = tasm::bl(-0x42);
    auto j = dec(n1, n2);
    CHECK(static_cast<int32_t>(j.imm) == -0x42);

    // barriers decode as width-4 system no-ops
    auto d = dec(0xF3BF, 0x8F4F);
    CHECK(d.op == Op::Sys32);
    CHECK(d.width == 4);
}

TEST_CASE("decode: branch offsets") {
    // beq with imm8 = -2 halfwords -> branch to itself
    auto i = dec(0xD0FE);
    CHECK(static_cast<int32_t>(i.imm) == -4);
    CHECK(i.cond == 0);
    // b with imm11 = 2 halfwords forward
    auto j = dec(0xE002);
    CHECK(static_cast<int32_t>(j.imm) == 4);
}

TEST_CASE("decode is total and deterministic over all 16-bit encodings") {
    int defined = 0;
    for (uint32_t hw = 0; hw <= 0xFFFF; ++hw) {
        uint16_t h = static_cast<uint16_t>(hw);
        uint16_t second = is_32bit_prefix(h) ? 0xD000 : 0; // plain BL body
        try {
            auto a = decode(h, second, 0x0800'0000);
            auto b = decode(h, second, 0x0800'0000);
            CHECK(a.op == b.op);
            CHECK(a.raw == b.raw);
            CHECK(a.width == b.width);
            CHECK(a.imm == b.imm);
            if (a.width == 4)
                CHECK((a.op == Op::Bl || a.op == Op::Sys32));
            ++defined;
        } catch (const UndefinedEncoding&) {
        }
    }
    // the vast majority of the 16-bit space is populated
    CHECK(defined > 50000);
}

TEST_CASE("decode: rejects odd addresses") {
    CHECK_THROWS_AS(decode(0x2000, 0, 0x0800'0101), UndefinedEncoding);
}
