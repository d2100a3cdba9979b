#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace em0 {

enum class OpcodeClass : uint8_t {
    DataProcessing,
    Muls,
    Load,
    Store,
    BranchCond,
    BranchUncond,
    Bl,
    BxBlx,
    PushPop, // includes LDM/STM block transfers
    Misc,
};

constexpr size_t kNumOpcodeClasses = 10;

const char* opcode_class_name(OpcodeClass cls);

enum class Op : uint8_t {
    // shift/add/sub/move/compare
    LslImm, LsrImm, AsrImm,
    AddReg, SubReg, AddImm3, SubImm3,
    MovImm, CmpImm, AddImm8, SubImm8,
    // data processing, register
    AndReg, EorReg, LslReg, LsrReg, AsrReg, AdcReg, SbcReg, RorReg,
    TstReg, RsbImm, CmpReg, CmnReg, OrrReg, MulReg, BicReg, MvnReg,
    // high-register / branch-exchange
    AddHi, CmpHi, MovHi, Bx, BlxReg,
    // loads and stores
    LdrLit,
    StrReg, StrhReg, StrbReg, LdrsbReg, LdrReg, LdrhReg, LdrbReg, LdrshReg,
    StrImm, LdrImm, StrbImm, LdrbImm, StrhImm, LdrhImm,
    StrSp, LdrSp,
    // address generation and sp arithmetic
    Adr, AddSpImm8, AddSpImm7, SubSpImm7,
    // extend / reverse
    Sxth, Sxtb, Uxth, Uxtb, Rev, Rev16, Revsh,
    // block transfers
    Push, Pop, Stm, Ldm,
    // control flow
    BCond, B, Bl,
    // misc / system
    Bkpt, Svc, Cps, Hint, Sys32,
};

struct Instruction {
    uint32_t address = 0;
    uint32_t raw = 0; // hw1 | (hw2 << 16) for 32-bit encodings
    uint8_t width = 2;
    Op op = Op::Hint;
    OpcodeClass kind = OpcodeClass::Misc;
    uint8_t rd = 0;
    uint8_t rn = 0;
    uint8_t rm = 0;
    uint32_t imm = 0;   // scaled immediate; branch offsets are signed (cast)
    uint16_t reglist = 0;
    uint8_t cond = 0;   // BCond only

    bool is_control_transfer() const {
        switch (kind) {
        case OpcodeClass::BranchCond:
        case OpcodeClass::BranchUncond:
        case OpcodeClass::Bl:
        case OpcodeClass::BxBlx:
            return true;
        default:
            return writes_pc();
        }
    }

    // POP {...pc} and hi-register ADD/MOV with pc destination.
    // Register lists use architectural bit positions (lr = bit 14,
    // pc = bit 15).
    bool writes_pc() const {
        if (op == Op::Pop && (reglist & 0x8000)) return true;
        if ((op == Op::AddHi || op == Op::MovHi) && rd == 15) return true;
        return false;
    }
};

// Decodes one instruction. hw2 is required when hw1 selects a 32-bit
// encoding; pass the halfword at address+2.
Instruction decode(uint16_t hw1, uint16_t hw2, uint32_t address);

// True when hw1 is the first half of a 32-bit encoding.
bool is_32bit_prefix(uint16_t hw1);

std::string disassemble(const Instruction& instr);

} // namespace em0
