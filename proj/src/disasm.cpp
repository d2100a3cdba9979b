#include <cinttypes>
#include <cstdio>

#include "em0/instruction.hpp"

namespace em0 {

namespace {

std::string reg(unsigned r) {
    if (r == 13) return "sp";
    if (r == 14) return "lr";
    if (r == 15) return "pc";
    return "r" + std::to_string(r);
}

std::string reglist_str(uint16_t list) {
    std::string s = "{";
    bool first = true;
    for (unsigned r = 0; r < 16; ++r) {
        if (!(list & (1u << r))) continue;
        if (!first) s += ",";
        s += reg(r);
        first = false;
    }
    return s + "}";
}

const char* kCondNames[14] = {"eq", "ne", "cs", "cc", "mi", "pl", "vs",
                              "vc", "hi", "ls", "ge", "lt", "gt", "le"};

std::string fmt(const char* f, auto... args) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

} // namespace

std::string disassemble(const Instruction& i) {
    auto rd = reg(i.rd), rn = reg(i.rn), rm = reg(i.rm);
    auto imm = std::to_string(i.imm);
    int32_t rel = static_cast<int32_t>(i.imm);
    switch (i.op) {
    case Op::LslImm: return "lsls " + rd + ", " + rm + ", #" + imm;
    case Op::LsrImm: return "lsrs " + rd + ", " + rm + ", #" + imm;
    case Op::AsrImm: return "asrs " + rd + ", " + rm + ", #" + imm;
    case Op::AddReg: return "adds " + rd + ", " + rn + ", " + rm;
    case Op::SubReg: return "subs " + rd + ", " + rn + ", " + rm;
    case Op::AddImm3: return "adds " + rd + ", " + rn + ", #" + imm;
    case Op::SubImm3: return "subs " + rd + ", " + rn + ", #" + imm;
    case Op::MovImm: return "movs " + rd + ", #" + imm;
    case Op::CmpImm: return "cmp " + rd + ", #" + imm;
    case Op::AddImm8: return "adds " + rd + ", #" + imm;
    case Op::SubImm8: return "subs " + rd + ", #" + imm;
    case Op::AndReg: return "ands " + rd + ", " + rm;
    case Op::EorReg: return "eors " + rd + ", " + rm;
    case Op::LslReg: return "lsls " + rd + ", " + rm;
    case Op::LsrReg: return "lsrs " + rd + ", " + rm;
    case Op::AsrReg: return "asrs " + rd + ", " + rm;
    case Op::AdcReg: return "adcs " + rd + ", " + rm;
    case Op::SbcReg: return "sbcs " + rd + ", " + rm;
    case Op::RorReg: return "rors " + rd + ", " + rm;
    case Op::TstReg: return "tst " + rn + ", " + rm;
    case Op::RsbImm: return "rsbs " + rd + ", " + rm + ", #0";
    case Op::CmpReg: return "cmp " + rn + ", " + rm;
    case Op::CmnReg: return "cmn " + rn + ", " + rm;
    case Op::OrrReg: return "orrs " + rd + ", " + rm;
    case Op::MulReg: return "muls " + rd + ", " + rm;
    case Op::BicReg: return "bics " + rd + ", " + rm;
    case Op::MvnReg: return "mvns " + rd + ", " + rm;
    case Op::AddHi: return "add " + rd + ", " + rm;
    case Op::CmpHi: return "cmp " + rn + ", " + rm;
    case Op::MovHi: return "mov " + rd + ", " + rm;
    case Op::Bx: return "bx " + rm;
    case Op::BlxReg: return "blx " + rm;
    case Op::LdrLit:
        return fmt("ldr %s, [pc, #%u] ; 0x%08x", rd.c_str(), i.imm,
                   ((i.address + 4) & ~3u) + i.imm);
    case Op::StrReg: return "str " + rd + ", [" + rn + ", " + rm + "]";
    case Op::StrhReg: return "strh " + rd + ", [" + rn + ", " + rm + "]";
    case Op::StrbReg: return "strb " + rd + ", [" + rn + ", " + rm + "]";
    case Op::LdrsbReg: return "ldrsb " + rd + ", [" + rn + ", " + rm + "]";
    case Op::LdrReg: return "ldr " + rd + ", [" + rn + ", " + rm + "]";
    case Op::LdrhReg: return "ldrh " + rd + ", [" + rn + ", " + rm + "]";
    case Op::LdrbReg: return "ldrb " + rd + ", [" + rn + ", " + rm + "]";
    case Op::LdrshReg: return "ldrsh " + rd + ", [" + rn + ", " + rm + "]";
    case Op::StrImm: return "str " + rd + ", [" + rn + ", #" + imm + "]";
    case Op::LdrImm: return "ldr " + rd + ", [" + rn + ", #" + imm + "]";
    case Op::StrbImm: return "strb " + rd + ", [" + rn + ", #" + imm + "]";
    case Op::LdrbImm: return "ldrb " + rd + ", [" + rn + ", #" + imm + "]";
    case Op::StrhImm: return "strh " + rd + ", [" + rn + ", #" + imm + "]";
    case Op::LdrhImm: return "ldrh " + rd + ", [" + rn + ", #" + imm + "]";
    case Op::StrSp: return "str " + rd + ", [sp, #" + imm + "]";
    case Op::LdrSp: return "ldr " + rd + ", [sp, #" + imm + "]";
    case Op::Adr: return "adr " + rd + ", #" + imm;
    case Op::AddSpImm8: return "add " + rd + ", sp, #" + imm;
    case Op::AddSpImm7: return "add sp, #" + imm;
    case Op::SubSpImm7: return "sub sp, #" + imm;
    case Op::Sxth: return "sxth " + rd + ", " + rm;
    case Op::Sxtb: return "sxtb " + rd + ", " + rm;
    case Op::Uxth: return "uxth " + rd + ", " + rm;
    case Op::Uxtb: return "uxtb " + rd + ", " + rm;
    case Op::Rev: return "rev " + rd + ", " + rm;
    case Op::Rev16: return "rev16 " + rd + ", " + rm;
    case Op::Revsh: return "revsh " + rd + ", " + rm;
    case Op::Push: return "push " + reglist_str(i.reglist);
    case Op::Pop: return "pop " + reglist_str(i.reglist);
    case Op::Stm: return "stm " + rn + "!, " + reglist_str(i.reglist);
    case Op::Ldm: return "ldm " + rn + "!, " + reglist_str(i.reglist);
    case Op::BCond:
        return fmt("b%s 0x%08x", kCondNames[i.cond],
                   i.address + 4 + rel);
    case Op::B: return fmt("b 0x%08x", i.address + 4 + rel);
    case Op::Bl: return fmt("bl 0x%08x", i.address + 4 + rel);
    case Op::Bkpt: return "bkpt #" + imm;
    case Op::Svc: return "svc #" + imm;
    case Op::Cps: return (i.raw & 0x10) ? "cpsid i" : "cpsie i";
    case Op::Hint: {
        switch (i.imm) {
        case 0: return "nop";
        case 1: return "yield";
        case 2: return "wfe";
        case 3: return "wfi";
        case 4: return "sev";
        default: return "nop ; hint";
        }
    }
    case Op::Sys32: return "nop ; system";
    }
    return "?";
}

} // namespace em0
