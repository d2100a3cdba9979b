#include "em0/instruction.hpp"

#include "em0/errors.hpp"

namespace em0 {

namespace {

uint32_t sign_extend(uint32_t value, unsigned bits) {
    uint32_t m = 1u << (bits - 1);
    return (value ^ m) - m;
}

Instruction make(uint32_t address, uint16_t hw1, Op op, OpcodeClass kind) {
    Instruction i;
    i.address = address;
    i.raw = hw1;
    i.op = op;
    i.kind = kind;
    return i;
}

Instruction decode16(uint16_t hw, uint32_t address) {
    using C = OpcodeClass;
    const unsigned top = hw >> 12;

    switch (top) {
    case 0x0:
    case 0x1: {
        unsigned op2 = (hw >> 11) & 3; // bits 12:11 within 000xx
        if ((hw >> 13) == 0 && op2 != 3) {
            // shift by immediate
            static const Op ops[3] = {Op::LslImm, Op::LsrImm, Op::AsrImm};
            auto i = make(address, hw, ops[(hw >> 11) & 3], C::DataProcessing);
            i.imm = (hw >> 6) & 0x1F;
            i.rm = (hw >> 3) & 7;
            i.rd = hw & 7;
            return i;
        }
        // 00011xx: three-register / imm3 add-sub
        unsigned sel = (hw >> 9) & 3;
        static const Op ops[4] = {Op::AddReg, Op::SubReg, Op::AddImm3,
                                  Op::SubImm3};
        auto i = make(address, hw, ops[sel], C::DataProcessing);
        i.rd = hw & 7;
        i.rn = (hw >> 3) & 7;
        if (sel < 2)
            i.rm = (hw >> 6) & 7;
        else
            i.imm = (hw >> 6) & 7;
        return i;
    }
    case 0x2:
    case 0x3: {
        static const Op ops[4] = {Op::MovImm, Op::CmpImm, Op::AddImm8,
                                  Op::SubImm8};
        auto i = make(address, hw, ops[(hw >> 11) & 3], C::DataProcessing);
        i.rd = (hw >> 8) & 7;
        i.rn = i.rd;
        i.imm = hw & 0xFF;
        return i;
    }
    case 0x4: {
        if ((hw & 0xFC00) == 0x4000) {
            // data-processing, register
            static const Op ops[16] = {
                Op::AndReg, Op::EorReg, Op::LslReg, Op::LsrReg,
                Op::AsrReg, Op::AdcReg, Op::SbcReg, Op::RorReg,
                Op::TstReg, Op::RsbImm, Op::CmpReg, Op::CmnReg,
                Op::OrrReg, Op::MulReg, Op::BicReg, Op::MvnReg};
            unsigned sel = (hw >> 6) & 0xF;
            auto i = make(address, hw, ops[sel],
                          sel == 13 ? C::Muls : C::DataProcessing);
            i.rd = hw & 7;
            i.rn = i.rd;
            i.rm = (hw >> 3) & 7;
            return i;
        }
        if ((hw & 0xFC00) == 0x4400) {
            // special data / branch-exchange
            unsigned op2 = (hw >> 8) & 3;
            uint8_t rm = (hw >> 3) & 0xF;
            uint8_t rdn = static_cast<uint8_t>((hw & 7) | ((hw >> 4) & 8));
            if (op2 == 3) {
                bool link = hw & 0x80;
                if (hw & 7) throw UndefinedEncoding(address, hw);
                auto i = make(address, hw, link ? Op::BlxReg : Op::Bx,
                              C::BxBlx);
                i.rm = rm;
                return i;
            }
            static const Op ops[3] = {Op::AddHi, Op::CmpHi, Op::MovHi};
            auto i = make(address, hw, ops[op2], C::DataProcessing);
            i.rd = rdn;
            i.rn = rdn;
            i.rm = rm;
            return i;
        }
        // 01001: LDR literal
        auto i = make(address, hw, Op::LdrLit, C::Load);
        i.rd = (hw >> 8) & 7;
        i.imm = (hw & 0xFF) * 4;
        return i;
    }
    case 0x5: {
        static const Op ops[8] = {Op::StrReg,  Op::StrhReg, Op::StrbReg,
                                  Op::LdrsbReg, Op::LdrReg, Op::LdrhReg,
                                  Op::LdrbReg, Op::LdrshReg};
        unsigned sel = (hw >> 9) & 7;
        auto i = make(address, hw, ops[sel],
                      sel < 3 ? C::Store : C::Load);
        i.rd = hw & 7;
        i.rn = (hw >> 3) & 7;
        i.rm = (hw >> 6) & 7;
        return i;
    }
    case 0x6:
    case 0x7: {
        bool byte = top == 0x7;
        bool load = hw & 0x0800;
        Op op = byte ? (load ? Op::LdrbImm : Op::StrbImm)
                     : (load ? Op::LdrImm : Op::StrImm);
        auto i = make(address, hw, op, load ? C::Load : C::Store);
        i.rd = hw & 7;
        i.rn = (hw >> 3) & 7;
        i.imm = ((hw >> 6) & 0x1F) * (byte ? 1 : 4);
        return i;
    }
    case 0x8: {
        bool load = hw & 0x0800;
        auto i = make(address, hw, load ? Op::LdrhImm : Op::StrhImm,
                      load ? C::Load : C::Store);
        i.rd = hw & 7;
        i.rn = (hw >> 3) & 7;
        i.imm = ((hw >> 6) & 0x1F) * 2;
        return i;
    }
    case 0x9: {
        bool load = hw & 0x0800;
        auto i = make(address, hw, load ? Op::LdrSp : Op::StrSp,
                      load ? C::Load : C::Store);
        i.rd = (hw >> 8) & 7;
        i.rn = 13;
        i.imm = (hw & 0xFF) * 4;
        return i;
    }
    case 0xA: {
        bool sp = hw & 0x0800;
        auto i = make(address, hw, sp ? Op::AddSpImm8 : Op::Adr,
                      C::DataProcessing);
        i.rd = (hw >> 8) & 7;
        i.imm = (hw & 0xFF) * 4;
        return i;
    }
    case 0xB: {
        if ((hw & 0xFF00) == 0xB000) {
            bool sub = hw & 0x80;
            auto i = make(address, hw, sub ? Op::SubSpImm7 : Op::AddSpImm7,
                          C::DataProcessing);
            i.imm = (hw & 0x7F) * 4;
            return i;
        }
        if ((hw & 0xFF00) == 0xB200) {
            static const Op ops[4] = {Op::Sxth, Op::Sxtb, Op::Uxth, Op::Uxtb};
            auto i = make(address, hw, ops[(hw >> 6) & 3], C::DataProcessing);
            i.rd = hw & 7;
            i.rm = (hw >> 3) & 7;
            return i;
        }
        if ((hw & 0xFE00) == 0xB400) {
            auto i = make(address, hw, Op::Push, C::PushPop);
            i.reglist = (hw & 0xFF) | ((hw & 0x100) ? 0x4000 : 0); // M -> lr
            if (i.reglist == 0) throw UndefinedEncoding(address, hw);
            return i;
        }
        if ((hw & 0xFFE8) == 0xB660) {
            return make(address, hw, Op::Cps, C::Misc);
        }
        if ((hw & 0xFF00) == 0xBA00) {
            unsigned sel = (hw >> 6) & 3;
            if (sel == 2) throw UndefinedEncoding(address, hw);
            Op op = sel == 0 ? Op::Rev : (sel == 1 ? Op::Rev16 : Op::Revsh);
            auto i = make(address, hw, op, C::DataProcessing);
            i.rd = hw & 7;
            i.rm = (hw >> 3) & 7;
            return i;
        }
        if ((hw & 0xFE00) == 0xBC00) {
            auto i = make(address, hw, Op::Pop, C::PushPop);
            i.reglist = (hw & 0xFF) | ((hw & 0x100) ? 0x8000 : 0); // P -> pc
            if (i.reglist == 0) throw UndefinedEncoding(address, hw);
            return i;
        }
        if ((hw & 0xFF00) == 0xBE00) {
            auto i = make(address, hw, Op::Bkpt, C::Misc);
            i.imm = hw & 0xFF;
            return i;
        }
        if ((hw & 0xFF0F) == 0xBF00) {
            // NOP, YIELD, WFE, WFI, SEV and unallocated hints execute as NOP
            auto i = make(address, hw, Op::Hint, C::Misc);
            i.imm = (hw >> 4) & 0xF;
            return i;
        }
        throw UndefinedEncoding(address, hw);
    }
    case 0xC: {
        bool load = hw & 0x0800;
        auto i = make(address, hw, load ? Op::Ldm : Op::Stm, C::PushPop);
        i.rn = (hw >> 8) & 7;
        i.reglist = hw & 0xFF;
        if (i.reglist == 0) throw UndefinedEncoding(address, hw);
        return i;
    }
    case 0xD: {
        unsigned cond = (hw >> 8) & 0xF;
        if (cond == 14) throw UndefinedEncoding(address, hw); // UDF
        if (cond == 15) {
            auto i = make(address, hw, Op::Svc, C::Misc);
            i.imm = hw & 0xFF;
            return i;
        }
        auto i = make(address, hw, Op::BCond, C::BranchCond);
        i.cond = static_cast<uint8_t>(cond);
        i.imm = sign_extend(hw & 0xFF, 8) << 1;
        return i;
    }
    case 0xE: {
        if (hw & 0x0800) throw UndefinedEncoding(address, hw); // 32-bit space
        auto i = make(address, hw, Op::B, C::BranchUncond);
        i.imm = sign_extend(hw & 0x7FF, 11) << 1;
        return i;
    }
    default:
        throw UndefinedEncoding(address, hw);
    }
}

} // namespace

bool is_32bit_prefix(uint16_t hw1) { return (hw1 & 0xF800) == 0xF000; }

Instruction decode(uint16_t hw1, uint16_t hw2, uint32_t address) {
    if (address & 1)
        throw UndefinedEncoding(address, hw1);
    if (!is_32bit_prefix(hw1)) return decode16(hw1, address);

    uint32_t raw = hw1 | (static_cast<uint32_t>(hw2) << 16);
    if ((hw2 & 0xD000) == 0xD000) {
        // BL: offset = S:I1:I2:imm10:imm11:0
        uint32_t s = (hw1 >> 10) & 1;
        uint32_t imm10 = hw1 & 0x3FF;
        uint32_t j1 = (hw2 >> 13) & 1;
        uint32_t j2 = (hw2 >> 11) & 1;
        uint32_t imm11 = hw2 & 0x7FF;
        uint32_t i1 = (~(j1 ^ s)) & 1;
        uint32_t i2 = (~(j2 ^ s)) & 1;
        uint32_t off = (s << 24) | (i1 << 23) | (i2 << 22) | (imm10 << 12) |
                       (imm11 << 1);
        Instruction i;
        i.address = address;
        i.raw = raw;
        i.width = 4;
        i.op = Op::Bl;
        i.kind = OpcodeClass::Bl;
        i.imm = sign_extend(off, 25);
        return i;
    }
    if ((hw1 & 0xFF80) == 0xF380 && (hw2 & 0x8000) == 0x8000 &&
        (hw2 & 0x5000) == 0) {
        // MSR/MRS/DSB/DMB/ISB: architectural no-ops here (no system model)
        Instruction i;
        i.address = address;
        i.raw = raw;
        i.width = 4;
        i.op = Op::Sys32;
        i.kind = OpcodeClass::Misc;
        return i;
    }
    throw UndefinedEncoding(address, raw);
}

const char* opcode_class_name(OpcodeClass cls) {
    switch (cls) {
    case OpcodeClass::DataProcessing: return "data_processing";
    case OpcodeClass::Muls: return "muls";
    case OpcodeClass::Load: return "load";
    case OpcodeClass::Store: return "store";
    case OpcodeClass::BranchCond: return "branch_cond";
    case OpcodeClass::BranchUncond: return "branch_uncond";
    case OpcodeClass::Bl: return "bl";
    case OpcodeClass::BxBlx: return "bx_blx";
    case OpcodeClass::PushPop: return "push_pop";
    case OpcodeClass::Misc: return "misc";
    }
    return "?";
}

} // namespace em0
