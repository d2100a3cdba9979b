#include "em0/executor.hpp"

#include <bit>

#include "em0/errors.hpp"

namespace em0 {

namespace {

struct Ctx {
    MachineState& s;
    const Instruction& i;
    MemoryMap& bus;
    StepEvents& ev;
    uint32_t next_pc;

    uint32_t reg(unsigned n) const {
        return n == 15 ? i.address + 4 : s.regs[n];
    }

    void set_nz(uint32_t v) {
        s.flag_n = v & 0x8000'0000u;
        s.flag_z = v == 0;
    }

    uint32_t add_with_carry(uint32_t a, uint32_t b, bool cin) {
        uint64_t u = static_cast<uint64_t>(a) + b + (cin ? 1 : 0);
        int64_t sv = static_cast<int64_t>(static_cast<int32_t>(a)) +
                     static_cast<int32_t>(b) + (cin ? 1 : 0);
        uint32_t r = static_cast<uint32_t>(u);
        s.flag_c = u >> 32;
        s.flag_v = sv != static_cast<int32_t>(r);
        set_nz(r);
        return r;
    }

    uint32_t load(uint32_t addr, unsigned size) {
        auto rr = bus.read(addr, size, Purpose::Data);
        ev.data_accesses.push_back({addr, static_cast<uint8_t>(size),
                                    Direction::Read, rr.cls.region});
        return rr.value;
    }

    void store(uint32_t addr, unsigned size, uint32_t value) {
        auto cls = bus.write(addr, size, value);
        ev.data_accesses.push_back(
            {addr, static_cast<uint8_t>(size), Direction::Write, cls.region});
    }

    void branch_to(uint32_t target) {
        next_pc = target & ~1u;
        ev.branch_taken = true;
    }
};

bool condition_passed(const MachineState& s, unsigned cond) {
    switch (cond) {
    case 0: return s.flag_z;                    // eq
    case 1: return !s.flag_z;                   // ne
    case 2: return s.flag_c;                    // cs
    case 3: return !s.flag_c;                   // cc
    case 4: return s.flag_n;                    // mi
    case 5: return !s.flag_n;                   // pl
    case 6: return s.flag_v;                    // vs
    case 7: return !s.flag_v;                   // vc
    case 8: return s.flag_c && !s.flag_z;       // hi
    case 9: return !s.flag_c || s.flag_z;       // ls
    case 10: return s.flag_n == s.flag_v;       // ge
    case 11: return s.flag_n != s.flag_v;       // lt
    case 12: return !s.flag_z && s.flag_n == s.flag_v; // gt
    default: return s.flag_z || s.flag_n != s.flag_v;  // le
    }
}

void shift_result(Ctx& c, uint32_t result, bool carry, bool carry_valid) {
    if (carry_valid) c.s.flag_c = carry;
    c.set_nz(result);
    c.s.regs[c.i.rd] = result;
}

} // namespace

StepEvents execute(MachineState& s, const Instruction& i, MemoryMap& bus) {
    StepEvents ev;
    ev.instruction = i;
    Ctx c{s, i, bus, ev, i.address + i.width};

    switch (i.op) {
    case Op::LslImm: {
        uint32_t v = c.reg(i.rm);
        if (i.imm == 0) {
            shift_result(c, v, false, false); // movs rd, rm
        } else {
            shift_result(c, v << i.imm, (v >> (32 - i.imm)) & 1, true);
        }
        break;
    }
    case Op::LsrImm: {
        uint32_t v = c.reg(i.rm);
        unsigned n = i.imm == 0 ? 32 : i.imm;
        uint32_t r = n == 32 ? 0 : v >> n;
        shift_result(c, r, (v >> (n - 1)) & 1, true);
        break;
    }
    case Op::AsrImm: {
        uint32_t v = c.reg(i.rm);
        unsigned n = i.imm == 0 ? 32 : i.imm;
        uint32_t r;
        bool carry;
        if (n == 32) {
            r = (v & 0x8000'0000u) ? 0xFFFF'FFFFu : 0;
            carry = v >> 31;
        } else {
            r = static_cast<uint32_t>(static_cast<int32_t>(v) >> n);
            carry = (v >> (n - 1)) & 1;
        }
        shift_result(c, r, carry, true);
        break;
    }
    case Op::AddReg:
        s.regs[i.rd] = c.add_with_carry(c.reg(i.rn), c.reg(i.rm), false);
        break;
    case Op::SubReg:
        s.regs[i.rd] = c.add_with_carry(c.reg(i.rn), ~c.reg(i.rm), true);
        break;
    case Op::AddImm3:
        s.regs[i.rd] = c.add_with_carry(c.reg(i.rn), i.imm, false);
        break;
    case Op::SubImm3:
        s.regs[i.rd] = c.add_with_carry(c.reg(i.rn), ~i.imm, true);
        break;
    case Op::MovImm:
        s.regs[i.rd] = i.imm;
        c.set_nz(i.imm);
        break;
    case Op::CmpImm:
        c.add_with_carry(c.reg(i.rn), ~i.imm, true);
        break;
    case Op::AddImm8:
        s.regs[i.rd] = c.add_with_carry(c.reg(i.rd), i.imm, false);
        break;
    case Op::SubImm8:
        s.regs[i.rd] = c.add_with_carry(c.reg(i.rd), ~i.imm, true);
        break;

    case Op::AndReg: {
        uint32_t r = c.reg(i.rd) & c.reg(i.rm);
        s.regs[i.rd] = r;
        c.set_nz(r);
        break;
    }
    case Op::EorReg: {
        uint32_t r = c.reg(i.rd) ^ c.reg(i.rm);
        s.regs[i.rd] = r;
        c.set_nz(r);
        break;
    }
    case Op::LslReg: {
        uint32_t v = c.reg(i.rd);
        unsigned n = c.reg(i.rm) & 0xFF;
        if (n == 0) {
            c.set_nz(v);
        } else if (n < 32) {
            shift_result(c, v << n, (v >> (32 - n)) & 1, true);
        } else {
            shift_result(c, 0, n == 32 ? (v & 1) : false, true);
        }
        break;
    }
    case Op::LsrReg: {
        uint32_t v = c.reg(i.rd);
        unsigned n = c.reg(i.rm) & 0xFF;
        if (n == 0) {
            c.set_nz(v);
        } else if (n < 32) {
            shift_result(c, v >> n, (v >> (n - 1)) & 1, true);
        } else {
            shift_result(c, 0, n == 32 ? (v >> 31) : false, true);
        }
        break;
    }
    case Op::AsrReg: {
        uint32_t v = c.reg(i.rd);
        unsigned n = c.reg(i.rm) & 0xFF;
        if (n == 0) {
            c.set_nz(v);
        } else if (n < 32) {
            shift_result(c, static_cast<uint32_t>(static_cast<int32_t>(v) >> n),
                         (v >> (n - 1)) & 1, true);
        } else {
            uint32_t r = (v & 0x8000'0000u) ? 0xFFFF'FFFFu : 0;
            shift_result(c, r, v >> 31, true);
        }
        break;
    }
    case Op::AdcReg:
        s.regs[i.rd] = c.add_with_carry(c.reg(i.rd), c.reg(i.rm), s.flag_c);
        break;
    case Op::SbcReg:
        s.regs[i.rd] = c.add_with_carry(c.reg(i.rd), ~c.reg(i.rm), s.flag_c);
        break;
    case Op::RorReg: {
        uint32_t v = c.reg(i.rd);
        unsigned n = c.reg(i.rm) & 0xFF;
        if (n == 0) {
            c.set_nz(v);
        } else {
            unsigned m = n & 31;
            uint32_t r = m == 0 ? v : std::rotr(v, static_cast<int>(m));
            shift_result(c, r, r >> 31, true);
        }
        break;
    }
    case Op::TstReg:
        c.set_nz(c.reg(i.rn) & c.reg(i.rm));
        break;
    case Op::RsbImm:
        s.regs[i.rd] = c.add_with_carry(~c.reg(i.rm), 0, true);
        break;
    case Op::CmpReg:
        c.add_with_carry(c.reg(i.rn), ~c.reg(i.rm), true);
        break;
    case Op::CmnReg:
        c.add_with_carry(c.reg(i.rn), c.reg(i.rm), false);
        break;
    case Op::OrrReg: {
        uint32_t r = c.reg(i.rd) | c.reg(i.rm);
        s.regs[i.rd] = r;
        c.set_nz(r);
        break;
    }
    case Op::MulReg: {
        uint32_t r = c.reg(i.rd) * c.reg(i.rm);
        s.regs[i.rd] = r;
        c.set_nz(r); // C and V unchanged
        break;
    }
    case Op::BicReg: {
        uint32_t r = c.reg(i.rd) & ~c.reg(i.rm);
        s.regs[i.rd] = r;
        c.set_nz(r);
        break;
    }
    case Op::MvnReg: {
        uint32_t r = ~c.reg(i.rm);
        s.regs[i.rd] = r;
        c.set_nz(r);
        break;
    }

    case Op::AddHi: {
        uint32_t r = c.reg(i.rd) + c.reg(i.rm); // no flags
        if (i.rd == 15)
            c.branch_to(r);
        else
            s.regs[i.rd] = r;
        break;
    }
    case Op::CmpHi:
        c.add_with_carry(c.reg(i.rn), ~c.reg(i.rm), true);
        break;
    case Op::MovHi: {
        uint32_t r = c.reg(i.rm); // no flags
        if (i.rd == 15)
            c.branch_to(r);
        else
            s.regs[i.rd] = r;
        break;
    }
    case Op::Bx:
        c.branch_to(c.reg(i.rm));
        break;
    case Op::BlxReg: {
        uint32_t target = c.reg(i.rm);
        s.lr() = (i.address + 2) | 1;
        c.branch_to(target);
        break;
    }

    case Op::LdrLit: {
        uint32_t addr = ((i.address + 4) & ~3u) + i.imm;
        s.regs[i.rd] = c.load(addr, 4);
        break;
    }
    case Op::StrReg:
        c.store(c.reg(i.rn) + c.reg(i.rm), 4, c.reg(i.rd));
        break;
    case Op::StrhReg:
        c.store(c.reg(i.rn) + c.reg(i.rm), 2, c.reg(i.rd) & 0xFFFF);
        break;
    case Op::StrbReg:
        c.store(c.reg(i.rn) + c.reg(i.rm), 1, c.reg(i.rd) & 0xFF);
        break;
    case Op::LdrsbReg: {
        uint32_t v = c.load(c.reg(i.rn) + c.reg(i.rm), 1);
        s.regs[i.rd] = static_cast<uint32_t>(static_cast<int8_t>(v));
        break;
    }
    case Op::LdrReg:
        s.regs[i.rd] = c.load(c.reg(i.rn) + c.reg(i.rm), 4);
        break;
    case Op::LdrhReg:
        s.regs[i.rd] = c.load(c.reg(i.rn) + c.reg(i.rm), 2);
        break;
    case Op::LdrbReg:
        s.regs[i.rd] = c.load(c.reg(i.rn) + c.reg(i.rm), 1);
        break;
    case Op::LdrshReg: {
        uint32_t v = c.load(c.reg(i.rn) + c.reg(i.rm), 2);
        s.regs[i.rd] = static_cast<uint32_t>(static_cast<int16_t>(v));
        break;
    }
    case Op::StrImm:
        c.store(c.reg(i.rn) + i.imm, 4, c.reg(i.rd));
        break;
    case Op::LdrImm:
        s.regs[i.rd] = c.load(c.reg(i.rn) + i.imm, 4);
        break;
    case Op::StrbImm:
        c.store(c.reg(i.rn) + i.imm, 1, c.reg(i.rd) & 0xFF);
        break;
    case Op::LdrbImm:
        s.regs[i.rd] = c.load(c.reg(i.rn) + i.imm, 1);
        break;
    case Op::StrhImm:
        c.store(c.reg(i.rn) + i.imm, 2, c.reg(i.rd) & 0xFFFF);
        break;
    case Op::LdrhImm:
        s.regs[i.rd] = c.load(c.reg(i.rn) + i.imm, 2);
        break;
    case Op::StrSp:
        c.store(s.sp() + i.imm, 4, c.reg(i.rd));
        break;
    case Op::LdrSp:
        s.regs[i.rd] = c.load(s.sp() + i.imm, 4);
        break;

    case Op::Adr:
        s.regs[i.rd] = ((i.address + 4) & ~3u) + i.imm;
        break;
    case Op::AddSpImm8:
        s.regs[i.rd] = s.sp() + i.imm;
        break;
    case Op::AddSpImm7:
        s.sp() += i.imm;
        break;
    case Op::SubSpImm7:
        s.sp() -= i.imm;
        break;

    case Op::Sxth:
        s.regs[i.rd] =
            static_cast<uint32_t>(static_cast<int16_t>(c.reg(i.rm) & 0xFFFF));
        break;
    case Op::Sxtb:
        s.regs[i.rd] =
            static_cast<uint32_t>(static_cast<int8_t>(c.reg(i.rm) & 0xFF));
        break;
    case Op::Uxth:
        s.regs[i.rd] = c.reg(i.rm) & 0xFFFF;
        break;
    case Op::Uxtb:
        s.regs[i.rd] = c.reg(i.rm) & 0xFF;
        break;
    case Op::Rev: {
        uint32_t v = c.reg(i.rm);
        s.regs[i.rd] = (v << 24) | ((v & 0xFF00) << 8) |
                       ((v >> 8) & 0xFF00) | (v >> 24);
        break;
    }
    case Op::Rev16: {
        uint32_t v = c.reg(i.rm);
        s.regs[i.rd] = ((v & 0x00FF'00FFu) << 8) | ((v >> 8) & 0x00FF'00FFu);
        break;
    }
    case Op::Revsh: {
        uint32_t v = c.reg(i.rm);
        uint16_t h = static_cast<uint16_t>(((v & 0xFF) << 8) | ((v >> 8) & 0xFF));
        s.regs[i.rd] = static_cast<uint32_t>(static_cast<int16_t>(h));
        break;
    }

    case Op::Push: {
        unsigned n = std::popcount(i.reglist);
        uint32_t addr = s.sp() - 4 * n;
        s.sp() = addr;
        for (unsigned r = 0; r < 16; ++r) {
            if (!(i.reglist & (1u << r))) continue;
            c.store(addr, 4, s.regs[r]);
            addr += 4;
        }
        break;
    }
    case Op::Pop: {
        uint32_t addr = s.sp();
        uint32_t new_pc = 0;
        bool have_pc = false;
        for (unsigned r = 0; r < 16; ++r) {
            if (!(i.reglist & (1u << r))) continue;
            uint32_t v = c.load(addr, 4);
            if (r == 15) {
                new_pc = v;
                have_pc = true;
            } else {
                s.regs[r] = v;
            }
            addr += 4;
        }
        s.sp() = addr;
        if (have_pc) c.branch_to(new_pc);
        break;
    }
    case Op::Stm: {
        uint32_t addr = s.regs[i.rn];
        for (unsigned r = 0; r < 8; ++r) {
            if (!(i.reglist & (1u << r))) continue;
            c.store(addr, 4, s.regs[r]);
            addr += 4;
        }
        s.regs[i.rn] = addr;
        break;
    }
    case Op::Ldm: {
        uint32_t addr = s.regs[i.rn];
        bool base_in_list = i.reglist & (1u << i.rn);
        for (unsigned r = 0; r < 8; ++r) {
            if (!(i.reglist & (1u << r))) continue;
            s.regs[r] = c.load(addr, 4);
            addr += 4;
        }
        if (!base_in_list) s.regs[i.rn] = addr;
        break;
    }

    case Op::BCond:
        if (condition_passed(s, i.cond))
            c.branch_to(i.address + 4 + static_cast<int32_t>(i.imm));
        break;
    case Op::B:
        c.branch_to(i.address + 4 + static_cast<int32_t>(i.imm));
        break;
    case Op::Bl:
        s.lr() = (i.address + 4) | 1;
        c.branch_to(i.address + 4 + static_cast<int32_t>(i.imm));
        break;

    case Op::Bkpt:
        s.halted = true;
        break;
    case Op::Svc:
    case Op::Cps:
    case Op::Hint:
    case Op::Sys32:
        break; // no system model: architectural no-ops
    }

    s.pc() = c.next_pc;
    ++s.instr_retired;
    return ev;
}

} // namespace em0
