#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace em0 {

class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MemoryFault : public SimError {
public:
    MemoryFault(uint32_t addr, const std::string& what)
        : SimError(what), address(addr) {}
    uint32_t address;
};

namespace detail {
inline std::string hex32(uint32_t v) {
    char buf[11];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}
} // namespace detail

class UnalignedAccess : public MemoryFault {
public:
    UnalignedAccess(uint32_t addr, unsigned size)
        : MemoryFault(addr, "unaligned " + std::to_string(size) +
                                "-byte access at " + detail::hex32(addr)) {}
};

class FlashWriteFault : public MemoryFault {
public:
    explicit FlashWriteFault(uint32_t addr)
        : MemoryFault(addr, "write to read-only flash") {}
};

class UndefinedEncoding : public SimError {
public:
    UndefinedEncoding(uint32_t addr, uint32_t encoding_bits)
        : SimError("undefined encoding"), address(addr), bits(encoding_bits) {}
    uint32_t address;
    uint32_t bits;
};

class Halted : public SimError {
public:
    Halted() : SimError("simulator is halted") {}
};

class MalformedImage : public SimError {
public:
    using SimError::SimError;
};

class SegmentOutOfRange : public SimError {
public:
    using SimError::SimError;
};

class UnsupportedConfig : public SimError {
public:
    using SimError::SimError;
};

class SchemaError : public SimError {
public:
    using SimError::SimError;
};

class NegativeCoefficient : public SimError {
public:
    using SimError::SimError;
};

class InsufficientData : public SimError {
public:
    using SimError::SimError;
};

class DegenerateDesign : public SimError {
public:
    using SimError::SimError;
};

class ZeroVariance : public SimError {
public:
    using SimError::SimError;
};

class UnknownBlock : public SimError {
public:
    using SimError::SimError;
};

} // namespace em0
