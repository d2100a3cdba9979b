#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "em0/errors.hpp"

namespace em0 {

enum class Region { Flash, Ram };
enum class Direction { Read, Write };
enum class Purpose { Fetch, Data };

struct AccessClass {
    Region region;
    Direction direction;
    Purpose purpose;
};

/// STM32F0xx memory map: flash at 0x0800'0000, mirrored at 0 (boot alias),
/// SRAM at 0x2000'0000. Flash is read-only at runtime; images are placed
/// with poke() before execution starts.
class MemoryMap {
public:
    static constexpr uint32_t kFlashBase = 0x0800'0000;
    static constexpr uint32_t kAliasBase = 0x0000'0000;
    static constexpr uint32_t kRamBase = 0x2000'0000;

    explicit MemoryMap(uint32_t flash_size = 64 * 1024,
                       uint32_t ram_size = 8 * 1024);

    uint32_t flash_size() const { return flash_size_; }
    uint32_t ram_size() const { return ram_size_; }

    struct ReadResult {
        uint32_t value;
        AccessClass cls;
    };

    // Little-endian; size is 1, 2 or 4 and the address must be size-aligned.
    // Alias-region reads classify as Flash.
    ReadResult read(uint32_t address, unsigned size, Purpose purpose) const;
    AccessClass write(uint32_t address, unsigned size, uint32_t value);

    // Load-time store, may target flash. Throws SegmentOutOfRange.
    void poke(uint32_t address, const uint8_t* data, size_t len);

    bool in_flash(uint32_t address) const;
    bool in_ram(uint32_t address) const;

private:
    uint32_t flash_size_;
    uint32_t ram_size_;
    std::vector<uint8_t> flash_;
    std::vector<uint8_t> ram_;

    // Resolves to (backing store, offset, region); throws MemoryFault.
    const uint8_t* resolve(uint32_t address, unsigned size, Region& region,
                           bool for_write) const;
};

} // namespace em0
