#include "em0/memory.hpp"

#include <cstring>

namespace em0 {

namespace {

bool is_pow2(uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

} // namespace

MemoryMap::MemoryMap(uint32_t flash_size, uint32_t ram_size)
    : flash_size_(flash_size), ram_size_(ram_size) {
    if (!is_pow2(flash_size) || flash_size < 1024)
        throw MalformedImage("flash size must be a power of two >= 1 KiB");
    if (!is_pow2(ram_size) || ram_size < 1024)
        throw MalformedImage("ram size must be a power of two >= 1 KiB");
    flash_.assign(flash_size, 0);
    ram_.assign(ram_size, 0);
}

bool MemoryMap::in_flash(uint32_t address) const {
    return (address >= kFlashBase && address < kFlashBase + flash_size_) ||
           (address - kAliasBase) < flash_size_;
}

bool MemoryMap::in_ram(uint32_t address) const {
    return address >= kRamBase && address < kRamBase + ram_size_;
}

const uint8_t* MemoryMap::resolve(uint32_t address, unsigned size,
                                  Region& region, bool for_write) const {
    uint32_t off;
    if (address >= kFlashBase && address - kFlashBase + size <= flash_size_) {
        region = Region::Flash;
        off = address - kFlashBase;
        if (for_write) throw FlashWriteFault(address);
        return flash_.data() + off;
    }
    if (address < flash_size_ && address + size <= flash_size_) {
        // Boot alias mirrors flash at 0.
        region = Region::Flash;
        if (for_write) throw FlashWriteFault(address);
        return flash_.data() + address;
    }
    if (address >= kRamBase && address - kRamBase + size <= ram_size_) {
        region = Region::Ram;
        return ram_.data() + (address - kRamBase);
    }
    throw MemoryFault(address, "access to unmapped address " +
                                   detail::hex32(address));
}

MemoryMap::ReadResult MemoryMap::read(uint32_t address, unsigned size,
                                      Purpose purpose) const {
    if (address % size != 0) throw UnalignedAccess(address, size);
    Region region;
    const uint8_t* p = resolve(address, size, region, false);
    uint32_t value = 0;
    for (unsigned i = 0; i < size; ++i)
        value |= static_cast<uint32_t>(p[i]) << (8 * i);
    return {value, {region, Direction::Read, purpose}};
}

AccessClass MemoryMap::write(uint32_t address, unsigned size, uint32_t value) {
    if (address % size != 0) throw UnalignedAccess(address, size);
    Region region;
    auto* p = const_cast<uint8_t*>(resolve(address, size, region, true));
    for (unsigned i = 0; i < size; ++i)
        p[i] = static_cast<uint8_t>(value >> (8 * i));
    return {region, Direction::Write, Purpose::Data};
}

void MemoryMap::poke(uint32_t address, const uint8_t* data, size_t len) {
    if (len == 0) return;
    if (address >= kFlashBase && address - kFlashBase + len <= flash_size_) {
        std::memcpy(flash_.data() + (address - kFlashBase), data, len);
        return;
    }
    if (address + len <= flash_size_) {
        std::memcpy(flash_.data() + address, data, len);
        return;
    }
    if (address >= kRamBase && address - kRamBase + len <= ram_size_) {
        std::memcpy(ram_.data() + (address - kRamBase), data, len);
        return;
    }
    throw SegmentOutOfRange("segment at " + detail::hex32(address) + " (" +
                            std::to_string(len) + " bytes) is outside the map");
}

} // namespace em0
