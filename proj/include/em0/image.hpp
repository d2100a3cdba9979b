#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "em0/memory.hpp"

namespace em0 {

struct LoadReport {
    struct Segment {
        uint32_t address;
        uint32_t size;
    };
    std::vector<Segment> segments;
    std::optional<uint32_t> entry;      // Thumb bit already cleared
    std::optional<uint32_t> initial_sp; // from the vector table, if present
};

LoadReport load_raw(MemoryMap& map, const std::vector<uint8_t>& bytes,
                    uint32_t base);

// Minimal ELF32 little-endian loader: PT_LOAD segments and the entry point
// only. Segments are placed at their physical address (LMA).
LoadReport load_elf(MemoryMap& map, const std::vector<uint8_t>& bytes);

// Dispatches on the ELF magic.
LoadReport load_image_file(MemoryMap& map, const std::string& path,
                           std::optional<uint32_t> raw_base);

std::vector<uint8_t> read_file(const std::string& path);

} // namespace em0
