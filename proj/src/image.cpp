#include "em0/image.hpp"

#include <cstring>
#include <fstream>

namespace em0 {

namespace {

uint16_t rd16(const std::vector<uint8_t>& b, size_t off) {
    return static_cast<uint16_t>(b[off] | (b[off + 1] << 8));
}

uint32_t rd32(const std::vector<uint8_t>& b, size_t off) {
    return b[off] | (b[off + 1] << 8) | (b[off + 2] << 16) |
           (static_cast<uint32_t>(b[off + 3]) << 24);
}

std::optional<uint32_t> vector_table_sp(const MemoryMap& map) {
    auto sp = map.read(MemoryMap::kFlashBase, 4, Purpose::Data).value;
    if (sp == 0) return std::nullopt;
    return sp;
}

} // namespace

LoadReport load_raw(MemoryMap& map, const std::vector<uint8_t>& bytes,
                    uint32_t base) {
    map.poke(base, bytes.data(), bytes.size());
    LoadReport report;
    report.segments.push_back({base, static_cast<uint32_t>(bytes.size())});
    if (base == MemoryMap::kFlashBase && bytes.size() >= 8) {
        report.initial_sp = vector_table_sp(map);
        uint32_t reset = map.read(MemoryMap::kFlashBase + 4, 4,
                                  Purpose::Data).value;
        if (reset != 0) report.entry = reset & ~1u;
    }
    return report;
}

LoadReport load_elf(MemoryMap& map, const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 52 || std::memcmp(bytes.data(), "\x7f""ELF", 4) != 0)
        throw MalformedImage("not an ELF file");
    if (bytes[4] != 1) throw MalformedImage("not ELFCLASS32");
    if (bytes[5] != 1) throw MalformedImage("not little-endian");
    uint16_t machine = rd16(bytes, 18);
    if (machine != 40) // EM_ARM
        throw MalformedImage("not an ARM ELF (e_machine=" +
                             std::to_string(machine) + ")");

    uint32_t entry = rd32(bytes, 24);
    uint32_t phoff = rd32(bytes, 28);
    uint16_t phentsize = rd16(bytes, 42);
    uint16_t phnum = rd16(bytes, 44);
    if (phentsize < 32)
        throw MalformedImage("bad program header entry size");

    LoadReport report;
    for (uint16_t i = 0; i < phnum; ++i) {
        size_t off = phoff + static_cast<size_t>(i) * phentsize;
        if (off + 32 > bytes.size())
            throw MalformedImage("program header table out of bounds");
        uint32_t type = rd32(bytes, off + 0);
        if (type != 1) continue; // PT_LOAD
        uint32_t p_offset = rd32(bytes, off + 4);
        uint32_t p_vaddr = rd32(bytes, off + 8);
        uint32_t p_paddr = rd32(bytes, off + 12);
        uint32_t p_filesz = rd32(bytes, off + 16);
        if (p_filesz == 0) continue;
        if (static_cast<size_t>(p_offset) + p_filesz > bytes.size())
            throw MalformedImage("segment data out of bounds");
        uint32_t dest = p_paddr != 0 ? p_paddr : p_vaddr;
        map.poke(dest, bytes.data() + p_offset, p_filesz);
        report.segments.push_back({dest, p_filesz});
    }
    if (report.segments.empty())
        throw MalformedImage("no loadable segments");
    report.entry = entry & ~1u;
    report.initial_sp = vector_table_sp(map);
    return report;
}

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedImage("cannot open " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

LoadReport load_image_file(MemoryMap& map, const std::string& path,
                           std::optional<uint32_t> raw_base) {
    auto bytes = read_file(path);
    bool looks_elf =
        bytes.size() >= 4 && std::memcmp(bytes.data(), "\x7f""ELF", 4) == 0;
    if (looks_elf && !raw_base) return load_elf(map, bytes);
    return load_raw(map, bytes, raw_base.value_or(MemoryMap::kFlashBase));
}

} // namespace em0
