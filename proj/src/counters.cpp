#include "em0/counters.hpp"

namespace em0 {

uint64_t EventCounters::histogram_total() const {
    uint64_t t = 0;
    for (auto v : histogram) t += v;
    return t;
}

EventCounters classify(const StepEvents& events) {
    EventCounters d;
    const auto& instr = events.instruction;
    if (instr.kind == OpcodeClass::Muls)
        d.c2 = 1;
    else
        d.c1 = 1;
    if (events.branch_taken) d.c3 = 1;
    for (const auto& a : events.data_accesses) {
        if (a.direction == Direction::Write) {
            if (a.region == Region::Ram) d.c5 += 1;
        } else if (a.region == Region::Ram) {
            d.c4 += 1;
        } else {
            d.c6 += 1; // flash data read, alias included
        }
    }
    d.histogram[static_cast<size_t>(instr.kind)] = 1;
    return d;
}

EventCounters merge(const EventCounters& a, const EventCounters& b) {
    EventCounters r = a;
    r.c1 += b.c1;
    r.c2 += b.c2;
    r.c3 += b.c3;
    r.c4 += b.c4;
    r.c5 += b.c5;
    r.c6 += b.c6;
    r.cycles += b.cycles;
    for (size_t k = 0; k < r.histogram.size(); ++k)
        r.histogram[k] += b.histogram[k];
    return r;
}

} // namespace em0
