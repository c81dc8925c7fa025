#ifndef MINIPREGEL_CHECKPOINT_HPP
#define MINIPREGEL_CHECKPOINT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "minipregel/engine.hpp"
#include "minipregel/graph.hpp"

namespace minipregel {

// Everything needed to resume a run at a barrier: the superstep about to
// execute, per-vertex values and halted flags, the inbox delivered for that
// superstep, aggregator values visible to it, and the topology.
struct EngineState {
    std::uint64_t superstep = 0;
    std::uint64_t n_total = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> halted;                       // one flag per id
    std::vector<Message> inbox;                             // grouped by target
    std::vector<std::pair<std::string, double>> aggregators; // sorted by name
    std::vector<std::uint8_t> live;                         // one flag per id
    std::vector<Edge> edges;

    friend bool operator==(const EngineState&, const EngineState&) = default;
};

// Blob layout: magic "PGLC", u32 version (1), u64 superstep, u64 n_total,
// then five length-prefixed sections in order: values, halted bitmap, inbox
// triples (target, sender, payload), aggregator table, edges (live bitmap +
// edge triples). All integers little-endian, floats IEEE-754 binary64.
std::vector<std::uint8_t> make_checkpoint(const EngineState& state);

// Throws CheckpointError on bad magic, unsupported version, truncation, or
// any section length mismatch.
EngineState restore_checkpoint(std::span<const std::uint8_t> blob);

} // namespace minipregel

#endif // MINIPREGEL_CHECKPOINT_HPP
