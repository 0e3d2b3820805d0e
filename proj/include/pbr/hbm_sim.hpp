#pragma once

/// @file hbm_sim.hpp
/// @brief Slot-level simulator of one HBM switch running parallel frame interleaving.
///
/// One slot moves one batch slice (sram_width_bits) per port. Input lines
/// deliver at most one slice worth of bytes per slot into per-output batch
/// queues; full batches wait in a per-input FIFO and cross the input crossbar
/// one slice per slot, always starting at module 0. The tail SRAM assembles
/// K/k batches per output into a frame. Each interleaving cycle first writes up
/// to f queued frames (one bank group each) and then reads f frames, one per
/// output in cyclic order. Read frames land in the head SRAM, cross the output
/// crossbar batch by batch and are reassembled into packets at the output port.

#include <pbr/config.hpp>
#include <pbr/hbm_timing.hpp>
#include <pbr/workload.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace pbr {

struct SimOptions {
    std::uint64_t slots = 0;                  ///< run length; 0 picks last arrival plus a drain margin
    std::int64_t padding_timeout = -1;        ///< slots; negative disables padding
    bool bypass = false;
    std::uint32_t speedup_n = 0;              ///< one marked slot every n slots; 0 disables
    std::uint32_t frames_per_phase = 0;       ///< 0 means L / gamma
    bool allow_straddle = true;               ///< packets may cross batch boundaries
    std::int64_t marked_min_age = -1;         ///< widow age threshold; negative means K/P + 4N
    std::uint64_t hbm_capacity_frames = 0;    ///< 0 means unbounded
    bool record_commands = true;
    std::uint32_t occupancy_stride = 0;       ///< sample occupancy every n slots; 0 disables
    bool assert_bounds = false;               ///< throw CapacityOverflow on the first bound excess
    bool check_invariants = true;             ///< conservation and frame order every slot
    PacketLimits limits;
};

struct OccupancySample {
    std::uint64_t slot = 0;
    std::array<std::uint64_t, 4> bytes{};     ///< inputs, tail, head, outputs (SramComponent order)
    std::uint64_t hbm = 0;
    std::uint64_t marked = 0;
};

struct FrameRecord {
    std::uint32_t output = 0;
    std::uint64_t seq = 0;
    std::uint32_t group = 0;
    std::uint64_t real_bytes = 0;
    std::uint64_t padded_bytes = 0;
    std::int64_t formed_slot = -1;
    std::int64_t written_slot = -1;           ///< last pass done; -1 if bypassed or dropped
    std::int64_t head_slot = -1;              ///< arrival in head SRAM
    std::int64_t delivered_slot = -1;         ///< last slice at the output port
    bool bypassed = false;
    bool dropped = false;
};

struct SimCounters {
    std::uint64_t bytes_in = 0;
    std::uint64_t bytes_out = 0;
    std::uint64_t batches = 0;
    std::uint64_t padded_batches = 0;
    std::uint64_t frames_formed = 0;
    std::uint64_t padded_frames = 0;
    std::uint64_t pad_bytes = 0;
    std::uint64_t frames_written = 0;
    std::uint64_t frames_read = 0;
    std::uint64_t bypasses = 0;
    std::uint64_t idle_read_turns = 0;
    std::uint64_t marked_frames = 0;
    std::uint64_t marked_bytes = 0;
    std::uint64_t dropped_frames = 0;
    std::uint64_t dropped_bytes = 0;
    std::uint64_t packets_departed = 0;
};

struct SimTrace {
    std::vector<std::int64_t> departure;      ///< per workload index; -1 if still inside
    std::vector<HbmCommand> commands;
    std::vector<OccupancySample> occupancy;
    std::vector<FrameRecord> frames;          ///< in formation order
    std::array<std::uint64_t, 4> max_occupancy{};
    std::uint64_t max_total_occupancy = 0;
    std::array<std::uint64_t, 4> bound_violation_slots{};   ///< slots where a component exceeded its bound
    std::int64_t first_bound_violation = -1;
    SramBound bound;
    SimCounters counters;
    CycleLayout layout;
    std::uint64_t slots = 0;
    std::int64_t marked_min_age = 0;
};

/// Runs the switch. Throws RateViolation for a workload exceeding line rate,
/// CapacityOverflow when assert_bounds is set and a bound fires,
/// InvariantViolation when a conservation or ordering check fails, and
/// TimingInfeasible when the timing parameters cannot support the schedule.
SimTrace run(const Workload& w, const DerivedConfig& d, const SimOptions& opt);

} // namespace pbr
