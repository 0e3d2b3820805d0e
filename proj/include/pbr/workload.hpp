#pragma once

/// @file workload.hpp
/// @brief Packet streams fed to the switch simulator and the oracle.

#include <pbr/config.hpp>
#include <pbr/seed.hpp>

#include <cstdint>
#include <vector>

namespace pbr {

/// Ports are 0-based in memory; workload files use 1-based ports.
struct Packet {
    std::uint64_t id = 0;
    std::uint32_t input = 0;
    std::uint32_t output = 0;
    std::uint32_t size = 64;
    std::int64_t arrival_slot = 0;

    bool operator==(const Packet&) const = default;
};

using Workload = std::vector<Packet>;

struct PacketLimits {
    std::uint32_t min_bytes = 64;
    std::uint32_t max_bytes = 9216;
};

/// Checks ordering, port range, size limits and that no input line is asked
/// for more than slice_bytes per slot: each packet must be able to start in its
/// arrival slot. Throws RateViolation or InvalidConfig.
void validate_workload(const Workload& w, std::uint32_t N, std::uint32_t slice_bytes, const PacketLimits& lim = {});

/// Stable sort by (arrival_slot, input, id).
void sort_workload(Workload& w);

/// Frame-only traffic: time is cut into rounds; in each round every input
/// sends one K-byte burst to a fresh random permutation of outputs, at a random
/// offset inside the round. Round starts are floor(r * (K/P) / load), so each
/// output sees at most one burst at a time and long-run load equals load.
/// Packet sizes are multiples of 64 that tile each k-byte batch.
Workload gen_frame_only_workload(const DerivedConfig& d, double load, std::uint64_t horizon, std::uint64_t seed);

/// Sub-frame traffic: like the frame-only generator but burst sizes are
/// uniform multiples of 64 in [64, 3K/2], and traffic stops after
/// active_fraction of the horizon. Packets still tile batch boundaries given
/// the bytes already queued for the same (input, output).
Workload gen_subframe_workload(const DerivedConfig& d, double load, std::uint64_t horizon, double active_fraction,
                               std::uint64_t seed);

/// Frame-only rounds where output 0 receives overload times its capacity:
/// in every round two inputs send a burst to output 0 sized so that the total
/// per round is overload * round_bytes.
Workload gen_overload_workload(const DerivedConfig& d, double overload, std::uint64_t horizon, std::uint64_t seed);

Workload lone_packet(std::uint32_t input, std::uint32_t output, std::uint32_t size, std::int64_t slot = 0);

/// Packets of one burst of `bytes` starting at slot `start` at line rate.
/// `queued` is the number of bytes already waiting for the same pair modulo k;
/// packets are cut so none crosses a k boundary.
void append_burst(Workload& w, std::uint32_t input, std::uint32_t output, std::uint64_t bytes, std::int64_t start,
                  std::uint32_t slice_bytes, std::uint64_t k, std::uint64_t queued, std::uint64_t& next_id, Rng& rng);

} // namespace pbr
