#pragma once

/// @file hbm_timing.hpp
/// @brief HBM command generation for frame writes/reads and the timing checker.

#include <pbr/config.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace pbr {

enum class CmdKind : std::uint8_t { ACT, WR, RD, PRE };

std::string to_string(CmdKind k);

/// One HBM command. ACT and PRE are issued to every channel at once and
/// carry channel 0; bursts carry their channel in [1, T]. Banks are 1-based.
struct HbmCommand {
    CmdKind kind = CmdKind::ACT;
    std::uint32_t channel = 0;
    std::uint32_t bank = 1;
    double time_ns = 0.0;
    std::uint32_t output = 0;
    std::uint64_t frame_seq = 0;
    std::uint32_t segment = 0;   ///< bursts: pass*T + channel-1; ACT/PRE: pass

    bool operator==(const HbmCommand&) const = default;
};

/// Frame identity needed for scheduling.
struct FrameRef {
    std::uint32_t output = 0;
    std::uint64_t seq = 0;
    std::uint32_t group = 0;   ///< seq mod (L / gamma)
};

/// Appends the commands of one frame access starting at start_ns:
/// for pass p, bank gamma*h+p+1 is activated t_RCD before the pass, T bursts
/// of S bytes run in parallel for t_S, and the bank is precharged at the end.
void append_frame_schedule(std::vector<HbmCommand>& out, CmdKind burst, const FrameRef& f, const DerivedConfig& d,
                           double start_ns);

std::vector<HbmCommand> pfi_write_schedule(const FrameRef& f, const DerivedConfig& d, double start_ns);
std::vector<HbmCommand> pfi_read_schedule(const FrameRef& f, const DerivedConfig& d, double start_ns);

/// Slot-level layout of one interleaving cycle of f write frames followed by
/// f read turns. One slot moves one batch slice per port, so the cycle is
/// exactly f*K/k slots and the slot length follows from the cycle length.
struct CycleLayout {
    std::uint32_t frames_per_phase = 1;
    double t_segment_ns = 0.0;
    double frame_ns = 0.0;            ///< gamma * t_S
    double cycle_ns = 0.0;
    std::uint64_t slots_per_cycle = 0;
    double slot_ns = 0.0;
    std::vector<std::uint64_t> write_pass_end_slot;  ///< [q * gamma + p], offset inside the cycle
    std::vector<std::uint64_t> read_start_slot;      ///< [q]
    std::vector<std::uint64_t> read_end_slot;        ///< [q]

    double write_start_ns(std::uint32_t q) const { return q * frame_ns; }
    double read_start_ns(std::uint32_t q) const;
    /// First slot offset whose start is at or after offset_ns.
    std::uint64_t slot_at_or_after(double offset_ns) const;

    double t_wtr_ns = 0.0;
    double t_rtw_ns = 0.0;
};

CycleLayout make_cycle_layout(const DerivedConfig& d, std::uint32_t frames_per_phase);

struct TimingViolation {
    std::string rule;
    std::uint32_t channel = 0;
    std::uint32_t bank = 0;
    double time_ns = 0.0;
};

struct TimingCheck {
    std::vector<TimingViolation> violations;
    std::uint64_t activates = 0;          ///< per-channel ACT events checked
    std::uint64_t bursts = 0;
    std::uint64_t transitions = 0;        ///< WR/RD direction changes
    std::uint32_t max_acts_in_faw = 0;
    bool ok() const { return violations.empty(); }
};

/// Checks a full trace: at most four ACTs per rolling t_FAW window, t_RC between
/// ACTs of a bank, t_RP from PRE to ACT, t_RCD from ACT to burst, bursts only to
/// open banks, no burst overlap on a channel, and t_WTR/t_RTW at every change of
/// direction. Violations are capped at max_report entries.
TimingCheck check_timing(const std::vector<HbmCommand>& trace, const DerivedConfig& d, std::size_t max_report = 64);

} // namespace pbr
