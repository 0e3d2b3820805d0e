#pragma once

/// @file config.hpp
/// @brief Architectural parameters of the router package, derived geometry,
/// validation and the closed-form sizing calculators.

#include <array>
#include <cstdint>
#include <string>

namespace pbr {

/// Top-level architecture and memory geometry.
struct SwitchConfig {
    std::uint32_t N = 16;                   ///< ports (fiber ribbons)
    std::uint32_t F = 64;                   ///< fibers per ribbon
    std::uint32_t W = 16;                   ///< wavelengths per fiber
    double R_gbps = 40.0;                   ///< bandwidth per wavelength
    std::uint32_t H = 16;                   ///< parallel HBM switches
    std::uint32_t B = 4;                    ///< HBM stacks per switch
    std::uint32_t channels_per_stack = 32;
    std::uint32_t L = 64;                   ///< banks per channel
    std::uint32_t gamma = 4;                ///< banks per interleaving group
    std::uint32_t S = 1024;                 ///< segment bytes
    std::uint32_t sram_width_bits = 2048;
    double sram_clock_ghz = 2.5;
    double hbm_bit_rate_gbps = 10.0;        ///< per data pin
    std::uint32_t row_size_bytes = 1024;

    bool operator==(const SwitchConfig&) const = default;
};

/// HBM command timing. Times in ns.
struct HbmTiming {
    std::uint32_t burst_length = 8;
    std::uint32_t channel_width_bits = 64;
    double t_faw_ns = 30.0;
    double t_rc_ns = 30.0;
    double t_rcd_ns = 14.0;
    double t_rp_ns = 14.0;
    double t_wtr_ns = 0.41;
    double t_rtw_ns = 0.41;
    double refresh_overhead = 0.0;          ///< fractional slowdown of every cycle

    bool operator==(const HbmTiming&) const = default;
};

/// Anchors for the power, area and buffering estimates.
struct AnalysisParams {
    double stack_capacity_gb = 64.0;
    double stack_power_w = 75.0;
    double oeo_pj_per_bit = 1.15;
    double proc_anchor_tbps = 51.2;
    double proc_anchor_w = 500.0;
    double die_area_mm2 = 800.0;
    double stack_edge_mm = 11.0;
};

/// Quantities that follow from a valid SwitchConfig/HbmTiming pair.
struct DerivedConfig {
    SwitchConfig cfg;
    HbmTiming timing;
    std::uint32_t alpha = 0;                ///< F / H
    std::uint32_t T = 0;                    ///< total HBM channels per switch
    std::uint32_t slice_bytes = 0;          ///< sram_width_bits / 8, one batch slice
    std::uint64_t k = 0;                    ///< batch bytes
    std::uint64_t K = 0;                    ///< frame bytes
    std::uint64_t batches_per_frame = 0;    ///< K / k
    std::uint32_t bank_groups = 0;          ///< L / gamma
    double total_io_gbps = 0.0;             ///< N F W R, one direction
    double per_switch_io_gbps = 0.0;        ///< 2 N F W R / H
    double port_rate_gbps = 0.0;            ///< alpha W R
    double t_segment_ns = 0.0;              ///< S bytes over one channel

    bool operator==(const DerivedConfig&) const = default;
};

/// Validates every structural invariant and returns the derived quantities.
/// Throws Error(InvalidConfig) naming the first violated invariant.
DerivedConfig derive_and_validate(const SwitchConfig& cfg, const HbmTiming& timing = {});

/// Component order in SramBound::component_bits.
enum SramComponent : std::size_t { kInputs = 0, kTail = 1, kHead = 2, kOutputs = 3 };

/// SRAM requirement of one HBM switch. Kept in bits so the N^2 correction,
/// which is a bit quantity, stays exact.
struct SramBound {
    std::uint64_t total_bits = 0;
    std::array<std::uint64_t, 4> component_bits{};

    double total_bytes() const { return static_cast<double>(total_bits) / 8.0; }
    double component_bytes(std::size_t c) const { return static_cast<double>(component_bits[c]) / 8.0; }
    double total_mb() const { return total_bytes() / 1e6; }   ///< decimal MB
};

/// Bits per unit of the −N² correction term. The term is read as bits;
/// set to 8 to read it as bytes.
inline constexpr std::uint64_t kSquareTermBits = 1;

SramBound sram_bound_bytes(const DerivedConfig& d);

struct AnalysisReport {
    double buffer_ms = 0.0;
    double per_switch_input_tbps = 0.0;
    double proc_power_w = 0.0;
    double hbm_power_w = 0.0;
    double oeo_power_w = 0.0;
    double power_w_per_switch = 0.0;
    double power_kw_total = 0.0;
    double area_mm2_per_switch = 0.0;
    double area_mm2_total = 0.0;
    SramBound sram;
};

AnalysisReport design_analysis(const DerivedConfig& d, const AnalysisParams& p = {});

/// Hardware constraints that the staggered write/read schedule needs.
/// Throws Error(TimingInfeasible).
void check_timing_feasible(const DerivedConfig& d);

/// Reference package configuration.
SwitchConfig reference_config();
HbmTiming reference_timing();

/// Small configuration used by the simulator suites: N=4, T=8, L=8, gamma=2.
SwitchConfig desk_config();
HbmTiming desk_timing();

} // namespace pbr
