#include <pbr/config.hpp>
#include <pbr/error.hpp>

#include <cmath>

namespace pbr {
namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::InvalidConfig, "config_core", what);
}

} // namespace

DerivedConfig derive_and_validate(const SwitchConfig& c, const HbmTiming& t) {
    require(c.N > 0 && c.F > 0 && c.W > 0 && c.H > 0 && c.B > 0, "N, F, W, H, B must be positive");
    require(c.R_gbps > 0.0, "R must be positive");
    require(c.channels_per_stack > 0 && c.L > 0 && c.gamma > 0 && c.S > 0, "memory geometry must be positive");
    require(c.sram_width_bits > 0 && c.sram_width_bits % 8 == 0, "sram_width_bits must be a positive multiple of 8");
    require(c.sram_clock_ghz > 0.0 && c.hbm_bit_rate_gbps > 0.0, "clock and pin rate must be positive");
    require(c.row_size_bytes > 0, "row_size_bytes must be positive");
    require(t.burst_length > 0 && t.channel_width_bits > 0 && t.channel_width_bits % 8 == 0,
            "burst_length and channel_width_bits must be positive");
    require(t.t_faw_ns >= 0 && t.t_rc_ns >= 0 && t.t_rcd_ns >= 0 && t.t_rp_ns >= 0 && t.t_wtr_ns >= 0 &&
                t.t_rtw_ns >= 0 && t.refresh_overhead >= 0,
            "timing values must be non-negative");

    require(c.F % c.H == 0, "alpha = F/H must be a positive integer");
    require(c.L % c.gamma == 0, "L mod gamma must be 0");
    require(c.gamma <= 4, "gamma must not exceed 4 (four-activation window)");

    const std::uint64_t burst_bytes = std::uint64_t(t.burst_length) * t.channel_width_bits / 8;
    require(c.S % burst_bytes == 0, "S must be a multiple of burst_length * channel_width_bits / 8");
    require(c.row_size_bytes % c.S == 0, "S must divide the row size");

    DerivedConfig d;
    d.cfg = c;
    d.timing = t;
    d.alpha = c.F / c.H;
    d.T = c.B * c.channels_per_stack;
    d.slice_bytes = c.sram_width_bits / 8;
    d.k = std::uint64_t(c.N) * d.slice_bytes;
    d.K = std::uint64_t(c.gamma) * d.T * c.S;
    require(d.K % d.k == 0, "K/k must be a positive integer");
    d.batches_per_frame = d.K / d.k;
    d.bank_groups = c.L / c.gamma;
    d.total_io_gbps = double(c.N) * c.F * c.W * c.R_gbps;
    d.per_switch_io_gbps = 2.0 * d.total_io_gbps / c.H;
    d.port_rate_gbps = double(d.alpha) * c.W * c.R_gbps;
    d.t_segment_ns = double(c.S) * 8.0 / (double(t.channel_width_bits) * c.hbm_bit_rate_gbps);
    return d;
}

SramBound sram_bound_bytes(const DerivedConfig& d) {
    const std::uint64_t N = d.cfg.N;
    const std::uint64_t kb = d.k * 8;
    const std::uint64_t Kb = d.K * 8;
    const std::uint64_t sq = kSquareTermBits;

    SramBound b;
    b.component_bits[kInputs] = N * (N * kb + kb - N * sq);
    b.component_bits[kTail] = N * Kb + Kb - N * kb;
    b.component_bits[kHead] = (N + 1) * Kb / 2;
    b.component_bits[kOutputs] = 2 * N * kb;
    // 3/2 (N+1) K + (N+2) N k - N^2
    b.total_bits = 3 * (N + 1) * Kb / 2 + (N + 2) * N * kb - N * N * sq;
    return b;
}

AnalysisReport design_analysis(const DerivedConfig& d, const AnalysisParams& p) {
    const auto& c = d.cfg;
    AnalysisReport r;
    const double buffer_gbit = double(c.H) * c.B * p.stack_capacity_gb * 8.0;
    r.buffer_ms = buffer_gbit / d.total_io_gbps * 1e3;

    r.per_switch_input_tbps = d.total_io_gbps / c.H / 1e3;
    r.proc_power_w = p.proc_anchor_w * r.per_switch_input_tbps / p.proc_anchor_tbps;
    r.hbm_power_w = double(c.B) * p.stack_power_w;
    r.oeo_power_w = p.oeo_pj_per_bit * 1e-12 * d.per_switch_io_gbps * 1e9;
    r.power_w_per_switch = r.proc_power_w + r.hbm_power_w + r.oeo_power_w;
    r.power_kw_total = r.power_w_per_switch * c.H / 1e3;

    r.area_mm2_per_switch = p.die_area_mm2 + double(c.B) * p.stack_edge_mm * p.stack_edge_mm;
    r.area_mm2_total = r.area_mm2_per_switch * c.H;
    r.sram = sram_bound_bytes(d);
    return r;
}

void check_timing_feasible(const DerivedConfig& d) {
    const auto& t = d.timing;
    const double ts = d.t_segment_ns;
    const double group = d.cfg.gamma * ts;
    constexpr double eps = 1e-9;
    auto fail = [](const std::string& what) { throw Error(ErrorKind::TimingInfeasible, "hbm_sim", what); };
    if (t.t_faw_ns > 4.0 * ts + eps) fail("t_FAW exceeds four segment times");
    if (t.t_rc_ns > group + eps) fail("t_RC exceeds gamma segment times");
    if (ts + t.t_rp_ns + t.t_rcd_ns > group + eps)
        fail("t_S + t_RP + t_RCD exceeds gamma segment times");
}

SwitchConfig reference_config() { return SwitchConfig{}; }
HbmTiming reference_timing() { return HbmTiming{}; }

SwitchConfig desk_config() {
    SwitchConfig c;
    c.N = 4;
    c.F = 4;
    c.W = 4;
    c.R_gbps = 40.0;
    c.H = 4;
    c.B = 1;
    c.channels_per_stack = 8;
    c.L = 8;
    c.gamma = 2;
    c.S = 2048;
    c.sram_width_bits = 4096;
    c.sram_clock_ghz = 2.5;
    c.hbm_bit_rate_gbps = 10.0;
    c.row_size_bytes = 2048;
    return c;
}

HbmTiming desk_timing() {
    HbmTiming t;
    t.t_faw_ns = 30.0;
    t.t_rc_ns = 30.0;
    t.t_rcd_ns = 12.0;
    t.t_rp_ns = 12.0;
    t.t_wtr_ns = 0.5;
    t.t_rtw_ns = 0.5;
    return t;
}

} // namespace pbr
