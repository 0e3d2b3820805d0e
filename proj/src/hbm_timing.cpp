#include <pbr/hbm_timing.hpp>
#include <pbr/error.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace pbr {

std::string to_string(CmdKind k) {
    switch (k) {
    case CmdKind::ACT: return "ACT";
    case CmdKind::WR: return "WR";
    case CmdKind::RD: return "RD";
    case CmdKind::PRE: return "PRE";
    }
    return "?";
}

void append_frame_schedule(std::vector<HbmCommand>& out, CmdKind burst, const FrameRef& f, const DerivedConfig& d,
                           double start_ns) {
    const auto& c = d.cfg;
    const double ts = d.t_segment_ns;
    for (std::uint32_t p = 0; p < c.gamma; ++p) {
        const std::uint32_t bank = c.gamma * f.group + p + 1;
        const double tp = start_ns + p * ts;
        out.push_back({CmdKind::ACT, 0, bank, tp - d.timing.t_rcd_ns, f.output, f.seq, p});
        for (std::uint32_t ch = 1; ch <= d.T; ++ch)
            out.push_back({burst, ch, bank, tp, f.output, f.seq, p * d.T + ch - 1});
        out.push_back({CmdKind::PRE, 0, bank, tp + ts, f.output, f.seq, p});
    }
}

std::vector<HbmCommand> pfi_write_schedule(const FrameRef& f, const DerivedConfig& d, double start_ns) {
    check_timing_feasible(d);
    std::vector<HbmCommand> out;
    append_frame_schedule(out, CmdKind::WR, f, d, start_ns);
    return out;
}

std::vector<HbmCommand> pfi_read_schedule(const FrameRef& f, const DerivedConfig& d, double start_ns) {
    check_timing_feasible(d);
    std::vector<HbmCommand> out;
    append_frame_schedule(out, CmdKind::RD, f, d, start_ns);
    return out;
}

double CycleLayout::read_start_ns(std::uint32_t q) const {
    return frames_per_phase * frame_ns + t_wtr_ns + q * frame_ns;
}

std::uint64_t CycleLayout::slot_at_or_after(double offset_ns) const {
    const double x = offset_ns / slot_ns;
    return static_cast<std::uint64_t>(std::max(0.0, std::ceil(x - 1e-9)));
}

CycleLayout make_cycle_layout(const DerivedConfig& d, std::uint32_t f) {
    if (f == 0) throw Error(ErrorKind::InvalidConfig, "hbm_sim", "frames_per_phase must be positive");
    CycleLayout L;
    L.frames_per_phase = f;
    L.t_segment_ns = d.t_segment_ns;
    L.frame_ns = d.cfg.gamma * d.t_segment_ns;
    L.t_wtr_ns = d.timing.t_wtr_ns;
    L.t_rtw_ns = d.timing.t_rtw_ns;
    L.cycle_ns = (2.0 * f * L.frame_ns + L.t_wtr_ns + L.t_rtw_ns) * (1.0 + d.timing.refresh_overhead);
    L.slots_per_cycle = std::uint64_t(f) * d.batches_per_frame;
    L.slot_ns = L.cycle_ns / double(L.slots_per_cycle);
    for (std::uint32_t q = 0; q < f; ++q)
        for (std::uint32_t p = 0; p < d.cfg.gamma; ++p)
            L.write_pass_end_slot.push_back(L.slot_at_or_after(L.write_start_ns(q) + (p + 1) * L.t_segment_ns));
    for (std::uint32_t q = 0; q < f; ++q) {
        L.read_start_slot.push_back(std::min(L.slots_per_cycle - 1, L.slot_at_or_after(L.read_start_ns(q))));
        L.read_end_slot.push_back(L.slot_at_or_after(L.read_start_ns(q) + L.frame_ns));
    }
    return L;
}

namespace {

int kind_rank(CmdKind k) {
    switch (k) {
    case CmdKind::PRE: return 0;
    case CmdKind::ACT: return 1;
    default: return 2;
    }
}

} // namespace

TimingCheck check_timing(const std::vector<HbmCommand>& trace, const DerivedConfig& d, std::size_t max_report) {
    constexpr double eps = 1e-9;
    const auto& t = d.timing;
    const double ts = d.t_segment_ns;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    TimingCheck res;
    auto flag = [&](const char* rule, std::uint32_t ch, std::uint32_t bank, double when) {
        if (res.violations.size() < max_report) res.violations.push_back({rule, ch, bank, when});
        else if (res.violations.size() == max_report) res.violations.push_back({"more-violations-truncated", ch, bank, when});
    };

    std::vector<std::size_t> broadcast;
    std::vector<std::vector<std::size_t>> per_channel(d.T + 1);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& c = trace[i];
        if (c.bank == 0 || c.bank > d.cfg.L || c.channel > d.T) {
            flag("out-of-range", c.channel, c.bank, c.time_ns);
            continue;
        }
        if (c.channel == 0) broadcast.push_back(i);
        else per_channel[c.channel].push_back(i);
    }

    std::vector<std::size_t> order;
    for (std::uint32_t ch = 1; ch <= d.T; ++ch) {
        order = broadcast;
        order.insert(order.end(), per_channel[ch].begin(), per_channel[ch].end());
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& x = trace[a];
            const auto& y = trace[b];
            if (x.time_ns != y.time_ns) return x.time_ns < y.time_ns;
            return kind_rank(x.kind) < kind_rank(y.kind);
        });

        std::vector<bool> open(d.cfg.L + 1, false);
        std::vector<double> last_act(d.cfg.L + 1, nan), last_pre(d.cfg.L + 1, nan);
        std::deque<double> acts;
        double burst_end = -std::numeric_limits<double>::infinity();
        bool have_burst = false;
        CmdKind last_dir = CmdKind::WR;

        for (std::size_t idx : order) {
            const auto& c = trace[idx];
            const std::uint32_t b = c.bank;
            switch (c.kind) {
            case CmdKind::ACT:
                ++res.activates;
                if (open[b]) flag("act-to-open-bank", ch, b, c.time_ns);
                if (!std::isnan(last_pre[b]) && c.time_ns - last_pre[b] < t.t_rp_ns - eps) flag("t_RP", ch, b, c.time_ns);
                if (!std::isnan(last_act[b]) && c.time_ns - last_act[b] < t.t_rc_ns - eps) flag("t_RC", ch, b, c.time_ns);
                acts.push_back(c.time_ns);
                while (!acts.empty() && acts.front() <= c.time_ns - t.t_faw_ns + eps) acts.pop_front();
                res.max_acts_in_faw = std::max<std::uint32_t>(res.max_acts_in_faw, std::uint32_t(acts.size()));
                if (acts.size() > 4) flag("t_FAW", ch, b, c.time_ns);
                open[b] = true;
                last_act[b] = c.time_ns;
                break;
            case CmdKind::PRE:
                if (!open[b]) flag("pre-to-closed-bank", ch, b, c.time_ns);
                open[b] = false;
                last_pre[b] = c.time_ns;
                break;
            case CmdKind::WR:
            case CmdKind::RD:
                ++res.bursts;
                if (!open[b]) flag("burst-to-closed-bank", ch, b, c.time_ns);
                else if (c.time_ns - last_act[b] < t.t_rcd_ns - eps) flag("t_RCD", ch, b, c.time_ns);
                if (c.time_ns < burst_end - eps) flag("burst-overlap", ch, b, c.time_ns);
                if (have_burst && c.kind != last_dir) {
                    ++res.transitions;
                    const double need = last_dir == CmdKind::WR ? t.t_wtr_ns : t.t_rtw_ns;
                    if (c.time_ns - burst_end < need - eps) flag("phase-separation", ch, b, c.time_ns);
                }
                have_burst = true;
                last_dir = c.kind;
                burst_end = std::max(burst_end, c.time_ns + ts);
                break;
            }
        }
    }
    return res;
}

} // namespace pbr
