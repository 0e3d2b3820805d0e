#include <pbr/report.hpp>
#include <pbr/error.hpp>
#include <pbr/io.hpp>

#include <fstream>

namespace pbr {

YAML::Node num(double x) { return YAML::Node(format_double(x)); }

namespace {

YAML::Node seq(const std::vector<double>& v) {
    YAML::Node n(YAML::NodeType::Sequence);
    for (double x : v) n.push_back(num(x));
    n.SetStyle(YAML::EmitterStyle::Flow);
    return n;
}

const char* const kComponentNames[] = {"inputs", "tail", "head", "outputs"};

} // namespace

YAML::Node report_header(const ExperimentSpec& spec) {
    YAML::Node n;
    n["tool"] = kToolName;
    n["version"] = kToolVersion;
    n["command"] = spec.subcommand;
    YAML::Node flags(YAML::NodeType::Map);
    for (const auto& [k, v] : spec.flags) flags[k] = v;
    n["flags"] = flags;
    return n;
}

YAML::Node config_node(const DerivedConfig& d) {
    YAML::Node n;
    const SwitchConfig& c = d.cfg;
    YAML::Node s;
    s["N"] = c.N;
    s["F"] = c.F;
    s["W"] = c.W;
    s["R_gbps"] = num(c.R_gbps);
    s["H"] = c.H;
    s["B"] = c.B;
    s["channels_per_stack"] = c.channels_per_stack;
    s["L"] = c.L;
    s["gamma"] = c.gamma;
    s["S"] = c.S;
    s["sram_width_bits"] = c.sram_width_bits;
    s["sram_clock_ghz"] = num(c.sram_clock_ghz);
    s["hbm_bit_rate_gbps"] = num(c.hbm_bit_rate_gbps);
    s["row_size_bytes"] = c.row_size_bytes;
    n["switch"] = s;
    YAML::Node t;
    const HbmTiming& h = d.timing;
    t["burst_length"] = h.burst_length;
    t["channel_width_bits"] = h.channel_width_bits;
    t["t_faw_ns"] = num(h.t_faw_ns);
    t["t_rc_ns"] = num(h.t_rc_ns);
    t["t_rcd_ns"] = num(h.t_rcd_ns);
    t["t_rp_ns"] = num(h.t_rp_ns);
    t["t_wtr_ns"] = num(h.t_wtr_ns);
    t["t_rtw_ns"] = num(h.t_rtw_ns);
    t["refresh_overhead"] = num(h.refresh_overhead);
    n["timing"] = t;
    YAML::Node x;
    x["alpha"] = d.alpha;
    x["T"] = d.T;
    x["slice_bytes"] = d.slice_bytes;
    x["k"] = d.k;
    x["K"] = d.K;
    x["batches_per_frame"] = d.batches_per_frame;
    x["bank_groups"] = d.bank_groups;
    x["total_io_gbps"] = num(d.total_io_gbps);
    x["per_switch_io_gbps"] = num(d.per_switch_io_gbps);
    x["port_rate_gbps"] = num(d.port_rate_gbps);
    x["t_segment_ns"] = num(d.t_segment_ns);
    n["derived"] = x;
    return n;
}

YAML::Node analysis_node(const AnalysisReport& a) {
    YAML::Node n;
    n["buffer_ms"] = num(a.buffer_ms);
    n["per_switch_input_tbps"] = num(a.per_switch_input_tbps);
    n["proc_power_w"] = num(a.proc_power_w);
    n["hbm_power_w"] = num(a.hbm_power_w);
    n["oeo_power_w"] = num(a.oeo_power_w);
    n["power_w_per_switch"] = num(a.power_w_per_switch);
    n["power_kw_total"] = num(a.power_kw_total);
    n["area_mm2_per_switch"] = num(a.area_mm2_per_switch);
    n["area_mm2_total"] = num(a.area_mm2_total);
    YAML::Node s;
    s["total_bits"] = a.sram.total_bits;
    s["total_bytes"] = num(a.sram.total_bytes());
    s["total_mb"] = num(a.sram.total_mb());
    for (std::size_t c = 0; c < 4; ++c) s["component_bytes"][kComponentNames[c]] = num(a.sram.component_bytes(c));
    n["sram"] = s;
    return n;
}

YAML::Node loss_node(const LossReport& r) {
    YAML::Node n;
    n["n_trials"] = r.n_trials;
    n["network_loss_rate"] = num(r.network_loss_rate);
    n["router_loss_rate"] = num(r.router_loss_rate);
    n["avg_router_loss_rate"] = num(r.avg_router_loss_rate);
    n["total_arrivals"] = num(r.total_arrivals);
    n["total_drops"] = num(r.total_drops);
    n["trial_mean"] = num(r.trial_mean);
    n["trial_max"] = num(r.trial_max);
    n["per_switch_loss"] = seq(r.per_switch_loss);
    n["router_loss_rates"] = seq(r.router_loss_rates);
    n["trial_loss"] = seq(r.trial_loss);
    return n;
}

YAML::Node sim_node(const SimTrace& t, const TimingCheck* timing) {
    YAML::Node n;
    const SimCounters& c = t.counters;
    n["slots"] = t.slots;
    n["frames_per_phase"] = t.layout.frames_per_phase;
    n["slots_per_cycle"] = t.layout.slots_per_cycle;
    n["cycle_ns"] = num(t.layout.cycle_ns);
    n["slot_ns"] = num(t.layout.slot_ns);
    YAML::Node k;
    k["bytes_in"] = c.bytes_in;
    k["bytes_out"] = c.bytes_out;
    k["packets_departed"] = c.packets_departed;
    k["packets"] = t.departure.size();
    k["batches"] = c.batches;
    k["padded_batches"] = c.padded_batches;
    k["frames_formed"] = c.frames_formed;
    k["padded_frames"] = c.padded_frames;
    k["pad_bytes"] = c.pad_bytes;
    k["frames_written"] = c.frames_written;
    k["frames_read"] = c.frames_read;
    k["bypasses"] = c.bypasses;
    k["idle_read_turns"] = c.idle_read_turns;
    k["marked_frames"] = c.marked_frames;
    k["marked_bytes"] = c.marked_bytes;
    k["dropped_frames"] = c.dropped_frames;
    k["dropped_bytes"] = c.dropped_bytes;
    n["counters"] = k;
    YAML::Node s;
    for (std::size_t x = 0; x < 4; ++x) {
        YAML::Node e;
        e["max_bytes"] = t.max_occupancy[x];
        e["bound_bytes"] = num(t.bound.component_bytes(x));
        e["violation_slots"] = t.bound_violation_slots[x];
        s[kComponentNames[x]] = e;
    }
    s["max_total_bytes"] = t.max_total_occupancy;
    s["bound_total_bytes"] = num(t.bound.total_bytes());
    s["first_bound_violation"] = t.first_bound_violation;
    n["sram"] = s;
    n["commands"] = t.commands.size();
    if (timing) {
        YAML::Node tc;
        tc["violations"] = timing->violations.size();
        tc["activates"] = timing->activates;
        tc["bursts"] = timing->bursts;
        tc["transitions"] = timing->transitions;
        tc["max_acts_in_faw"] = timing->max_acts_in_faw;
        YAML::Node list(YAML::NodeType::Sequence);
        for (const auto& v : timing->violations) {
            YAML::Node e;
            e["rule"] = v.rule;
            e["channel"] = v.channel;
            e["bank"] = v.bank;
            e["time_ns"] = num(v.time_ns);
            list.push_back(e);
        }
        tc["first_violations"] = list;
        n["timing_check"] = tc;
    }
    return n;
}

YAML::Node mimic_node(const MimicReport& m) {
    YAML::Node n;
    n["horizon"] = m.horizon;
    n["packets"] = m.packets;
    n["undelivered"] = m.undelivered;
    n["half_point_max"] = m.half_point_max;
    n["max_delay_diff"] = m.max_delay_diff;
    n["bounded"] = m.bounded;
    n["verdict"] = m.bounded ? "bounded" : "unbounded";
    YAML::Node g;
    g["slope"] = num(m.gap.slope);
    g["tolerance"] = num(kGapSlopeTolerance);
    g["max_gap"] = num(m.gap.max_gap);
    g["min_output_ratio"] = num(m.gap.min_ratio);
    g["per_output_ratio"] = seq(m.gap.per_output_ratio);
    g["verdict"] = m.gap.pass ? "PASS" : "FAIL";
    n["throughput"] = g;
    return n;
}

std::string emit_report(const YAML::Node& report) {
    YAML::Emitter e;
    e << report;
    if (!e.good()) throw Error(ErrorKind::IoError, "io_cli", "report emit failed: " + e.GetLastError());
    return std::string(e.c_str()) + "\n";
}

void write_report(const YAML::Node& report, const std::string& path) {
    const std::string text = emit_report(report);
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) throw Error(ErrorKind::IoError, "io_cli", "cannot write " + path);
}

ExperimentSpec spec_from_report(const std::string& text) {
    try {
        const YAML::Node n = YAML::Load(text);
        ExperimentSpec s;
        s.subcommand = n["command"].as<std::string>();
        for (const auto& kv : n["flags"]) s.flags[kv.first.as<std::string>()] = kv.second.as<std::string>();
        return s;
    } catch (const YAML::Exception& e) {
        throw Error(ErrorKind::ParseError, "io_cli", std::string("report: ") + e.what());
    }
}

} // namespace pbr
