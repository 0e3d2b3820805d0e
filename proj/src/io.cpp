#include <pbr/io.hpp>
#include <pbr/error.hpp>

#include <boost/algorithm/string/trim.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace pbr {
namespace {

namespace fs = std::filesystem;

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::IoError, "io_cli", "cannot open " + path);
    return f;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::IoError, "io_cli", "cannot write " + path);
    return f;
}

[[noreturn]] void parse_error(const std::string& name, std::size_t line, std::size_t col, const std::string& what) {
    throw Error(ErrorKind::ParseError, "io_cli",
                name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream s(line);
    while (std::getline(s, cell, ',')) out.push_back(boost::algorithm::trim_copy(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_number(const std::string& s, double& x) {
    const char* b = s.data();
    const char* e = b + s.size();
    if (b != e && *b == '+') ++b;
    auto r = std::from_chars(b, e, x);
    return r.ec == std::errc() && r.ptr == e && b != e;
}

template <class Int>
bool parse_int(const std::string& s, Int& x) {
    auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    return r.ec == std::errc() && r.ptr == s.data() + s.size() && !s.empty();
}

/// Lines with trailing CR removed; blank lines skipped but counted.
template <class F>
void for_each_line(std::istream& in, F&& f) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (boost::algorithm::trim_copy(line).empty()) continue;
        f(n, line);
    }
}

} // namespace

std::string format_double(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

TrafficMatrix parse_tm(std::istream& in, const std::string& name) {
    std::vector<double> vals;
    std::size_t cols = 0, rows = 0;
    for_each_line(in, [&](std::size_t ln, const std::string& line) {
        const auto cells = split_csv(line);
        if (rows == 0) cols = cells.size();
        else if (cells.size() != cols)
            parse_error(name, ln, std::min(cells.size(), cols) + 1,
                        "row has " + std::to_string(cells.size()) + " columns, expected " + std::to_string(cols));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            double x;
            if (!parse_number(cells[c], x)) parse_error(name, ln, c + 1, "not a number: '" + cells[c] + "'");
            if (x < 0)
                throw Error(ErrorKind::NegativeLoad, "io_cli",
                            name + ":" + std::to_string(ln) + ":" + std::to_string(c + 1) + ": load " + cells[c]);
            vals.push_back(x);
        }
        ++rows;
    });
    if (rows == 0 || cols == 0) parse_error(name, 1, 1, "empty matrix");
    TrafficMatrix tm(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) tm.at(r, c) = vals[r * cols + c];
    return tm;
}

TrafficMatrix load_tm(const std::string& path) {
    auto f = open_in(path);
    return parse_tm(f, path);
}

std::string format_tm(const TrafficMatrix& tm) {
    std::string s;
    for (std::size_t r = 0; r < tm.rows(); ++r) {
        for (std::size_t c = 0; c < tm.cols(); ++c) {
            if (c) s += ',';
            s += format_double(tm.at(r, c));
        }
        s += '\n';
    }
    return s;
}

void save_tm(const TrafficMatrix& tm, const std::string& path) {
    auto f = open_out(path);
    f << format_tm(tm);
}

std::vector<TrafficMatrix> load_tm_set(const std::string& path) {
    if (!fs::is_directory(path)) return {load_tm(path)};
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(path))
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(ErrorKind::EmptyInput, "io_cli", "no .csv files in " + path);
    std::vector<TrafficMatrix> out;
    for (const auto& p : files) out.push_back(load_tm(p));
    return out;
}

std::vector<FlowRecord> parse_flows(std::istream& in, const std::string& name) {
    std::vector<FlowRecord> out;
    bool first = true;
    for_each_line(in, [&](std::size_t ln, const std::string& line) {
        const auto cells = split_csv(line);
        if (cells.size() != 3) parse_error(name, ln, 1, "expected src_key,dst_key,rate_mbps");
        double rate;
        if (!parse_number(cells[2], rate)) {
            if (first) {
                first = false;
                return;
            }
            parse_error(name, ln, 3, "not a number: '" + cells[2] + "'");
        }
        first = false;
        if (rate < 0) throw Error(ErrorKind::NegativeLoad, "io_cli", name + ":" + std::to_string(ln) + ":3: rate " + cells[2]);
        out.push_back({cells[0], cells[1], rate});
    });
    return out;
}

std::vector<FlowRecord> load_flows(const std::string& path) {
    auto f = open_in(path);
    return parse_flows(f, path);
}

Workload parse_workload(std::istream& in, const std::string& name) {
    Workload w;
    bool first = true;
    for_each_line(in, [&](std::size_t ln, const std::string& line) {
        const auto c = split_csv(line);
        if (c.size() != 4) parse_error(name, ln, 1, "expected arrival_slot,input,output,size_bytes");
        Packet p;
        if (!parse_int(c[0], p.arrival_slot)) {
            if (first) {
                first = false;
                return;
            }
            parse_error(name, ln, 1, "bad arrival slot '" + c[0] + "'");
        }
        first = false;
        std::uint32_t in_port, out_port;
        if (!parse_int(c[1], in_port) || in_port == 0) parse_error(name, ln, 2, "bad input port '" + c[1] + "'");
        if (!parse_int(c[2], out_port) || out_port == 0) parse_error(name, ln, 3, "bad output port '" + c[2] + "'");
        if (!parse_int(c[3], p.size)) parse_error(name, ln, 4, "bad size '" + c[3] + "'");
        p.input = in_port - 1;
        p.output = out_port - 1;
        p.id = w.size();
        w.push_back(p);
    });
    return w;
}

Workload load_workload(const std::string& path) {
    auto f = open_in(path);
    return parse_workload(f, path);
}

void save_workload(const Workload& w, const std::string& path) {
    auto f = open_out(path);
    f << "arrival_slot,input,output,size_bytes\n";
    for (const Packet& p : w) f << p.arrival_slot << ',' << p.input + 1 << ',' << p.output + 1 << ',' << p.size << '\n';
}

void write_command_trace(const std::vector<HbmCommand>& trace, std::ostream& out) {
    out << "time_ns,kind,channel,bank,frame_seq,segment\n";
    for (const HbmCommand& c : trace)
        out << format_double(c.time_ns) << ',' << to_string(c.kind) << ',' << c.channel << ',' << c.bank << ','
            << c.frame_seq << ',' << c.segment << '\n';
}

void save_command_trace(const std::vector<HbmCommand>& trace, const std::string& path) {
    auto f = open_out(path);
    write_command_trace(trace, f);
}

namespace {

namespace pt = boost::property_tree;

using Setter = std::function<void(ConfigFile&, const std::string&)>;

template <class T>
Setter set_field(T SwitchConfig::*m) {
    return [m](ConfigFile& c, const std::string& v) { c.cfg.*m = boost::lexical_cast<T>(v); };
}
template <class T>
Setter set_timing(T HbmTiming::*m) {
    return [m](ConfigFile& c, const std::string& v) { c.timing.*m = boost::lexical_cast<T>(v); };
}
template <class T>
Setter set_analysis(T AnalysisParams::*m) {
    return [m](ConfigFile& c, const std::string& v) { c.analysis.*m = boost::lexical_cast<T>(v); };
}
template <class T>
Setter set_sim(T SimOptions::*m) {
    return [m](ConfigFile& c, const std::string& v) {
        if constexpr (std::is_same_v<T, bool>) {
            if (v == "true" || v == "1" || v == "yes") c.sim.*m = true;
            else if (v == "false" || v == "0" || v == "no") c.sim.*m = false;
            else throw boost::bad_lexical_cast();
        } else {
            c.sim.*m = boost::lexical_cast<T>(v);
        }
    };
}

const std::map<std::string, Setter>& config_keys() {
    static const std::map<std::string, Setter> keys = {
        {"switch.N", set_field(&SwitchConfig::N)},
        {"switch.F", set_field(&SwitchConfig::F)},
        {"switch.W", set_field(&SwitchConfig::W)},
        {"switch.R_gbps", set_field(&SwitchConfig::R_gbps)},
        {"switch.H", set_field(&SwitchConfig::H)},
        {"switch.B", set_field(&SwitchConfig::B)},
        {"switch.channels_per_stack", set_field(&SwitchConfig::channels_per_stack)},
        {"switch.L", set_field(&SwitchConfig::L)},
        {"switch.gamma", set_field(&SwitchConfig::gamma)},
        {"switch.S", set_field(&SwitchConfig::S)},
        {"switch.sram_width_bits", set_field(&SwitchConfig::sram_width_bits)},
        {"switch.sram_clock_ghz", set_field(&SwitchConfig::sram_clock_ghz)},
        {"switch.hbm_bit_rate_gbps", set_field(&SwitchConfig::hbm_bit_rate_gbps)},
        {"switch.row_size_bytes", set_field(&SwitchConfig::row_size_bytes)},
        {"timing.burst_length", set_timing(&HbmTiming::burst_length)},
        {"timing.channel_width_bits", set_timing(&HbmTiming::channel_width_bits)},
        {"timing.t_faw_ns", set_timing(&HbmTiming::t_faw_ns)},
        {"timing.t_rc_ns", set_timing(&HbmTiming::t_rc_ns)},
        {"timing.t_rcd_ns", set_timing(&HbmTiming::t_rcd_ns)},
        {"timing.t_rp_ns", set_timing(&HbmTiming::t_rp_ns)},
        {"timing.t_wtr_ns", set_timing(&HbmTiming::t_wtr_ns)},
        {"timing.t_rtw_ns", set_timing(&HbmTiming::t_rtw_ns)},
        {"timing.refresh_overhead", set_timing(&HbmTiming::refresh_overhead)},
        {"analysis.stack_capacity_gb", set_analysis(&AnalysisParams::stack_capacity_gb)},
        {"analysis.stack_power_w", set_analysis(&AnalysisParams::stack_power_w)},
        {"analysis.oeo_pj_per_bit", set_analysis(&AnalysisParams::oeo_pj_per_bit)},
        {"analysis.proc_anchor_tbps", set_analysis(&AnalysisParams::proc_anchor_tbps)},
        {"analysis.proc_anchor_w", set_analysis(&AnalysisParams::proc_anchor_w)},
        {"analysis.die_area_mm2", set_analysis(&AnalysisParams::die_area_mm2)},
        {"analysis.stack_edge_mm", set_analysis(&AnalysisParams::stack_edge_mm)},
        {"sim.slots", set_sim(&SimOptions::slots)},
        {"sim.padding_timeout", set_sim(&SimOptions::padding_timeout)},
        {"sim.bypass", set_sim(&SimOptions::bypass)},
        {"sim.speedup_n", set_sim(&SimOptions::speedup_n)},
        {"sim.frames_per_phase", set_sim(&SimOptions::frames_per_phase)},
        {"sim.allow_straddle", set_sim(&SimOptions::allow_straddle)},
        {"sim.marked_min_age", set_sim(&SimOptions::marked_min_age)},
        {"sim.hbm_capacity_frames", set_sim(&SimOptions::hbm_capacity_frames)},
        {"sim.assert_bounds", set_sim(&SimOptions::assert_bounds)},
    };
    return keys;
}

} // namespace

ConfigFile parse_config(std::istream& in, const std::string& name) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorKind::ParseError, "io_cli", name + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    ConfigFile c;
    const auto preset = tree.get_optional<std::string>("switch.preset");
    if (preset) {
        if (*preset == "desk") {
            c.cfg = desk_config();
            c.timing = desk_timing();
            c.sim.frames_per_phase = 1;
        } else if (*preset != "reference") {
            throw Error(ErrorKind::InvalidConfig, "io_cli", name + ": unknown preset '" + *preset + "'");
        }
    }
    const auto& keys = config_keys();
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw Error(ErrorKind::ParseError, "io_cli", name + ": key '" + section + "' outside a section");
        for (const auto& [key, val] : body) {
            const std::string full = section + "." + key;
            if (full == "switch.preset") continue;
            auto it = keys.find(full);
            if (it == keys.end()) throw Error(ErrorKind::InvalidConfig, "io_cli", name + ": unknown key '" + full + "'");
            try {
                it->second(c, boost::algorithm::trim_copy(val.data()));
            } catch (const boost::bad_lexical_cast&) {
                throw Error(ErrorKind::ParseError, "io_cli", name + ": bad value for '" + full + "': " + val.data());
            }
        }
    }
    return c;
}

ConfigFile load_config(const std::string& path) {
    auto f = open_in(path);
    return parse_config(f, path);
}

} // namespace pbr
