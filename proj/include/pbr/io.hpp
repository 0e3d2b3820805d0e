#pragma once

/// @file io.hpp
/// @brief File formats: traffic matrices, flow records, workloads, command
/// traces and INI configuration files.

#include <pbr/config.hpp>
#include <pbr/hbm_sim.hpp>
#include <pbr/hbm_timing.hpp>
#include <pbr/traffic.hpp>
#include <pbr/workload.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace pbr {

/// Headerless dense CSV, one row per input wavelength. Throws ParseError
/// (with line and column) or NegativeLoad.
TrafficMatrix parse_tm(std::istream& in, const std::string& name = "<stream>");
TrafficMatrix load_tm(const std::string& path);
void save_tm(const TrafficMatrix& tm, const std::string& path);
std::string format_tm(const TrafficMatrix& tm);

/// A single file, or every *.csv inside a directory in name order.
std::vector<TrafficMatrix> load_tm_set(const std::string& path);

/// CSV `src_key,dst_key,rate_mbps`; a first line whose rate field is not
/// numeric is taken as a header.
std::vector<FlowRecord> parse_flows(std::istream& in, const std::string& name = "<stream>");
std::vector<FlowRecord> load_flows(const std::string& path);

/// CSV `arrival_slot,input,output,size_bytes`, ports 1-based, optional header.
Workload parse_workload(std::istream& in, const std::string& name = "<stream>");
Workload load_workload(const std::string& path);
void save_workload(const Workload& w, const std::string& path);

/// CSV `time_ns,kind,channel,bank,frame_seq,segment`.
void write_command_trace(const std::vector<HbmCommand>& trace, std::ostream& out);
void save_command_trace(const std::vector<HbmCommand>& trace, const std::string& path);

/// Contents of an INI configuration file. Section [switch] may name a
/// `preset` (reference or desk) that the remaining keys override.
struct ConfigFile {
    SwitchConfig cfg = reference_config();
    HbmTiming timing = reference_timing();
    AnalysisParams analysis;
    SimOptions sim;
};

ConfigFile parse_config(std::istream& in, const std::string& name = "<stream>");
ConfigFile load_config(const std::string& path);

/// Shortest text that reads back to the same double.
std::string format_double(double x);

} // namespace pbr
