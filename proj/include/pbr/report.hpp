#pragma once

/// @file report.hpp
/// @brief Structured YAML reports with tool version, command flags and config echo.

#include <pbr/config.hpp>
#include <pbr/hbm_sim.hpp>
#include <pbr/oracle.hpp>
#include <pbr/sps.hpp>

#include <yaml-cpp/yaml.h>

#include <map>
#include <string>

namespace pbr {

inline constexpr const char* kToolName = "pbr";
inline constexpr const char* kToolVersion = "1.0.0";

/// One CLI invocation: the subcommand and every flag it was given, as text.
struct ExperimentSpec {
    std::string subcommand;
    std::map<std::string, std::string> flags;

    bool operator==(const ExperimentSpec&) const = default;
};

/// Report skeleton: tool, version and the experiment spec.
YAML::Node report_header(const ExperimentSpec& spec);

/// Doubles are stored as shortest round-trip text.
YAML::Node num(double x);

YAML::Node config_node(const DerivedConfig& d);
YAML::Node analysis_node(const AnalysisReport& a);
YAML::Node loss_node(const LossReport& r);
YAML::Node sim_node(const SimTrace& t, const TimingCheck* timing = nullptr);
YAML::Node mimic_node(const MimicReport& m);

/// Deterministic block-style text.
std::string emit_report(const YAML::Node& report);
void write_report(const YAML::Node& report, const std::string& path);

/// Recovers the experiment spec from emitted report text. Throws ParseError.
ExperimentSpec spec_from_report(const std::string& text);

} // namespace pbr
