#pragma once

/// @file oracle.hpp
/// @brief Ideal FIFO output-queued shared-memory switch and the comparators
/// that measure how closely the HBM switch follows it.

#include <pbr/config.hpp>
#include <pbr/hbm_sim.hpp>
#include <pbr/workload.hpp>

#include <cstdint>
#include <vector>

namespace pbr {

struct OracleTrace {
    std::vector<std::int64_t> departure;   ///< slot after the last byte leaves, per packet
};

/// Every packet joins its output queue on arrival; each output sends
/// slice_bytes per slot in (arrival, workload order). Byte-level timing:
/// a packet starts at max(previous end, arrival * P).
OracleTrace run_oracle(const Workload& w, const DerivedConfig& d);

/// Running worst delay difference M(x): over packets whose ideal departure o
/// is at most x, the larger of h - o for departed packets (h <= x) and x - o
/// for packets still inside the switch at x.
std::int64_t mimic_metric(const std::vector<std::int64_t>& oracle, const std::vector<std::int64_t>& hbm,
                          std::int64_t x);

struct GapReport {
    std::vector<double> series;            ///< B(t) in slices, sampled every stride slots
    std::uint32_t stride = 1;
    double slope = 0.0;                    ///< least squares over the final half, slices per slot
    double max_gap = 0.0;
    std::vector<double> per_output_ratio;  ///< departed / offered bytes; 1 for idle outputs
    double min_ratio = 1.0;
    bool pass = false;                     ///< slope < slope_tolerance
};

inline constexpr double kGapSlopeTolerance = 1e-3;

/// B(t) = (D_SM(t) - D_HBM(t)) / P from cumulative departed bytes up to slot horizon.
GapReport throughput_check(const Workload& w, const std::vector<std::int64_t>& oracle,
                           const std::vector<std::int64_t>& hbm, const DerivedConfig& d, std::int64_t horizon,
                           std::uint32_t stride = 1);

struct MimicReport {
    std::int64_t horizon = 0;
    std::int64_t half_point_max = 0;       ///< M(horizon / 2)
    std::int64_t max_delay_diff = 0;       ///< M(horizon)
    bool bounded = false;                  ///< max_delay_diff <= half_point_max
    std::uint64_t packets = 0;
    std::uint64_t undelivered = 0;         ///< packets still inside the HBM switch at the horizon
    GapReport gap;
    SimTrace sim;
    OracleTrace oracle;
};

/// Compares two departure vectors for the same workload. Throws WorkloadMismatch
/// when their lengths differ from the workload.
MimicReport compare_traces(const Workload& w, const DerivedConfig& d, const OracleTrace& oracle, SimTrace sim,
                           std::uint32_t gap_stride = 1);

/// Runs both switches on w and compares them.
MimicReport compare_mimic(const Workload& w, const DerivedConfig& d, const SimOptions& opt,
                          std::uint32_t gap_stride = 1);

} // namespace pbr
