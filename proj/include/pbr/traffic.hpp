#pragma once

/// @file traffic.hpp
/// @brief Traffic matrices and the generators that produce them.

#include <pbr/seed.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pbr {

/// Dense load matrix, rows = input wavelengths, cols = outputs, loads in
/// units of one wavelength. Row capacity is 1; column capacity is rows/cols
/// (F*W for a full matrix, alpha*W for one switch's share).
class TrafficMatrix {
public:
    TrafficMatrix() = default;
    TrafficMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }
    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const std::vector<double>& data() const { return data_; }

    double column_capacity() const { return cols_ ? double(rows_) / double(cols_) : 0.0; }
    double row_sum(std::size_t r) const;
    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;
    double total() const;

    /// Row sums <= 1 and column sums <= column_capacity(), within tol.
    bool is_admissible(double tol = 1e-9) const;

    /// Largest factor f such that f*this is admissible; 0 for an empty matrix.
    double saturation_scale() const;
    void scale(double f);

    bool operator==(const TrafficMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct TmDims {
    std::size_t rows = 0;
    std::size_t cols = 0;
};

/// Log-normal flow rates in Mb/s.
struct FlowRateParams {
    double mu = -4.2;
    double sigma = 2.06;
};

double sample_flow_rate(Rng& rng, const FlowRateParams& p = {});

struct SyntheticTmParams {
    double rho = 1.0;                 ///< per-wavelength load limit
    double zipf_s = 1.0;              ///< output skew exponent
    double R_gbps = 40.0;             ///< converts Mb/s flows to wavelength units
    FlowRateParams flow;
    double rate_floor = 1e-9;         ///< flows below this (wavelength units) are redrawn
    unsigned max_failures = 30;       ///< consecutive rejected flows that end the fill
};

/// Statistics of one balls-and-bins fill.
struct FillStats {
    std::uint64_t flows_inserted = 0;
    std::uint64_t flows_rejected = 0;
};

/// Zipf weights over cols outputs: P(k) proportional to 1/k^s, k = 1..cols.
std::vector<double> zipf_weights(std::size_t cols, double s);

/// Adds flows into tm until max_failures consecutive draws do not fit.
/// row_cap and col_cap are the capacities available to the new flows; load
/// already present in tm is not counted against them.
FillStats fill_balls_and_bins(TrafficMatrix& tm, const std::vector<double>& row_cap,
                              const std::vector<double>& col_cap, const SyntheticTmParams& p, Rng& rng);

/// Synthetic admissible TM: row cap rho, output k cap (rows/cols)*rho/k^s.
TrafficMatrix build_synthetic_tm(const SyntheticTmParams& p, TmDims dims, std::uint64_t seed,
                                 FillStats* stats = nullptr);

/// Doubles rows then columns, giving alpha of each value to the upper (left)
/// child, up to the largest n*2^i within the target. Rescales to saturation
/// when rescale is set.
TrafficMatrix resize_tm(const TrafficMatrix& tm, double alpha_split, std::size_t target_rows,
                        std::size_t target_cols, bool rescale = true);

struct FlowRecord {
    std::string src_key;
    std::string dst_key;
    double rate_mbps = 0.0;
};

/// 128-bit digest of a key under a named hash ("md5" or "sha256", the latter
/// truncated). Returns the first 8 digest bytes read big-endian.
std::uint64_t stable_hash64(const std::string& key, const std::string& hash_name);

/// Hashes sources to rows and destinations to columns, then rescales so the
/// most loaded row or column is exactly saturated.
TrafficMatrix tm_from_flows(const std::vector<FlowRecord>& flows, TmDims dims,
                            const std::string& hash_name = "md5");

enum class LbScheme { Ecmp, RoundRobin, Adaptive };

std::string to_string(LbScheme s);
LbScheme lb_scheme_from_string(const std::string& s);

struct DcWorkloadParams {
    std::uint32_t n_dcs = 8;
    std::uint32_t m_gpus = 512;
    double alpha_dc = 1.0;
    double beta_comm = 0.2;
    double max_wavelength_load = 0.95;
    LbScheme lb_scheme = LbScheme::Ecmp;
    std::uint32_t n_time_samples = 10;
    std::uint64_t seed = 1;
    double wan_zipf_s = 1.0;
    FlowRateParams flow;
    double rate_floor = 1e-9;
};

/// Port geometry needed by the workload generators.
struct PortGeometry {
    std::uint32_t N = 16;
    std::uint32_t F = 64;
    std::uint32_t W = 16;
    double R_gbps = 40.0;

    std::size_t rows() const { return std::size_t(N) * F * W; }
    std::size_t row_index(std::uint32_t port, std::uint32_t fiber, std::uint32_t lambda) const {
        return (std::size_t(port) * F + fiber) * W + lambda;
    }
};

/// Cross-DC pipeline workload. Random choices are keyed by purpose so that
/// two generators with the same seed and different schemes share placement,
/// communication draws, directions and WAN streams.
class DcWorkloadGenerator {
public:
    DcWorkloadGenerator(const DcWorkloadParams& params, const PortGeometry& geo);

    /// Port of each pipeline stage.
    const std::vector<std::uint32_t>& placement() const { return placement_; }
    bool communicates(std::uint32_t sample) const;
    bool forward(std::uint32_t sample) const;

    /// DC-only matrix of one sample after the per-wavelength cap.
    TrafficMatrix dc_traffic(std::uint32_t sample) const;

    /// Full matrix of one sample: DC traffic plus WAN fill on residual capacity.
    TrafficMatrix sample_tm(std::uint32_t sample, FillStats* stats = nullptr) const;

    std::vector<TrafficMatrix> generate() const;

private:
    DcWorkloadParams p_;
    PortGeometry geo_;
    std::vector<std::uint32_t> placement_;
};

inline std::vector<TrafficMatrix> gen_dc_workload(const DcWorkloadParams& params, const PortGeometry& geo) {
    return DcWorkloadGenerator(params, geo).generate();
}

} // namespace pbr
