#pragma once

/// @file sps.hpp
/// @brief Fluid loss model of the split-parallel switch.

#include <pbr/traffic.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace pbr {

/// Geometry of the split: N inputs of F fibers, W wavelengths each, H switches.
struct SplitGeometry {
    std::uint32_t N = 16;
    std::uint32_t F = 64;
    std::uint32_t W = 16;
    std::uint32_t H = 16;

    std::uint32_t alpha() const { return F / H; }
    std::size_t rows() const { return std::size_t(N) * F * W; }
};

/// switch_of[input * F + fiber] is the switch that fiber feeds.
struct FiberAssignment {
    std::uint32_t N = 0;
    std::uint32_t F = 0;
    std::uint32_t H = 0;
    std::vector<std::uint32_t> switch_of;

    std::uint32_t at(std::uint32_t input, std::uint32_t fiber) const { return switch_of[std::size_t(input) * F + fiber]; }
    bool operator==(const FiberAssignment&) const = default;
};

/// Seeded uniform permutation of each input's fibers, cut into H groups of alpha.
FiberAssignment make_assignment(const SplitGeometry& g, std::uint64_t seed);

/// Fibers [h*alpha, (h+1)*alpha) of every input go to switch h.
FiberAssignment make_first_fiber_assignment(const SplitGeometry& g);

/// Sub-matrix of switch h keeps rows ordered by input, fiber index, wavelength.
std::vector<TrafficMatrix> split_tm(const TrafficMatrix& tm, const FiberAssignment& a, const SplitGeometry& g);

struct FluidLoss {
    std::vector<double> drops;     ///< per output
    double arrivals = 0.0;
    double dropped = 0.0;
    double loss_rate() const { return arrivals > 0.0 ? dropped / arrivals : 0.0; }
};

/// Relative excess below which a column is treated as exactly at capacity.
inline constexpr double kFluidExcessTolerance = 1e-12;

/// drop_j = max(0, colsum_j - capacity); capacity defaults to rows/cols.
FluidLoss fluid_loss(const TrafficMatrix& sub_tm, double capacity = -1.0);

enum class EvalMode { FiberSplit, FlowRandom, FirstFiber };
enum class ScaleMode { None, Global, PerRouter };

std::string to_string(EvalMode m);
EvalMode eval_mode_from_string(const std::string& s);
std::string to_string(ScaleMode m);
ScaleMode scale_mode_from_string(const std::string& s);

struct EvalParams {
    SplitGeometry geo;
    std::uint32_t n_trials = 100;
    std::uint64_t seed = 1;
    EvalMode mode = EvalMode::FiberSplit;
    ScaleMode scaling = ScaleMode::None;
};

struct LossReport {
    std::vector<double> per_switch_loss;      ///< pooled over routers and trials
    std::vector<double> router_loss_rates;    ///< per router, pooled over trials
    double router_loss_rate = 0.0;            ///< first router
    double avg_router_loss_rate = 0.0;
    double network_loss_rate = 0.0;
    double total_arrivals = 0.0;              ///< summed over trials
    double total_drops = 0.0;
    std::vector<double> trial_loss;           ///< network loss of each trial
    double trial_mean = 0.0;
    double trial_max = 0.0;
    std::uint32_t n_trials = 0;
};

/// Monte-Carlo evaluation. In FiberSplit mode every router matrix must have
/// N*F*W rows and N columns; in FlowRandom mode matrices are router-level and
/// each cell goes to a uniform switch whose output capacity is 1/H of the
/// column capacity; FirstFiber uses the fixed first-fiber split.
LossReport evaluate(const std::vector<TrafficMatrix>& tms, const EvalParams& p);

} // namespace pbr
