#include <pbr/sps.hpp>
#include <pbr/error.hpp>

#include <algorithm>
#include <numeric>

#include <boost/random/uniform_int_distribution.hpp>

namespace pbr {
namespace {

void check_geometry(const SplitGeometry& g) {
    if (g.N == 0 || g.F == 0 || g.W == 0 || g.H == 0 || g.F % g.H != 0)
        throw Error(ErrorKind::InvalidConfig, "sps_model", "alpha = F/H must be a positive integer");
}

} // namespace

FiberAssignment make_assignment(const SplitGeometry& g, std::uint64_t seed) {
    check_geometry(g);
    FiberAssignment a{g.N, g.F, g.H, std::vector<std::uint32_t>(std::size_t(g.N) * g.F)};
    Rng rng = make_rng(seed, "fiber-assignment");
    std::vector<std::uint32_t> perm(g.F);
    const std::uint32_t alpha = g.alpha();
    for (std::uint32_t i = 0; i < g.N; ++i) {
        std::iota(perm.begin(), perm.end(), 0u);
        for (std::uint32_t x = g.F - 1; x > 0; --x) {
            boost::random::uniform_int_distribution<std::uint32_t> pick(0, x);
            std::swap(perm[x], perm[pick(rng)]);
        }
        for (std::uint32_t pos = 0; pos < g.F; ++pos) a.switch_of[std::size_t(i) * g.F + perm[pos]] = pos / alpha;
    }
    return a;
}

FiberAssignment make_first_fiber_assignment(const SplitGeometry& g) {
    check_geometry(g);
    FiberAssignment a{g.N, g.F, g.H, std::vector<std::uint32_t>(std::size_t(g.N) * g.F)};
    for (std::uint32_t i = 0; i < g.N; ++i)
        for (std::uint32_t f = 0; f < g.F; ++f) a.switch_of[std::size_t(i) * g.F + f] = f / g.alpha();
    return a;
}

std::vector<TrafficMatrix> split_tm(const TrafficMatrix& tm, const FiberAssignment& a, const SplitGeometry& g) {
    check_geometry(g);
    if (tm.rows() != g.rows() || tm.cols() != g.N)
        throw Error(ErrorKind::DimensionMismatch, "sps_model",
                    "matrix is " + std::to_string(tm.rows()) + "x" + std::to_string(tm.cols()) + ", expected " +
                        std::to_string(g.rows()) + "x" + std::to_string(g.N));
    if (a.N != g.N || a.F != g.F || a.H != g.H)
        throw Error(ErrorKind::DimensionMismatch, "sps_model", "assignment does not match geometry");

    const std::size_t sub_rows = std::size_t(g.N) * g.alpha() * g.W;
    std::vector<TrafficMatrix> subs(g.H, TrafficMatrix(sub_rows, g.N));
    std::vector<std::size_t> next(g.H, 0);
    for (std::uint32_t i = 0; i < g.N; ++i)
        for (std::uint32_t f = 0; f < g.F; ++f) {
            const std::uint32_t h = a.at(i, f);
            for (std::uint32_t l = 0; l < g.W; ++l) {
                const double* src = tm.row((std::size_t(i) * g.F + f) * g.W + l);
                std::copy(src, src + g.N, subs[h].row(next[h]++));
            }
        }
    return subs;
}

FluidLoss fluid_loss(const TrafficMatrix& sub_tm, double capacity) {
    const double cap = capacity >= 0.0 ? capacity : sub_tm.column_capacity();
    FluidLoss out;
    const auto cols = sub_tm.col_sums();
    out.drops.resize(cols.size(), 0.0);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out.arrivals += cols[c];
        const double excess = cols[c] - cap;
        if (excess > cap * kFluidExcessTolerance) out.drops[c] = excess;
        out.dropped += out.drops[c];
    }
    return out;
}

std::string to_string(EvalMode m) {
    switch (m) {
    case EvalMode::FiberSplit: return "fiber-split";
    case EvalMode::FlowRandom: return "flow-random";
    case EvalMode::FirstFiber: return "first-fiber";
    }
    return "?";
}

EvalMode eval_mode_from_string(const std::string& s) {
    if (s == "fiber-split") return EvalMode::FiberSplit;
    if (s == "flow-random") return EvalMode::FlowRandom;
    if (s == "first-fiber") return EvalMode::FirstFiber;
    throw Error(ErrorKind::InvalidConfig, "sps_model", "unknown mode '" + s + "'");
}

std::string to_string(ScaleMode m) {
    switch (m) {
    case ScaleMode::None: return "none";
    case ScaleMode::Global: return "global";
    case ScaleMode::PerRouter: return "per-router";
    }
    return "?";
}

ScaleMode scale_mode_from_string(const std::string& s) {
    if (s == "none") return ScaleMode::None;
    if (s == "global") return ScaleMode::Global;
    if (s == "per-router") return ScaleMode::PerRouter;
    throw Error(ErrorKind::InvalidConfig, "sps_model", "unknown scaling '" + s + "'");
}

namespace {

struct SwitchTally {
    std::vector<double> arrivals;
    std::vector<double> drops;
};

/// Per-switch arrivals and drops of one router under one trial.
SwitchTally fiber_split_trial(const TrafficMatrix& tm, const FiberAssignment& a, const SplitGeometry& g) {
    SwitchTally t{std::vector<double>(g.H, 0.0), std::vector<double>(g.H, 0.0)};
    const auto subs = split_tm(tm, a, g);
    for (std::uint32_t h = 0; h < g.H; ++h) {
        const FluidLoss l = fluid_loss(subs[h]);
        t.arrivals[h] = l.arrivals;
        t.drops[h] = l.dropped;
    }
    return t;
}

SwitchTally flow_random_trial(const TrafficMatrix& tm, std::uint32_t H, Rng& rng) {
    SwitchTally t{std::vector<double>(H, 0.0), std::vector<double>(H, 0.0)};
    boost::random::uniform_int_distribution<std::uint32_t> pick(0, H - 1);
    std::vector<double> col(std::size_t(H) * tm.cols(), 0.0);
    for (std::size_t r = 0; r < tm.rows(); ++r)
        for (std::size_t c = 0; c < tm.cols(); ++c) {
            const double v = tm.at(r, c);
            if (v <= 0.0) continue;
            col[std::size_t(pick(rng)) * tm.cols() + c] += v;
        }
    const double cap = tm.column_capacity() / H;
    for (std::uint32_t h = 0; h < H; ++h)
        for (std::size_t c = 0; c < tm.cols(); ++c) {
            const double s = col[std::size_t(h) * tm.cols() + c];
            t.arrivals[h] += s;
            if (s - cap > cap * kFluidExcessTolerance) t.drops[h] += s - cap;
        }
    return t;
}

} // namespace

LossReport evaluate(const std::vector<TrafficMatrix>& input, const EvalParams& p) {
    if (input.empty()) throw Error(ErrorKind::EmptyInput, "sps_model", "no traffic matrices");
    if (p.n_trials == 0) throw Error(ErrorKind::InvalidConfig, "sps_model", "n_trials must be positive");
    check_geometry(p.geo);
    const auto& g = p.geo;

    std::vector<TrafficMatrix> tms = input;
    if (p.scaling == ScaleMode::Global) {
        double f = 0.0;
        bool first = true;
        for (const auto& tm : tms) {
            const double s = tm.saturation_scale();
            if (s > 0.0 && (first || s < f)) f = s, first = false;
        }
        if (!first)
            for (auto& tm : tms) tm.scale(f);
    } else if (p.scaling == ScaleMode::PerRouter) {
        for (auto& tm : tms) {
            const double s = tm.saturation_scale();
            if (s > 0.0) tm.scale(s);
        }
    }
    if (p.mode != EvalMode::FlowRandom)
        for (const auto& tm : tms)
            if (tm.rows() != g.rows() || tm.cols() != g.N)
                throw Error(ErrorKind::DimensionMismatch, "sps_model", "matrix does not have N*F*W rows and N columns");

    const std::size_t n_routers = tms.size();
    std::vector<double> sw_arr(g.H, 0.0), sw_drop(g.H, 0.0);
    std::vector<double> r_arr(n_routers, 0.0), r_drop(n_routers, 0.0);
    LossReport rep;
    rep.n_trials = p.n_trials;
    rep.trial_loss.resize(p.n_trials, 0.0);
    const FiberAssignment first_fiber =
        p.mode == EvalMode::FirstFiber ? make_first_fiber_assignment(g) : FiberAssignment{};

    for (std::uint32_t trial = 0; trial < p.n_trials; ++trial) {
        double t_arr = 0.0, t_drop = 0.0;
        for (std::size_t r = 0; r < n_routers; ++r) {
            const std::uint64_t stream = std::uint64_t(trial) * n_routers + r;
            SwitchTally tally;
            switch (p.mode) {
            case EvalMode::FiberSplit:
                tally = fiber_split_trial(tms[r], make_assignment(g, derive_seed(p.seed, "trial", stream)), g);
                break;
            case EvalMode::FirstFiber:
                tally = fiber_split_trial(tms[r], first_fiber, g);
                break;
            case EvalMode::FlowRandom: {
                Rng rng = make_rng(p.seed, "flow-random", stream);
                tally = flow_random_trial(tms[r], g.H, rng);
                break;
            }
            }
            for (std::uint32_t h = 0; h < g.H; ++h) {
                sw_arr[h] += tally.arrivals[h];
                sw_drop[h] += tally.drops[h];
                r_arr[r] += tally.arrivals[h];
                r_drop[r] += tally.drops[h];
                t_arr += tally.arrivals[h];
                t_drop += tally.drops[h];
            }
        }
        rep.trial_loss[trial] = t_arr > 0.0 ? t_drop / t_arr : 0.0;
        rep.total_arrivals += t_arr;
        rep.total_drops += t_drop;
    }

    rep.per_switch_loss.resize(g.H);
    for (std::uint32_t h = 0; h < g.H; ++h) rep.per_switch_loss[h] = sw_arr[h] > 0.0 ? sw_drop[h] / sw_arr[h] : 0.0;
    rep.router_loss_rates.resize(n_routers);
    double sum = 0.0;
    for (std::size_t r = 0; r < n_routers; ++r) {
        rep.router_loss_rates[r] = r_arr[r] > 0.0 ? r_drop[r] / r_arr[r] : 0.0;
        sum += rep.router_loss_rates[r];
    }
    rep.router_loss_rate = rep.router_loss_rates[0];
    rep.avg_router_loss_rate = sum / double(n_routers);
    rep.network_loss_rate = rep.total_arrivals > 0.0 ? rep.total_drops / rep.total_arrivals : 0.0;
    double tsum = 0.0;
    for (double x : rep.trial_loss) {
        tsum += x;
        rep.trial_max = std::max(rep.trial_max, x);
    }
    rep.trial_mean = tsum / double(p.n_trials);
    return rep;
}

} // namespace pbr
