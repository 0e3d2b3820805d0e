#include <pbr/oracle.hpp>
#include <pbr/error.hpp>

#include <algorithm>
#include <numeric>

namespace pbr {

OracleTrace run_oracle(const Workload& w, const DerivedConfig& d) {
    const std::uint32_t N = d.cfg.N;
    const std::uint64_t P = d.slice_bytes;
    validate_workload(w, N, d.slice_bytes);

    std::vector<std::size_t> order(w.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return w[a].arrival_slot < w[b].arrival_slot; });

    OracleTrace tr;
    tr.departure.assign(w.size(), -1);
    std::vector<std::uint64_t> line_end(N, 0);   // byte time the output line frees up
    for (std::size_t n : order) {
        const Packet& p = w[n];
        const std::uint64_t start = std::max(line_end[p.output], std::uint64_t(p.arrival_slot) * P);
        const std::uint64_t end = start + p.size;
        line_end[p.output] = end;
        tr.departure[n] = std::int64_t((end + P - 1) / P);
    }
    return tr;
}

std::int64_t mimic_metric(const std::vector<std::int64_t>& oracle, const std::vector<std::int64_t>& hbm,
                          std::int64_t x) {
    std::int64_t m = 0;
    for (std::size_t n = 0; n < oracle.size(); ++n) {
        const std::int64_t o = oracle[n];
        if (o < 0 || o > x) continue;
        const std::int64_t h = hbm[n];
        m = std::max(m, (h >= 0 && h <= x) ? h - o : x - o);
    }
    return m;
}

namespace {

std::vector<double> cumulative_bytes(const Workload& w, const std::vector<std::int64_t>& dep, std::int64_t horizon) {
    std::vector<double> c(std::size_t(horizon) + 1, 0.0);
    for (std::size_t n = 0; n < w.size(); ++n)
        if (dep[n] >= 0 && dep[n] <= horizon) c[std::size_t(dep[n])] += w[n].size;
    for (std::size_t t = 1; t < c.size(); ++t) c[t] += c[t - 1];
    return c;
}

} // namespace

GapReport throughput_check(const Workload& w, const std::vector<std::int64_t>& oracle,
                           const std::vector<std::int64_t>& hbm, const DerivedConfig& d, std::int64_t horizon,
                           std::uint32_t stride) {
    if (oracle.size() != w.size() || hbm.size() != w.size())
        throw Error(ErrorKind::WorkloadMismatch, "oq_oracle", "departure vectors do not match the workload");
    GapReport g;
    g.stride = std::max<std::uint32_t>(stride, 1);
    const double P = d.slice_bytes;
    const auto sm = cumulative_bytes(w, oracle, horizon);
    const auto hb = cumulative_bytes(w, hbm, horizon);

    std::vector<double> gap(sm.size());
    for (std::size_t t = 0; t < gap.size(); ++t) {
        gap[t] = (sm[t] - hb[t]) / P;
        g.max_gap = std::max(g.max_gap, gap[t]);
        if (t % g.stride == 0) g.series.push_back(gap[t]);
    }

    const std::size_t lo = gap.size() / 2;
    const double n = double(gap.size() - lo);
    if (n >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t t = lo; t < gap.size(); ++t) {
            const double x = double(t - lo);
            sx += x;
            sy += gap[t];
            sxx += x * x;
            sxy += x * gap[t];
        }
        const double den = n * sxx - sx * sx;
        g.slope = den > 0 ? (n * sxy - sx * sy) / den : 0.0;
    }
    g.pass = g.slope < kGapSlopeTolerance;

    std::vector<double> offered(d.cfg.N, 0.0), departed(d.cfg.N, 0.0);
    for (std::size_t k = 0; k < w.size(); ++k) {
        offered[w[k].output] += w[k].size;
        if (hbm[k] >= 0 && hbm[k] <= horizon) departed[w[k].output] += w[k].size;
    }
    for (std::uint32_t j = 0; j < d.cfg.N; ++j) {
        const double r = offered[j] > 0 ? departed[j] / offered[j] : 1.0;
        g.per_output_ratio.push_back(r);
        g.min_ratio = std::min(g.min_ratio, r);
    }
    return g;
}

MimicReport compare_traces(const Workload& w, const DerivedConfig& d, const OracleTrace& oracle, SimTrace sim,
                           std::uint32_t gap_stride) {
    if (oracle.departure.size() != w.size() || sim.departure.size() != w.size())
        throw Error(ErrorKind::WorkloadMismatch, "oq_oracle",
                    "traces cover " + std::to_string(oracle.departure.size()) + " and " +
                        std::to_string(sim.departure.size()) + " packets, workload has " + std::to_string(w.size()));
    MimicReport r;
    r.horizon = std::int64_t(sim.slots);
    r.packets = w.size();
    r.half_point_max = mimic_metric(oracle.departure, sim.departure, r.horizon / 2);
    r.max_delay_diff = mimic_metric(oracle.departure, sim.departure, r.horizon);
    r.bounded = r.max_delay_diff <= r.half_point_max;
    for (auto h : sim.departure)
        if (h < 0) ++r.undelivered;
    r.gap = throughput_check(w, oracle.departure, sim.departure, d, r.horizon, gap_stride);
    r.oracle = oracle;
    r.sim = std::move(sim);
    return r;
}

MimicReport compare_mimic(const Workload& w, const DerivedConfig& d, const SimOptions& opt, std::uint32_t gap_stride) {
    OracleTrace o = run_oracle(w, d);
    return compare_traces(w, d, o, run(w, d, opt), gap_stride);
}

} // namespace pbr
