#include <pbr/workload.hpp>
#include <pbr/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <boost/random/uniform_int_distribution.hpp>

namespace pbr {
namespace {

constexpr std::uint64_t kGranule = 64;
constexpr std::uint64_t kMaxTilePacket = 1472;   // largest multiple of 64 below 1500

std::vector<std::uint32_t> random_permutation(std::uint32_t n, Rng& rng) {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0u);
    for (std::uint32_t x = n; x > 1; --x) {
        boost::random::uniform_int_distribution<std::uint32_t> pick(0, x - 1);
        std::swap(p[x - 1], p[pick(rng)]);
    }
    return p;
}

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    return boost::random::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

} // namespace

void sort_workload(Workload& w) {
    std::stable_sort(w.begin(), w.end(), [](const Packet& a, const Packet& b) {
        return std::tie(a.arrival_slot, a.input, a.id) < std::tie(b.arrival_slot, b.input, b.id);
    });
}

void validate_workload(const Workload& w, std::uint32_t N, std::uint32_t P, const PacketLimits& lim) {
    std::vector<std::int64_t> line_end(N, 0);   // byte position where each input line frees up
    std::int64_t prev = std::numeric_limits<std::int64_t>::min();
    for (std::size_t n = 0; n < w.size(); ++n) {
        const Packet& p = w[n];
        if (p.arrival_slot < prev)
            throw Error(ErrorKind::InvalidConfig, "hbm_sim", "packets not sorted by arrival_slot at index " + std::to_string(n));
        prev = p.arrival_slot;
        if (p.arrival_slot < 0) throw Error(ErrorKind::InvalidConfig, "hbm_sim", "negative arrival slot");
        if (p.input >= N || p.output >= N)
            throw Error(ErrorKind::InvalidConfig, "hbm_sim", "port out of range for packet " + std::to_string(p.id));
        if (p.size < lim.min_bytes || p.size > lim.max_bytes)
            throw Error(ErrorKind::InvalidConfig, "hbm_sim", "packet size out of range for packet " + std::to_string(p.id));
        const std::int64_t slot_start = p.arrival_slot * std::int64_t(P);
        const std::int64_t start = std::max(line_end[p.input], slot_start);
        if (start >= slot_start + std::int64_t(P))
            throw Error(ErrorKind::RateViolation, "hbm_sim",
                        "input " + std::to_string(p.input + 1) + " exceeds line rate at packet " + std::to_string(p.id));
        line_end[p.input] = start + p.size;
    }
}

void append_burst(Workload& w, std::uint32_t input, std::uint32_t output, std::uint64_t bytes, std::int64_t start,
                  std::uint32_t P, std::uint64_t k, std::uint64_t queued, std::uint64_t& next_id, Rng& rng) {
    std::uint64_t off = 0;
    while (off < bytes) {
        const std::uint64_t room = k - (queued + off) % k;
        const std::uint64_t cap = std::min({room, bytes - off, kMaxTilePacket});
        const std::uint64_t size = kGranule * uniform(rng, 1, std::max<std::uint64_t>(1, cap / kGranule));
        w.push_back({next_id++, input, output, std::uint32_t(size), start + std::int64_t(off / P)});
        off += size;
    }
}

Workload gen_frame_only_workload(const DerivedConfig& d, double load, std::uint64_t horizon, std::uint64_t seed) {
    if (!(load > 0.0 && load <= 1.0)) throw Error(ErrorKind::InvalidConfig, "hbm_sim", "load must be in (0, 1]");
    const std::uint32_t N = d.cfg.N;
    const std::uint32_t P = d.slice_bytes;
    const std::uint64_t burst_slots = d.K / P;
    Rng rng = make_rng(seed, "frame-only");
    Workload w;
    std::uint64_t id = 0;
    for (std::uint64_t r = 0;; ++r) {
        const auto s0 = std::uint64_t(std::floor(double(r) * burst_slots / load));
        const auto s1 = std::uint64_t(std::floor(double(r + 1) * burst_slots / load));
        if (s1 > horizon) break;
        const auto perm = random_permutation(N, rng);
        for (std::uint32_t i = 0; i < N; ++i) {
            const std::uint64_t off = uniform(rng, 0, s1 - s0 - burst_slots);
            append_burst(w, i, perm[i], d.K, std::int64_t(s0 + off), P, d.k, 0, id, rng);
        }
    }
    sort_workload(w);
    return w;
}

Workload gen_subframe_workload(const DerivedConfig& d, double load, std::uint64_t horizon, double active_fraction,
                               std::uint64_t seed) {
    if (!(load > 0.0 && load <= 1.0)) throw Error(ErrorKind::InvalidConfig, "hbm_sim", "load must be in (0, 1]");
    const std::uint32_t N = d.cfg.N;
    const std::uint32_t P = d.slice_bytes;
    const std::uint64_t max_bytes = d.K * 3 / 2;
    const std::uint64_t max_slots = (max_bytes + P - 1) / P;
    const auto stop = std::uint64_t(double(horizon) * active_fraction);
    Rng rng = make_rng(seed, "sub-frame");
    std::vector<std::uint64_t> queued(std::size_t(N) * N, 0);
    Workload w;
    std::uint64_t id = 0;
    for (std::uint64_t r = 0;; ++r) {
        const auto s0 = std::uint64_t(std::floor(double(r) * max_slots / load));
        const auto s1 = std::uint64_t(std::floor(double(r + 1) * max_slots / load));
        if (s1 > stop) break;
        const auto perm = random_permutation(N, rng);
        for (std::uint32_t i = 0; i < N; ++i) {
            const std::uint64_t bytes = kGranule * uniform(rng, 1, max_bytes / kGranule);
            const std::uint64_t slots = (bytes + P - 1) / P;
            const std::uint64_t off = uniform(rng, 0, s1 - s0 - slots);
            auto& q = queued[std::size_t(i) * N + perm[i]];
            append_burst(w, i, perm[i], bytes, std::int64_t(s0 + off), P, d.k, q, id, rng);
            q = (q + bytes) % d.k;
        }
    }
    sort_workload(w);
    return w;
}

Workload gen_overload_workload(const DerivedConfig& d, double overload, std::uint64_t horizon, std::uint64_t seed) {
    if (d.cfg.N < 2) throw Error(ErrorKind::InvalidConfig, "hbm_sim", "overload workload needs two inputs");
    const std::uint32_t P = d.slice_bytes;
    const std::uint64_t round = d.K / P;
    const std::uint64_t each = std::uint64_t(std::llround(overload * double(d.K) / 2.0 / kGranule)) * kGranule;
    if (each > d.K) throw Error(ErrorKind::InvalidConfig, "hbm_sim", "overload above 2x is not representable");
    Rng rng = make_rng(seed, "overload");
    std::vector<std::uint64_t> queued(2, 0);
    Workload w;
    std::uint64_t id = 0;
    for (std::uint64_t s0 = 0; s0 + round <= horizon; s0 += round)
        for (std::uint32_t i = 0; i < 2; ++i) {
            append_burst(w, i, 0, each, std::int64_t(s0), P, d.k, queued[i], id, rng);
            queued[i] = (queued[i] + each) % d.k;
        }
    sort_workload(w);
    return w;
}

Workload lone_packet(std::uint32_t input, std::uint32_t output, std::uint32_t size, std::int64_t slot) {
    return {Packet{0, input, output, size, slot}};
}

} // namespace pbr
