#include <doctest.h>

#include <pbr/error.hpp>
#include <pbr/hbm_sim.hpp>
#include <pbr/hbm_timing.hpp>
#include <pbr/oracle.hpp>

#include <algorithm>
#include <map>
#include <set>

using namespace pbr;

namespace {

DerivedConfig desk() { return derive_and_validate(desk_config(), desk_timing()); }

SimOptions desk_opts() {
    SimOptions o;
    o.frames_per_phase = 1;
    return o;
}

/// One K-byte frame to output 0 from input 0 as 32 packets of 1024 B.
Workload one_frame(std::uint32_t output = 0, std::int64_t start = 0, std::uint64_t first_id = 0) {
    Workload w;
    for (std::uint64_t n = 0; n < 32; ++n) w.push_back({first_id + n, 0, output, 1024, start + std::int64_t(2 * n)});
    return w;
}

// brute-force count of activations per channel in any window of length t_FAW
std::uint32_t max_acts_in_window(const std::vector<HbmCommand>& trace, const DerivedConfig& d) {
    std::map<std::uint32_t, std::vector<double>> acts;
    for (const auto& c : trace)
        if (c.kind == CmdKind::ACT) {
            if (c.channel == 0)
                for (std::uint32_t ch = 1; ch <= d.T; ++ch) acts[ch].push_back(c.time_ns);
            else
                acts[c.channel].push_back(c.time_ns);
        }
    std::uint32_t worst = 0;
    for (auto& [ch, v] : acts)
        for (double a : v) {
            std::uint32_t n = 0;
            for (double b : v)
                if (b >= a - 1e-9 && b < a + d.timing.t_faw_ns - 1e-9) ++n;
            worst = std::max(worst, n);
        }
    return worst;
}

} // namespace

TEST_CASE("single frame walks the pipeline on schedule") {
    const DerivedConfig d = desk();
    const Workload w = one_frame();
    const SimTrace t = run(w, d, desk_opts());
    REQUIRE(t.frames.size() == 1);
    const FrameRecord& f = t.frames[0];
    // batch b is delivered by slot 4b+3, crosses slots 4b+4..4b+7; last batch b=15
    CHECK(f.formed_slot == 67);
    // next cycle starts at slot 80; passes end 4 and 8 slots in
    CHECK(f.written_slot == 88);
    // output 0 is served in cycles 0, 4, 8: read window is slots 136..144
    CHECK(f.head_slot == 144);
    // 16 batches x 4 slices on the output crossbar
    CHECK(f.delivered_slot == 144 + 63);
    for (std::size_t n = 0; n < w.size(); ++n) {
        const std::int64_t b = std::int64_t(n / 2);
        const std::int64_t expect = 144 + 4 * b + (n % 2 ? 5 : 3);
        CHECK(t.departure[n] == expect);
    }
    CHECK(t.counters.frames_written == 1);
    CHECK(t.counters.frames_read == 1);
    CHECK(t.counters.bytes_out == d.K);
    CHECK(check_timing(t.commands, d).ok());
    CHECK(t.commands.size() == 2 * std::size_t(d.cfg.gamma) * (d.T + 2));
}

TEST_CASE("empty workload gives an empty trace") {
    const SimTrace t = run({}, desk(), desk_opts());
    CHECK(t.commands.empty());
    CHECK(t.frames.empty());
    CHECK(t.counters.bytes_in == 0);
}

TEST_CASE("consecutive frames for one output use consecutive bank groups") {
    const DerivedConfig d = desk();
    Workload w = one_frame();
    const Workload second = one_frame(0, 64, 32);
    w.insert(w.end(), second.begin(), second.end());
    const SimTrace t = run(w, d, desk_opts());
    REQUIRE(t.frames.size() == 2);
    CHECK(t.frames[0].group == 0);
    CHECK(t.frames[1].group == 1);
    CHECK(t.frames[0].delivered_slot < t.frames[1].delivered_slot);
    for (std::size_t n = 1; n < w.size(); ++n) CHECK(t.departure[n] > t.departure[n - 1]);
    std::set<std::uint32_t> banks;
    for (const auto& c : t.commands)
        if (c.frame_seq == 1) banks.insert(c.bank);
    CHECK(banks == std::set<std::uint32_t>{3, 4});
}

TEST_CASE("bypass serves a lone frame from the tail without memory commands") {
    const DerivedConfig d = desk();
    SimOptions o = desk_opts();
    o.bypass = true;
    const SimTrace t = run(one_frame(), d, o);
    CHECK(t.counters.bypasses == 1);
    CHECK(t.counters.frames_written == 0);
    CHECK(t.commands.empty());
    // formed at 67, taken by output 0's read turn at 72
    CHECK(t.frames[0].head_slot == 80);
    CHECK(std::all_of(t.departure.begin(), t.departure.end(), [](auto x) { return x > 0; }));
}

TEST_CASE("finite memory drops whole frames") {
    const DerivedConfig d = desk();
    SimOptions o = desk_opts();
    o.hbm_capacity_frames = 1;
    const Workload w = gen_frame_only_workload(d, 0.9, 3000, 4);
    const SimTrace t = run(w, d, o);
    CHECK(t.counters.dropped_frames > 0);
    CHECK(t.counters.dropped_bytes > 0);
}

TEST_CASE("frame-only traffic is served legally and within SRAM bounds") {
    const DerivedConfig d = desk();
    SimOptions o = desk_opts();
    o.assert_bounds = true;
    const Workload w = gen_frame_only_workload(d, 0.9, 5000, 12);
    REQUIRE_FALSE(w.empty());
    const SimTrace t = run(w, d, o);
    CHECK(t.counters.packets_departed == w.size());
    for (std::size_t n = 0; n < w.size(); ++n) CHECK(t.departure[n] > w[n].arrival_slot);
    const TimingCheck c = check_timing(t.commands, d);
    CHECK(c.ok());
    CHECK(max_acts_in_window(t.commands, d) <= 4);
    CHECK(c.max_acts_in_faw == max_acts_in_window(t.commands, d));
    for (std::size_t x = 0; x < 4; ++x) CHECK(t.max_occupancy[x] * 8 <= t.bound.component_bits[x]);
}

TEST_CASE("per-flow order is kept") {
    const DerivedConfig d = desk();
    const Workload w = gen_subframe_workload(d, 0.8, 4000, 0.5, 3);
    SimOptions o = desk_opts();
    o.padding_timeout = 200;
    const SimTrace t = run(w, d, o);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> last;
    for (std::size_t n = 0; n < w.size(); ++n) {
        REQUIRE(t.departure[n] >= 0);
        auto& l = last[{w[n].input, w[n].output}];
        CHECK(t.departure[n] >= l);
        l = t.departure[n];
    }
}

TEST_CASE("a lone small packet waits forever without padding or speedup") {
    const DerivedConfig d = desk();
    const Workload w = lone_packet(1, 2, 64);
    SimOptions o = desk_opts();
    o.slots = 4000;
    CHECK(run(w, d, o).departure[0] == -1);

    SUBCASE("padding releases it") {
        o.padding_timeout = 50;
        const SimTrace t = run(w, d, o);
        CHECK(t.departure[0] > 0);
        CHECK(t.counters.padded_batches == 1);
        CHECK(t.counters.padded_frames == 1);
    }
    SUBCASE("speedup releases it") {
        o.speedup_n = 4;
        const SimTrace t = run(w, d, o);
        CHECK(t.departure[0] > 0);
        CHECK(t.counters.marked_frames == 1);
        // eligible once K/P + 4N slots old, then four marked stages
        CHECK(t.departure[0] <= t.marked_min_age + 4 * 4 + 8);
    }
}

TEST_CASE("line rate is enforced") {
    const DerivedConfig d = desk();
    Workload w{{0, 0, 1, 1024, 0}, {1, 0, 2, 64, 1}};
    CHECK_THROWS_AS(run(w, d, desk_opts()), Error);
    try {
        run(w, d, desk_opts());
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RateViolation);
    }
    Workload ok{{0, 0, 1, 1024, 0}, {1, 0, 2, 64, 2}};
    CHECK_NOTHROW(run(ok, d, desk_opts()));
}

TEST_CASE("simulation is deterministic") {
    const DerivedConfig d = desk();
    const Workload w = gen_subframe_workload(d, 0.7, 3000, 0.5, 9);
    SimOptions o = desk_opts();
    o.speedup_n = 2;
    const SimTrace a = run(w, d, o);
    const SimTrace b = run(w, d, o);
    CHECK(a.departure == b.departure);
    CHECK(a.commands.size() == b.commands.size());
}
