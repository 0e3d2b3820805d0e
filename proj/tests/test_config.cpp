#include <doctest.h>

#include <pbr/config.hpp>
#include <pbr/error.hpp>

#include <cmath>

using namespace pbr;

TEST_CASE("reference config derives the package geometry") {
    const DerivedConfig d = derive_and_validate(reference_config(), reference_timing());
    CHECK(d.total_io_gbps == doctest::Approx(655360.0));
    CHECK(d.per_switch_io_gbps == doctest::Approx(81920.0));
    CHECK(d.port_rate_gbps == doctest::Approx(2560.0));
    CHECK(d.k == 4096);
    CHECK(d.K == 524288);
    CHECK(d.T == 128);
    CHECK(d.alpha == 4);
    CHECK(d.bank_groups == 16);
    CHECK(d.batches_per_frame == 128);
    CHECK(d.t_segment_ns == doctest::Approx(12.8));
}

TEST_CASE("non-integer alpha is rejected") {
    SwitchConfig c = reference_config();
    c.H = 5;
    CHECK_THROWS_AS(derive_and_validate(c), Error);
    try {
        derive_and_validate(c);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidConfig);
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }
}

TEST_CASE("structural invariants are named when violated") {
    auto kind_of = [](SwitchConfig c, HbmTiming t = {}) {
        try {
            derive_and_validate(c, t);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::IoError;
    };
    SwitchConfig c = reference_config();
    c.gamma = 8;
    c.L = 64;
    CHECK(kind_of(c) == ErrorKind::InvalidConfig);
    c = reference_config();
    c.L = 62;
    CHECK(kind_of(c) == ErrorKind::InvalidConfig);
    c = reference_config();
    c.S = 1000;
    CHECK(kind_of(c) == ErrorKind::InvalidConfig);
    c = reference_config();
    c.row_size_bytes = 1536;
    CHECK(kind_of(c) == ErrorKind::InvalidConfig);
    c = reference_config();
    c.N = 0;
    CHECK(kind_of(c) == ErrorKind::InvalidConfig);
    c = reference_config();
    c.N = 3;
    CHECK(kind_of(c) == ErrorKind::InvalidConfig);   // K/k not integral
}

TEST_CASE("minimal config") {
    SwitchConfig c = reference_config();
    c.N = c.F = c.W = c.H = 1;
    c.R_gbps = 1;
    const DerivedConfig d = derive_and_validate(c);
    CHECK(d.total_io_gbps == 1.0);
    CHECK(d.alpha == 1);
}

TEST_CASE("sram bound at the reference config") {
    const DerivedConfig d = derive_and_validate(reference_config());
    const SramBound b = sram_bound_bytes(d);
    // closed form in bytes with the square term read as bits
    const double N = 16, k = 4096, K = 524288;
    const double expect = 1.5 * (N + 1) * K + (N + 2) * N * k - N * N / 8;
    CHECK(b.total_bytes() == expect);
    CHECK(b.total_bits == 116391680u);
    CHECK(b.total_bits / 8 == 14548960u);
    CHECK(std::round(b.total_mb() * 10) / 10 == doctest::Approx(14.5));

    // components in bytes
    CHECK(b.component_bytes(kInputs) == N * (N * k + k - N / 8));
    CHECK(b.component_bytes(kTail) == N * K + K - N * k);
    CHECK(b.component_bytes(kHead) == (N + 1) / 2 * K);
    CHECK(b.component_bytes(kOutputs) == 2 * N * k);
    std::uint64_t sum = 0;
    for (auto x : b.component_bits) sum += x;
    CHECK(sum == b.total_bits);
}

TEST_CASE("design analysis figures") {
    const DerivedConfig d = derive_and_validate(reference_config());
    const AnalysisReport a = design_analysis(d);
    // buffering: 16 switches x 4 stacks x 64 GB over 655.36 Tb/s
    CHECK(a.buffer_ms == doctest::Approx(16.0 * 4 * 64 * 8 / 655.36 / 1e3 * 1e3));
    CHECK(a.proc_power_w == doctest::Approx(400.0));
    CHECK(a.hbm_power_w == doctest::Approx(300.0));
    CHECK(a.oeo_power_w == doctest::Approx(1.15e-12 * 81.92e12));
    CHECK(a.power_w_per_switch == doctest::Approx(794.208));
    CHECK(a.power_kw_total == doctest::Approx(12.707328));
    CHECK(a.area_mm2_per_switch == doctest::Approx(1284.0));
    CHECK(a.area_mm2_total == doctest::Approx(20544.0));
}

TEST_CASE("timing feasibility") {
    DerivedConfig d = derive_and_validate(reference_config(), reference_timing());
    CHECK_NOTHROW(check_timing_feasible(d));
    d.timing.t_faw_ns = 60;
    CHECK_THROWS_AS(check_timing_feasible(d), Error);
    d = derive_and_validate(reference_config(), reference_timing());
    d.timing.t_rc_ns = 60;
    CHECK_THROWS_AS(check_timing_feasible(d), Error);
    d = derive_and_validate(reference_config(), reference_timing());
    d.timing.t_rcd_ns = 30;
    CHECK_THROWS_AS(check_timing_feasible(d), Error);

    const DerivedConfig desk = derive_and_validate(desk_config(), desk_timing());
    CHECK_NOTHROW(check_timing_feasible(desk));
    CHECK(desk.cfg.N == 4);
    CHECK(desk.T == 8);
    CHECK(desk.cfg.L == 8);
    CHECK(desk.cfg.gamma == 2);
}
