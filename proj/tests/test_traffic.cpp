#include <doctest.h>

#include <pbr/error.hpp>
#include <pbr/io.hpp>
#include <pbr/traffic.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace pbr;

namespace {

double median(std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

// E[exp(X)] for X ~ N(mu, sigma^2) by Simpson's rule over mu +- 12 sigma
double lognormal_mean_numeric(double mu, double sigma) {
    const int n = 200000;
    const double a = mu - 12 * sigma, b = mu + 12 * sigma, h = (b - a) / n;
    const double pi = std::acos(-1.0);
    auto f = [&](double x) {
        const double z = (x - mu) / sigma;
        return std::exp(x) * std::exp(-0.5 * z * z) / (sigma * std::sqrt(2 * pi));
    };
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

} // namespace

TEST_CASE("flow rate distribution") {
    Rng rng = make_rng(11, "test-flows");
    std::vector<double> x(1000000);
    for (auto& v : x) v = sample_flow_rate(rng);
    CHECK(median(x) == doctest::Approx(0.015).epsilon(0.05));
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    const double expect = lognormal_mean_numeric(-4.2, 2.06);
    CHECK(expect == doctest::Approx(std::exp(-4.2 + 2.06 * 2.06 / 2)).epsilon(1e-6));
    CHECK(mean == doctest::Approx(expect).epsilon(0.05));

    FlowRateParams flat{-4.2, 0.0};
    Rng r2 = make_rng(1, "flat");
    for (int i = 0; i < 100; ++i) CHECK(sample_flow_rate(r2, flat) == std::exp(-4.2));
}

TEST_CASE("synthetic TM respects row and zipf column caps") {
    SUBCASE("s = 0, rho = 0.9") {
        SyntheticTmParams p;
        p.rho = 0.9;
        p.zipf_s = 0;
        p.R_gbps = 0.4;
        const TmDims dims{256, 16};
        const TrafficMatrix tm = build_synthetic_tm(p, dims, 3);
        for (double r : tm.row_sums()) CHECK(r <= 0.9 + 1e-12);
        for (double c : tm.col_sums()) CHECK(c <= 0.9 * 16 + 1e-9);
        CHECK(tm.is_admissible());
        CHECK(tm.total() > 0);
    }
    SUBCASE("s = 1, rho = 1") {
        SyntheticTmParams p;
        p.R_gbps = 0.4;
        const TmDims dims{1024, 16};
        const TrafficMatrix tm = build_synthetic_tm(p, dims, 5);
        const auto cs = tm.col_sums();
        for (std::size_t k = 0; k < cs.size(); ++k) CHECK(cs[k] <= 64.0 / double(k + 1) + 1e-9);
        CHECK(tm.is_admissible());
    }
}

TEST_CASE("synthetic TM is deterministic per seed") {
    SyntheticTmParams p;
    p.R_gbps = 0.4;
    const TmDims dims{256, 4};
    CHECK(build_synthetic_tm(p, dims, 9) == build_synthetic_tm(p, dims, 9));
    CHECK_FALSE(build_synthetic_tm(p, dims, 9) == build_synthetic_tm(p, dims, 10));
}

TEST_CASE("tiny synthetic TM matches the recorded golden matrix") {
    SyntheticTmParams p;
    const TrafficMatrix tm = build_synthetic_tm(p, {4, 2}, 7);
    const TrafficMatrix golden = load_tm(std::string(PBR_TEST_DATA) + "/golden_tiny_tm.csv");
    CHECK(tm == golden);
    for (double r : golden.row_sums()) CHECK(r <= 1.0 + 1e-12);
    const auto cs = golden.col_sums();
    CHECK(cs[0] <= 2.0 + 1e-12);
    CHECK(cs[1] <= 1.0 + 1e-12);
}

TEST_CASE("invalid synthetic parameters") {
    SyntheticTmParams p;
    p.rho = 0;
    CHECK_THROWS_AS(build_synthetic_tm(p, {4, 2}, 1), Error);
    p.rho = 1;
    p.zipf_s = -1;
    CHECK_THROWS_AS(build_synthetic_tm(p, {4, 2}, 1), Error);
}

TEST_CASE("resize by recursive splitting") {
    TrafficMatrix one(1, 1, 1.0);
    SUBCASE("symmetric split") {
        const TrafficMatrix t = resize_tm(one, 0.5, 4, 1, false);
        REQUIRE(t.rows() == 4);
        for (std::size_t r = 0; r < 4; ++r) CHECK(t.at(r, 0) == 0.25);
    }
    SUBCASE("skewed split") {
        const TrafficMatrix t = resize_tm(one, 0.9, 2, 1, false);
        CHECK(t.at(0, 0) == doctest::Approx(0.9));
        CHECK(t.at(1, 0) == doctest::Approx(0.1));
    }
    SUBCASE("stops at the largest doubling within target") {
        const TrafficMatrix t = resize_tm(one, 0.5, 7, 3, false);
        CHECK(t.rows() == 4);
        CHECK(t.cols() == 2);
    }
    SUBCASE("2x2 expanded by hand") {
        TrafficMatrix m(2, 2);
        m.at(0, 0) = 1.0;
        m.at(1, 1) = 1.0;
        const double a = 0.7, b = 0.3;
        // rows double first: each row r becomes (a*row, b*row); then columns likewise
        const double expect[4][4] = {
            {a * a, a * b, 0, 0},
            {b * a, b * b, 0, 0},
            {0, 0, a * a, a * b},
            {0, 0, b * a, b * b},
        };
        const TrafficMatrix t = resize_tm(m, 0.7, 4, 4, false);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) CHECK(t.at(r, c) == doctest::Approx(expect[r][c]));
        CHECK(t.total() == doctest::Approx(m.total()).epsilon(1e-9));
    }
    SUBCASE("rescale saturates the busiest line") {
        TrafficMatrix m(2, 2);
        m.at(0, 0) = 0.2;
        m.at(0, 1) = 0.1;
        m.at(1, 0) = 0.05;
        const TrafficMatrix t = resize_tm(m, 0.6, 8, 8, true);
        const auto rs = t.row_sums();
        const auto cs = t.col_sums();
        const double cap = t.column_capacity();
        double worst = 0;
        for (double r : rs) worst = std::max(worst, r);
        for (double c : cs) worst = std::max(worst, c / cap);
        CHECK(worst == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(resize_tm(one, 0.4, 2, 2), Error);
    CHECK_THROWS_AS(resize_tm(one, 1.1, 2, 2), Error);
    try {
        resize_tm(one, 0.3, 2, 2);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidAlpha);
    }
}

TEST_CASE("flows hashed into a matrix") {
    SUBCASE("single flow") {
        const TrafficMatrix t = tm_from_flows({{"10.1", "20.2", 3.5}}, {64, 4});
        int nonzero = 0;
        for (double v : t.data())
            if (v != 0) {
                ++nonzero;
                CHECK(v == 1.0);
            }
        CHECK(nonzero == 1);
    }
    SUBCASE("same keys add up") {
        const TrafficMatrix t = tm_from_flows({{"a", "b", 1.0}, {"a", "b", 2.0}}, {64, 4});
        CHECK(std::count_if(t.data().begin(), t.data().end(), [](double v) { return v != 0; }) == 1);
        CHECK(t.total() == doctest::Approx(1.0));
    }
    SUBCASE("uniform keys spread evenly over outputs") {
        Rng rng = make_rng(4, "keys");
        std::vector<FlowRecord> f;
        for (int i = 0; i < 10000; ++i)
            f.push_back({"s" + std::to_string(rng()), "d" + std::to_string(rng()), 1.0});
        const TrafficMatrix t = tm_from_flows(f, {16384, 16});
        const auto cs = t.col_sums();
        const double mx = *std::max_element(cs.begin(), cs.end());
        const double mn = *std::min_element(cs.begin(), cs.end());
        CHECK(mx / mn < 1.5);
    }
    SUBCASE("order of flows does not matter") {
        std::vector<FlowRecord> f;
        for (int i = 0; i < 200; ++i) f.push_back({"s" + std::to_string(i % 37), "d" + std::to_string(i % 11), 0.1 * (i + 1)});
        const TrafficMatrix a = tm_from_flows(f, {32, 4}, "sha256");
        std::reverse(f.begin(), f.end());
        std::rotate(f.begin(), f.begin() + 17, f.end());
        CHECK(tm_from_flows(f, {32, 4}, "sha256") == a);
    }
    CHECK_THROWS_AS(tm_from_flows({}, {4, 2}), Error);
}

TEST_CASE("stable hash is the leading digest bytes") {
    // md5("") = d41d8cd98f00b204...
    CHECK(stable_hash64("", "md5") == 0xd41d8cd98f00b204ull);
    // sha256("abc") = ba7816bf8f01cfea...
    CHECK(stable_hash64("abc", "sha256") == 0xba7816bf8f01cfeaull);
    CHECK_THROWS_AS(stable_hash64("x", "crc"), Error);
}

TEST_CASE("dc workload") {
    const PortGeometry geo{8, 8, 8, 0.4};   // slow lanes keep flow counts small
    DcWorkloadParams p;
    p.n_dcs = 4;
    p.m_gpus = 32;
    p.n_time_samples = 4;
    p.seed = 21;

    SUBCASE("no communication leaves only WAN traffic") {
        p.beta_comm = 0.0;
        DcWorkloadGenerator g(p, geo);
        for (std::uint32_t s = 0; s < 4; ++s) CHECK(g.dc_traffic(s).total() == 0.0);
        for (const auto& tm : g.generate()) {
            CHECK(tm.total() > 0);
            CHECK(tm.is_admissible());
        }
    }
    SUBCASE("adaptive balancing loads every lane of a sender to the cap") {
        p.beta_comm = 1.0;
        p.lb_scheme = LbScheme::Adaptive;
        DcWorkloadGenerator g(p, geo);
        const TrafficMatrix dc = g.dc_traffic(0);
        const auto& pl = g.placement();
        const bool fwd = g.forward(0);
        const std::uint32_t sender = fwd ? pl[0] : pl[1];
        const std::uint32_t fw = geo.F * geo.W;
        for (std::uint32_t l = 0; l < fw; ++l) CHECK(dc.row_sum(std::size_t(sender) * fw + l) == doctest::Approx(0.95));
    }
    SUBCASE("round robin lanes differ by at most one flow") {
        p.beta_comm = 1.0;
        p.alpha_dc = 0.5;
        p.m_gpus = 100;   // more flows than lanes
        p.lb_scheme = LbScheme::RoundRobin;
        DcWorkloadGenerator g(p, geo);
        const TrafficMatrix dc = g.dc_traffic(0);
        const std::uint32_t fw = geo.F * geo.W;
        const double flow = p.alpha_dc * fw / p.m_gpus;
        const std::uint32_t sender = g.forward(0) ? g.placement()[0] : g.placement()[1];
        double lo = 1e9, hi = 0;
        for (std::uint32_t l = 0; l < fw; ++l) {
            const double v = dc.row_sum(std::size_t(sender) * fw + l);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(hi - lo <= flow + 1e-12);
    }
    SUBCASE("every sample is admissible and capped") {
        p.beta_comm = 0.5;
        for (LbScheme s : {LbScheme::Ecmp, LbScheme::RoundRobin, LbScheme::Adaptive}) {
            p.lb_scheme = s;
            for (const auto& tm : gen_dc_workload(p, geo)) {
                CHECK(tm.is_admissible());
                for (double r : tm.row_sums()) CHECK(r <= 0.95 + 1e-9);
            }
        }
    }
    SUBCASE("schemes share placement and draws for one seed") {
        p.beta_comm = 0.5;
        DcWorkloadParams q = p;
        q.lb_scheme = LbScheme::RoundRobin;
        DcWorkloadGenerator a(p, geo), b(q, geo);
        CHECK(a.placement() == b.placement());
        for (std::uint32_t s = 0; s < 8; ++s) {
            CHECK(a.communicates(s) == b.communicates(s));
            CHECK(a.forward(s) == b.forward(s));
        }
        std::vector<std::uint32_t> sorted = a.placement();
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
    SUBCASE("too many DCs") {
        p.n_dcs = 9;
        CHECK_THROWS_AS(DcWorkloadGenerator(p, geo), Error);
    }
}
