#include <pbr/traffic.hpp>
#include <pbr/error.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/discrete_distribution.hpp>
#include <boost/random/lognormal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <openssl/evp.h>

namespace pbr {

double TrafficMatrix::row_sum(std::size_t r) const {
    const double* p = row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += p[c];
    return s;
}

std::vector<double> TrafficMatrix::row_sums() const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = row_sum(r);
    return out;
}

std::vector<double> TrafficMatrix::col_sums() const {
    std::vector<double> out(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        const double* p = row(r);
        for (std::size_t c = 0; c < cols_; ++c) out[c] += p[c];
    }
    return out;
}

double TrafficMatrix::total() const {
    double s = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) s += row_sum(r);
    return s;
}

bool TrafficMatrix::is_admissible(double tol) const {
    for (double v : data_)
        if (v < 0.0) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        if (row_sum(r) > 1.0 + tol) return false;
    const double cap = column_capacity();
    for (double s : col_sums())
        if (s > cap * (1.0 + tol)) return false;
    return true;
}

double TrafficMatrix::saturation_scale() const {
    double max_row = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) max_row = std::max(max_row, row_sum(r));
    double max_col = 0.0;
    for (double s : col_sums()) max_col = std::max(max_col, s);
    if (max_row <= 0.0) return 0.0;
    return std::min(1.0 / max_row, column_capacity() / max_col);
}

void TrafficMatrix::scale(double f) {
    for (double& v : data_) v *= f;
}

double sample_flow_rate(Rng& rng, const FlowRateParams& p) {
    boost::random::lognormal_distribution<double> dist(p.mu, p.sigma);
    return dist(rng);
}

std::vector<double> zipf_weights(std::size_t cols, double s) {
    std::vector<double> w(cols);
    for (std::size_t k = 0; k < cols; ++k) w[k] = 1.0 / std::pow(double(k + 1), s);
    return w;
}

FillStats fill_balls_and_bins(TrafficMatrix& tm, const std::vector<double>& row_cap,
                              const std::vector<double>& col_cap, const SyntheticTmParams& p, Rng& rng) {
    if (row_cap.size() != tm.rows() || col_cap.size() != tm.cols())
        throw Error(ErrorKind::DimensionMismatch, "traffic_gen", "capacity vectors do not match the matrix");
    FillStats st;
    if (tm.rows() == 0 || tm.cols() == 0) return st;

    std::vector<double> row_load(tm.rows(), 0.0);
    std::vector<double> col_load(tm.cols(), 0.0);
    boost::random::uniform_int_distribution<std::size_t> pick_row(0, tm.rows() - 1);
    const auto w = zipf_weights(tm.cols(), p.zipf_s);
    boost::random::discrete_distribution<std::size_t, double> pick_col(w.begin(), w.end());
    boost::random::lognormal_distribution<double> rate(p.flow.mu, p.flow.sigma);
    const double to_wavelength = 1.0 / (p.R_gbps * 1000.0);

    unsigned failures = 0;
    while (failures < p.max_failures) {
        double x = rate(rng) * to_wavelength;
        while (x < p.rate_floor) x = rate(rng) * to_wavelength;
        const std::size_t r = pick_row(rng);
        const std::size_t c = pick_col(rng);
        if (row_load[r] + x <= row_cap[r] && col_load[c] + x <= col_cap[c]) {
            row_load[r] += x;
            col_load[c] += x;
            tm.at(r, c) += x;
            ++st.flows_inserted;
            failures = 0;
        } else {
            ++st.flows_rejected;
            ++failures;
        }
    }
    return st;
}

TrafficMatrix build_synthetic_tm(const SyntheticTmParams& p, TmDims dims, std::uint64_t seed, FillStats* stats) {
    if (!(p.rho > 0.0 && p.rho <= 1.0))
        throw Error(ErrorKind::InvalidConfig, "traffic_gen", "rho must be in (0, 1]");
    if (p.zipf_s < 0.0) throw Error(ErrorKind::InvalidConfig, "traffic_gen", "zipf exponent must be >= 0");
    TrafficMatrix tm(dims.rows, dims.cols);
    std::vector<double> row_cap(dims.rows, p.rho);
    std::vector<double> col_cap(dims.cols);
    const double cap = tm.column_capacity();
    const auto w = zipf_weights(dims.cols, p.zipf_s);
    for (std::size_t k = 0; k < dims.cols; ++k) col_cap[k] = cap * p.rho * w[k];
    Rng rng = make_rng(seed, "synthetic-tm");
    const FillStats st = fill_balls_and_bins(tm, row_cap, col_cap, p, rng);
    if (stats) *stats = st;
    return tm;
}

TrafficMatrix resize_tm(const TrafficMatrix& tm, double a, std::size_t target_rows, std::size_t target_cols,
                        bool rescale) {
    if (!(a >= 0.5 && a <= 1.0)) throw Error(ErrorKind::InvalidAlpha, "traffic_gen", "alpha_split must be in [0.5, 1]");
    if (tm.rows() == 0 || tm.cols() == 0) throw Error(ErrorKind::EmptyInput, "traffic_gen", "empty matrix");
    if (target_rows < tm.rows() || target_cols < tm.cols())
        throw Error(ErrorKind::DimensionMismatch, "traffic_gen", "target smaller than source");

    TrafficMatrix cur = tm;
    while (cur.rows() * 2 <= target_rows) {
        TrafficMatrix next(cur.rows() * 2, cur.cols());
        for (std::size_t r = 0; r < cur.rows(); ++r)
            for (std::size_t c = 0; c < cur.cols(); ++c) {
                next.at(2 * r, c) = a * cur.at(r, c);
                next.at(2 * r + 1, c) = (1.0 - a) * cur.at(r, c);
            }
        cur = std::move(next);
    }
    while (cur.cols() * 2 <= target_cols) {
        TrafficMatrix next(cur.rows(), cur.cols() * 2);
        for (std::size_t r = 0; r < cur.rows(); ++r)
            for (std::size_t c = 0; c < cur.cols(); ++c) {
                next.at(r, 2 * c) = a * cur.at(r, c);
                next.at(r, 2 * c + 1) = (1.0 - a) * cur.at(r, c);
            }
        cur = std::move(next);
    }
    if (rescale) {
        const double f = cur.saturation_scale();
        if (f > 0.0) cur.scale(f);
    }
    return cur;
}

std::uint64_t stable_hash64(const std::string& key, const std::string& hash_name) {
    const EVP_MD* md = nullptr;
    if (hash_name == "md5") md = EVP_md5();
    else if (hash_name == "sha256") md = EVP_sha256();
    else throw Error(ErrorKind::InvalidConfig, "traffic_gen", "unknown hash '" + hash_name + "'");
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(key.data(), key.size(), digest, &len, md, nullptr) != 1 || len < 8)
        throw Error(ErrorKind::InvariantViolation, "traffic_gen", "digest failed");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | digest[i];
    return v;
}

TrafficMatrix tm_from_flows(const std::vector<FlowRecord>& flows, TmDims dims, const std::string& hash_name) {
    if (flows.empty()) throw Error(ErrorKind::EmptyInput, "traffic_gen", "no flows");
    if (dims.rows == 0 || dims.cols == 0) throw Error(ErrorKind::InvalidConfig, "traffic_gen", "empty dimensions");
    struct Cell {
        std::size_t r, c;
        double rate;
    };
    std::vector<Cell> cells;
    cells.reserve(flows.size());
    for (const auto& f : flows) {
        if (!(f.rate_mbps > 0.0)) throw Error(ErrorKind::NegativeLoad, "traffic_gen", "flow rate must be positive");
        cells.push_back({stable_hash64(f.src_key, hash_name) % dims.rows,
                         stable_hash64(f.dst_key, hash_name) % dims.cols, f.rate_mbps});
    }
    // canonical accumulation order makes the result independent of input order
    std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
        return std::tie(x.r, x.c, x.rate) < std::tie(y.r, y.c, y.rate);
    });
    TrafficMatrix tm(dims.rows, dims.cols);
    for (const auto& c : cells) tm.at(c.r, c.c) += c.rate;
    tm.scale(tm.saturation_scale());
    return tm;
}

std::string to_string(LbScheme s) {
    switch (s) {
    case LbScheme::Ecmp: return "ecmp";
    case LbScheme::RoundRobin: return "rr";
    case LbScheme::Adaptive: return "ar";
    }
    return "?";
}

LbScheme lb_scheme_from_string(const std::string& s) {
    if (s == "ecmp") return LbScheme::Ecmp;
    if (s == "rr") return LbScheme::RoundRobin;
    if (s == "ar") return LbScheme::Adaptive;
    throw Error(ErrorKind::InvalidConfig, "traffic_gen", "unknown load-balancing scheme '" + s + "'");
}

DcWorkloadGenerator::DcWorkloadGenerator(const DcWorkloadParams& params, const PortGeometry& geo)
    : p_(params), geo_(geo) {
    if (p_.n_dcs > geo_.N) throw Error(ErrorKind::TooManyDcs, "traffic_gen", "n_dcs exceeds N");
    auto frac = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!frac(p_.alpha_dc) || !frac(p_.beta_comm) || !frac(p_.max_wavelength_load))
        throw Error(ErrorKind::InvalidConfig, "traffic_gen", "fractions must lie in [0, 1]");
    if (p_.m_gpus == 0) throw Error(ErrorKind::InvalidConfig, "traffic_gen", "m_gpus must be positive");

    std::vector<std::uint32_t> ports(geo_.N);
    std::iota(ports.begin(), ports.end(), 0u);
    Rng rng = make_rng(p_.seed, "dc-placement");
    for (std::uint32_t i = 0; i < p_.n_dcs; ++i) {
        boost::random::uniform_int_distribution<std::uint32_t> pick(i, geo_.N - 1);
        std::swap(ports[i], ports[pick(rng)]);
    }
    placement_.assign(ports.begin(), ports.begin() + p_.n_dcs);
}

bool DcWorkloadGenerator::communicates(std::uint32_t sample) const {
    Rng rng = make_rng(p_.seed, "dc-comm", sample);
    return boost::random::bernoulli_distribution<double>(p_.beta_comm)(rng);
}

bool DcWorkloadGenerator::forward(std::uint32_t sample) const {
    Rng rng = make_rng(p_.seed, "dc-direction", sample);
    return boost::random::bernoulli_distribution<double>(0.5)(rng);
}

TrafficMatrix DcWorkloadGenerator::dc_traffic(std::uint32_t sample) const {
    TrafficMatrix tm(geo_.rows(), geo_.N);
    if (!communicates(sample) || p_.n_dcs < 2) return tm;
    const bool fwd = forward(sample);
    const std::uint32_t fw = geo_.F * geo_.W;
    const double per_port = p_.alpha_dc * fw;
    const double flow = per_port / p_.m_gpus;
    Rng ecmp = make_rng(p_.seed, "dc-ecmp", sample);
    boost::random::uniform_int_distribution<std::uint32_t> pick(0, fw - 1);

    std::vector<double> lane(fw);
    for (std::uint32_t stage = 0; stage < p_.n_dcs; ++stage) {
        if (fwd && stage + 1 >= p_.n_dcs) continue;
        if (!fwd && stage == 0) continue;
        const std::uint32_t src = placement_[stage];
        const std::uint32_t dst = placement_[fwd ? stage + 1 : stage - 1];
        std::fill(lane.begin(), lane.end(), 0.0);
        switch (p_.lb_scheme) {
        case LbScheme::Ecmp:
            for (std::uint32_t j = 0; j < p_.m_gpus; ++j) lane[pick(ecmp)] += flow;
            break;
        case LbScheme::RoundRobin:
            // fiber-interleaved striping: flow j -> fiber j mod F, wavelength (j / F) mod W
            for (std::uint32_t j = 0; j < p_.m_gpus; ++j) {
                const std::uint32_t fiber = j % geo_.F;
                const std::uint32_t lambda = (j / geo_.F) % geo_.W;
                lane[fiber * geo_.W + lambda] += flow;
            }
            break;
        case LbScheme::Adaptive:
            std::fill(lane.begin(), lane.end(), per_port / fw);
            break;
        }
        for (std::uint32_t l = 0; l < fw; ++l) {
            const double v = std::min(lane[l], p_.max_wavelength_load);
            tm.at(std::size_t(src) * fw + l, dst) += v;
        }
    }
    return tm;
}

TrafficMatrix DcWorkloadGenerator::sample_tm(std::uint32_t sample, FillStats* stats) const {
    TrafficMatrix tm = dc_traffic(sample);
    const double allowed = p_.max_wavelength_load;
    std::vector<double> row_cap(tm.rows());
    for (std::size_t r = 0; r < tm.rows(); ++r) row_cap[r] = std::max(0.0, allowed - tm.row_sum(r));
    const auto dc_cols = tm.col_sums();
    const auto w = zipf_weights(tm.cols(), p_.wan_zipf_s);
    std::vector<double> col_cap(tm.cols());
    for (std::size_t c = 0; c < tm.cols(); ++c)
        col_cap[c] = std::max(0.0, tm.column_capacity() * allowed * w[c] - dc_cols[c]);

    SyntheticTmParams sp;
    sp.rho = allowed;
    sp.zipf_s = p_.wan_zipf_s;
    sp.R_gbps = geo_.R_gbps;
    sp.flow = p_.flow;
    sp.rate_floor = p_.rate_floor;
    Rng rng = make_rng(p_.seed, "dc-wan", sample);
    const FillStats st = fill_balls_and_bins(tm, row_cap, col_cap, sp, rng);
    if (stats) *stats = st;
    return tm;
}

std::vector<TrafficMatrix> DcWorkloadGenerator::generate() const {
    std::vector<TrafficMatrix> out;
    out.reserve(p_.n_time_samples);
    for (std::uint32_t s = 0; s < p_.n_time_samples; ++s) out.push_back(sample_tm(s));
    return out;
}

} // namespace pbr
