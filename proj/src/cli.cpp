#include <pbr/cli.hpp>
#include <pbr/error.hpp>
#include <pbr/hbm_sim.hpp>
#include <pbr/hbm_timing.hpp>
#include <pbr/io.hpp>
#include <pbr/oracle.hpp>
#include <pbr/report.hpp>
#include <pbr/sps.hpp>
#include <pbr/traffic.hpp>
#include <pbr/workload.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace pbr {
namespace {

struct Common {
    std::string config_path;
    std::string preset;
    std::string out_path;
};

struct Geometry {
    std::optional<std::uint32_t> N, F, W, H;
};

class Cli {
public:
    Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(const std::vector<std::string>& args);

private:
    std::ostream& out_;
    std::ostream& err_;
    CLI::App app_{"Petabit router-in-a-package simulator", "pbr"};
    Common common_;

    ConfigFile config() const {
        ConfigFile c;
        if (common_.preset == "desk") {
            c.cfg = desk_config();
            c.timing = desk_timing();
            c.sim.frames_per_phase = 1;
        }
        if (!common_.config_path.empty()) c = load_config(common_.config_path);
        return c;
    }

    void emit(const YAML::Node& report) const {
        if (common_.out_path.empty()) out_ << emit_report(report);
        else write_report(report, common_.out_path);
    }

    static ExperimentSpec spec_of(const CLI::App* sub) {
        ExperimentSpec s;
        s.subcommand = sub->get_name();
        for (const CLI::Option* o : sub->get_options()) {
            if (o->count() == 0 || o->get_single_name() == "help") continue;
            std::string v;
            for (const auto& r : o->results()) v += (v.empty() ? "" : ",") + r;
            s.flags[o->get_single_name()] = v;
        }
        return s;
    }

    static void add_common(CLI::App* sub, Common& c) {
        sub->add_option("--config", c.config_path, "INI configuration file")->check(CLI::ExistingFile);
        sub->add_option("--preset", c.preset, "base configuration")->check(CLI::IsMember({"reference", "desk"}));
        sub->add_option("--out", c.out_path, "report path (default stdout)");
    }

    static void add_geometry(CLI::App* sub, Geometry& g) {
        sub->add_option("--N", g.N, "ports");
        sub->add_option("--F", g.F, "fibers per port");
        sub->add_option("--W", g.W, "wavelengths per fiber");
        sub->add_option("--H", g.H, "HBM switches");
    }

    static SplitGeometry split_geometry(const SwitchConfig& c, const Geometry& g) {
        SplitGeometry s{c.N, c.F, c.W, c.H};
        if (g.N) s.N = *g.N;
        if (g.F) s.F = *g.F;
        if (g.W) s.W = *g.W;
        if (g.H) s.H = *g.H;
        if (!s.N || !s.F || !s.W || !s.H || s.F % s.H)
            throw Error(ErrorKind::InvalidConfig, "io_cli", "fiber split needs positive N, F, W, H with H dividing F");
        return s;
    }
};

[[noreturn]] void usage(const std::string& msg) { throw CLI::ValidationError(msg); }

int Cli::run(const std::vector<std::string>& args) {
    app_.require_subcommand(1);
    app_.set_version_flag("--version", std::string(kToolVersion));

    // analyze
    auto* analyze = app_.add_subcommand("analyze", "closed-form sizing, power and area");
    add_common(analyze, common_);

    // generate-tm
    auto* gen = app_.add_subcommand("generate-tm", "synthetic admissible traffic matrix");
    add_common(gen, common_);
    std::uint64_t seed = 0;
    SyntheticTmParams syn;
    std::optional<std::size_t> rows, cols;
    std::string tm_out;
    gen->add_option("--seed", seed, "master seed")->required();
    gen->add_option("--rho", syn.rho, "per-wavelength load limit");
    gen->add_option("--zipf", syn.zipf_s, "output skew exponent");
    gen->add_option("--rows", rows, "rows (default N*F*W)");
    gen->add_option("--cols", cols, "columns (default N)");
    gen->add_option("--tm-out", tm_out, "matrix CSV path")->required();

    // resize-tm
    auto* resize = app_.add_subcommand("resize-tm", "grow a matrix by repeated splitting");
    add_common(resize, common_);
    std::string tm_in;
    double alpha_split = 0.5;
    bool no_rescale = false;
    resize->add_option("--tm", tm_in, "input matrix CSV")->required()->check(CLI::ExistingFile);
    resize->add_option("--alpha-split", alpha_split, "share given to the first child")->check(CLI::Range(0.0, 1.0));
    resize->add_option("--rows", rows, "target rows")->required();
    resize->add_option("--cols", cols, "target columns")->required();
    resize->add_flag("--no-rescale", no_rescale, "keep the split values unscaled");
    resize->add_option("--tm-out", tm_out, "matrix CSV path")->required();

    // tm-from-flows
    auto* flows = app_.add_subcommand("tm-from-flows", "hash flow records into a matrix");
    add_common(flows, common_);
    std::string flows_in, hash_name = "md5";
    flows->add_option("--flows", flows_in, "flow CSV src_key,dst_key,rate_mbps")->required()->check(CLI::ExistingFile);
    flows->add_option("--rows", rows, "rows")->required();
    flows->add_option("--cols", cols, "columns")->required();
    flows->add_option("--hash", hash_name, "hash function")->check(CLI::IsMember({"md5", "sha256"}));
    flows->add_option("--tm-out", tm_out, "matrix CSV path")->required();

    // dc-workload
    auto* dc = app_.add_subcommand("dc-workload", "cross-DC pipeline traffic matrices");
    add_common(dc, common_);
    DcWorkloadParams dcp;
    std::string lb = "ecmp", out_dir;
    dc->add_option("--seed", dcp.seed, "master seed")->required();
    dc->add_option("--n-dcs", dcp.n_dcs, "data centers");
    dc->add_option("--m-gpus", dcp.m_gpus, "pipeline stages per DC");
    dc->add_option("--alpha-dc", dcp.alpha_dc, "DC traffic share");
    dc->add_option("--beta", dcp.beta_comm, "probability a sample communicates");
    dc->add_option("--max-load", dcp.max_wavelength_load, "per-wavelength cap");
    dc->add_option("--samples", dcp.n_time_samples, "time samples");
    dc->add_option("--lb", lb, "load balancing")->check(CLI::IsMember({"ecmp", "rr", "ar"}));
    dc->add_option("--out-dir", out_dir, "directory for sample CSVs")->required();

    // evaluate-sps
    auto* eval = app_.add_subcommand("evaluate-sps", "fluid loss of the fiber split");
    add_common(eval, common_);
    Geometry geo;
    add_geometry(eval, geo);
    std::string mode = "fiber-split", scaling = "none";
    std::uint32_t trials = 100;
    std::optional<std::uint64_t> eval_seed;
    eval->add_option("--tm", tm_in, "matrix CSV or directory of CSVs")->required()->check(CLI::ExistingPath);
    eval->add_option("--trials", trials, "assignment trials")->check(CLI::PositiveNumber);
    eval->add_option("--seed", eval_seed, "master seed");
    eval->add_option("--mode", mode, "evaluation mode")
        ->check(CLI::IsMember({"fiber-split", "flow-random", "first-fiber"}));
    eval->add_option("--scaling", scaling, "saturation scaling")->check(CLI::IsMember({"none", "global", "per-router"}));

    // simulate-switch and compare share the simulator flags
    SimOptions so;
    std::string workload_in, generate, trace_out, departures_out, gap_out;
    double load = 0.9, active = 0.4;
    std::uint64_t horizon = 0;
    std::optional<std::uint64_t> gen_seed;
    bool with_oracle = false, no_straddle = false;
    std::int64_t padding_timeout = -1;
    std::uint32_t stride = 1;
    auto sim_flags = [&](CLI::App* sub) {
        add_common(sub, common_);
        sub->add_option("--workload", workload_in, "workload CSV")->check(CLI::ExistingFile);
        sub->add_option("--generate", generate, "built-in workload")
            ->check(CLI::IsMember({"frame-only", "subframe", "overload", "lone"}));
        sub->add_option("--load", load, "offered load or overload factor");
        sub->add_option("--horizon", horizon, "generator horizon in slots");
        sub->add_option("--active-fraction", active, "subframe traffic share of the horizon");
        sub->add_option("--seed", gen_seed, "generator seed");
        sub->add_option("--slots", so.slots, "run length (0 picks a drain margin)");
        sub->add_option("--padding-timeout", padding_timeout, "padding timeout in slots");
        sub->add_flag("--bypass", so.bypass, "read frames straight from the tail when memory is empty");
        sub->add_option("--speedup-n", so.speedup_n, "one marked slot every n slots");
        sub->add_option("--frames-per-phase", so.frames_per_phase, "frames per write or read phase");
        sub->add_option("--marked-min-age", so.marked_min_age, "minimum age of a marked batch");
        sub->add_option("--hbm-capacity", so.hbm_capacity_frames, "memory capacity in frames");
        sub->add_flag("--no-straddle", no_straddle, "pad a batch instead of splitting a packet");
        sub->add_flag("--assert-bounds", so.assert_bounds, "fail on the first SRAM bound excess");
        sub->add_option("--departures-out", departures_out, "per-packet departure CSV");
    };
    auto* sim = app_.add_subcommand("simulate-switch", "slot-level HBM switch simulation");
    sim_flags(sim);
    sim->add_option("--trace-out", trace_out, "command trace CSV");
    sim->add_flag("--oracle", with_oracle, "also run the output-queued reference");
    auto* cmp = app_.add_subcommand("compare", "mimic and throughput comparison against the reference");
    sim_flags(cmp);
    cmp->add_option("--gap-out", gap_out, "throughput gap series CSV");
    cmp->add_option("--gap-stride", stride, "gap sample stride")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app_.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out_ << app_.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out_ << app_.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out_ << kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err_ << "pbr: " << e.what() << "\n";
        if (app_.get_subcommands().empty()) err_ << app_.help();
        return kExitUsage;
    }

    CLI::App* sub = app_.get_subcommands().front();
    const ExperimentSpec spec = spec_of(sub);
    try {
        const ConfigFile cf = config();
        YAML::Node rep = report_header(spec);

        if (sub == analyze) {
            const DerivedConfig d = derive_and_validate(cf.cfg, cf.timing);
            rep["config"] = config_node(d);
            rep["analysis"] = analysis_node(design_analysis(d, cf.analysis));
        } else if (sub == gen) {
            const DerivedConfig d = derive_and_validate(cf.cfg, cf.timing);
            syn.R_gbps = cf.cfg.R_gbps;
            const TmDims dims{rows.value_or(std::size_t(d.cfg.N) * d.cfg.F * d.cfg.W), cols.value_or(d.cfg.N)};
            FillStats st;
            const TrafficMatrix tm = build_synthetic_tm(syn, dims, seed, &st);
            save_tm(tm, tm_out);
            rep["seed"] = seed;
            YAML::Node r;
            r["rows"] = tm.rows();
            r["cols"] = tm.cols();
            r["total_load"] = num(tm.total());
            r["flows_inserted"] = st.flows_inserted;
            r["flows_rejected"] = st.flows_rejected;
            r["admissible"] = tm.is_admissible();
            rep["result"] = r;
        } else if (sub == resize) {
            const TrafficMatrix tm = resize_tm(load_tm(tm_in), alpha_split, *rows, *cols, !no_rescale);
            save_tm(tm, tm_out);
            YAML::Node r;
            r["rows"] = tm.rows();
            r["cols"] = tm.cols();
            r["total_load"] = num(tm.total());
            r["saturation_scale"] = num(tm.saturation_scale());
            rep["result"] = r;
        } else if (sub == flows) {
            const auto recs = load_flows(flows_in);
            const TrafficMatrix tm = tm_from_flows(recs, {*rows, *cols}, hash_name);
            save_tm(tm, tm_out);
            YAML::Node r;
            r["flows"] = recs.size();
            r["rows"] = tm.rows();
            r["cols"] = tm.cols();
            r["total_load"] = num(tm.total());
            rep["result"] = r;
        } else if (sub == dc) {
            const DerivedConfig d = derive_and_validate(cf.cfg, cf.timing);
            dcp.lb_scheme = lb_scheme_from_string(lb);
            const PortGeometry pg{d.cfg.N, d.cfg.F, d.cfg.W, d.cfg.R_gbps};
            const auto tms = gen_dc_workload(dcp, pg);
            std::filesystem::create_directories(out_dir);
            YAML::Node files(YAML::NodeType::Sequence);
            for (std::size_t s = 0; s < tms.size(); ++s) {
                char name[32];
                std::snprintf(name, sizeof name, "sample_%04zu.csv", s);
                save_tm(tms[s], (std::filesystem::path(out_dir) / name).string());
                files.push_back(std::string(name));
            }
            rep["config"] = config_node(d);
            rep["seed"] = dcp.seed;
            rep["result"]["samples"] = tms.size();
            rep["result"]["files"] = files;
        } else if (sub == eval) {
            EvalParams ep;
            ep.geo = split_geometry(cf.cfg, geo);
            ep.n_trials = trials;
            ep.mode = eval_mode_from_string(mode);
            ep.scaling = scale_mode_from_string(scaling);
            if (ep.mode != EvalMode::FirstFiber && !eval_seed) usage("--seed is required for randomized modes");
            ep.seed = eval_seed.value_or(0);
            const LossReport lr = evaluate(load_tm_set(tm_in), ep);
            YAML::Node g;
            g["N"] = ep.geo.N;
            g["F"] = ep.geo.F;
            g["W"] = ep.geo.W;
            g["H"] = ep.geo.H;
            g["alpha"] = ep.geo.alpha();
            rep["geometry"] = g;
            rep["seed"] = ep.seed;
            rep["loss"] = loss_node(lr);
        } else {
            const DerivedConfig d = derive_and_validate(cf.cfg, cf.timing);
            if (workload_in.empty() == generate.empty()) usage("give exactly one of --workload and --generate");
            SimOptions opt = cf.sim;
            if (sub->count("--slots")) opt.slots = so.slots;
            if (sub->count("--padding-timeout")) opt.padding_timeout = padding_timeout;
            if (so.bypass) opt.bypass = true;
            if (sub->count("--speedup-n")) opt.speedup_n = so.speedup_n;
            if (sub->count("--frames-per-phase")) opt.frames_per_phase = so.frames_per_phase;
            if (sub->count("--marked-min-age")) opt.marked_min_age = so.marked_min_age;
            if (sub->count("--hbm-capacity")) opt.hbm_capacity_frames = so.hbm_capacity_frames;
            if (no_straddle) opt.allow_straddle = false;
            if (so.assert_bounds) opt.assert_bounds = true;
            opt.record_commands = sub == sim;

            Workload w;
            if (!workload_in.empty()) {
                w = load_workload(workload_in);
            } else {
                if (generate != "lone" && !gen_seed) usage("--seed is required with --generate");
                const std::uint64_t hz = horizon ? horizon : 100000;
                const std::uint64_t s = gen_seed.value_or(0);
                if (generate == "frame-only") w = gen_frame_only_workload(d, load, hz, s);
                else if (generate == "subframe") w = gen_subframe_workload(d, load, hz, active, s);
                else if (generate == "overload") w = gen_overload_workload(d, load, hz, s);
                else w = lone_packet(0, 0, 64);
                rep["seed"] = s;
            }
            rep["config"] = config_node(d);

            if (sub == sim && !with_oracle) {
                const SimTrace tr = pbr::run(w, d, opt);
                const TimingCheck tc = check_timing(tr.commands, d);
                rep["simulation"] = sim_node(tr, &tc);
                if (!trace_out.empty()) save_command_trace(tr.commands, trace_out);
                if (!departures_out.empty()) {
                    std::ofstream f(departures_out);
                    if (!f) throw Error(ErrorKind::IoError, "io_cli", "cannot write " + departures_out);
                    f << "packet,departure_slot\n";
                    for (std::size_t n = 0; n < tr.departure.size(); ++n) f << n << ',' << tr.departure[n] << '\n';
                }
                emit(rep);
                return tc.ok() ? kExitOk : kExitFailure;
            }
            const MimicReport m = compare_mimic(w, d, opt, stride);
            TimingCheck tc;
            if (sub == sim) tc = check_timing(m.sim.commands, d);
            rep["simulation"] = sim_node(m.sim, sub == sim ? &tc : nullptr);
            rep["mimic"] = mimic_node(m);
            if (sub == sim && !trace_out.empty()) save_command_trace(m.sim.commands, trace_out);
            if (!departures_out.empty()) {
                std::ofstream f(departures_out);
                if (!f) throw Error(ErrorKind::IoError, "io_cli", "cannot write " + departures_out);
                f << "packet,oracle_slot,hbm_slot\n";
                for (std::size_t n = 0; n < w.size(); ++n)
                    f << n << ',' << m.oracle.departure[n] << ',' << m.sim.departure[n] << '\n';
            }
            if (!gap_out.empty()) {
                std::ofstream f(gap_out);
                if (!f) throw Error(ErrorKind::IoError, "io_cli", "cannot write " + gap_out);
                f << "slot,gap_slices\n";
                for (std::size_t n = 0; n < m.gap.series.size(); ++n)
                    f << n * m.gap.stride << ',' << format_double(m.gap.series[n]) << '\n';
            }
            emit(rep);
            return tc.ok() ? kExitOk : kExitFailure;
        }
        emit(rep);
        return kExitOk;
    } catch (const CLI::ValidationError& e) {
        err_ << "pbr " << sub->get_name() << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err_ << "pbr " << sub->get_name() << ": " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err_ << "pbr " << sub->get_name() << ": " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return Cli(out, err).run(args);
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int n = 1; n < argc; ++n) args.emplace_back(argv[n]);
    return run_cli(args, out, err);
}

} // namespace pbr
