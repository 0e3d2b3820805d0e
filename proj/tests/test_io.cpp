#include <doctest.h>

#include <pbr/cli.hpp>
#include <pbr/error.hpp>
#include <pbr/io.hpp>
#include <pbr/report.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pbr;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of_tm(const std::string& text) {
    std::istringstream s(text);
    try {
        parse_tm(s, "t.csv");
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::IoError;
}

std::string message_of_tm(const std::string& text) {
    std::istringstream s(text);
    try {
        parse_tm(s, "t.csv");
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "pbr_tests" / name;
    fs::create_directories(p.parent_path());
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
    std::ostringstream o, e;
    const int rc = run_cli(args, o, e);
    if (out) *out = o.str();
    return rc;
}

} // namespace

TEST_CASE("traffic matrix CSV") {
    std::istringstream s("0.6,0.3\n0.3,0.6\n");
    const TrafficMatrix tm = parse_tm(s);
    REQUIRE(tm.rows() == 2);
    REQUIRE(tm.cols() == 2);
    CHECK(tm.at(0, 0) == 0.6);
    CHECK(tm.at(0, 1) == 0.3);
    CHECK(tm.at(1, 0) == 0.3);
    CHECK(tm.at(1, 1) == 0.6);

    CHECK(kind_of_tm("") == ErrorKind::ParseError);
    CHECK(kind_of_tm("0.1,0.2\n0.3\n") == ErrorKind::ParseError);
    CHECK(message_of_tm("0.1,0.2\n0.3\n").find("t.csv:2:") != std::string::npos);
    CHECK(kind_of_tm("0.1,x\n") == ErrorKind::ParseError);
    CHECK(message_of_tm("0.1,x\n").find("t.csv:1:2") != std::string::npos);
    CHECK(kind_of_tm("0.1,-0.2\n") == ErrorKind::NegativeLoad);

    const TrafficMatrix eq1 = load_tm(std::string(PBR_TEST_DATA) + "/eq1_tm.csv");
    const fs::path p = scratch("rt.csv");
    save_tm(eq1, p.string());
    CHECK(load_tm(p.string()) == eq1);
    CHECK_THROWS_AS(load_tm("/nonexistent/x.csv"), Error);
}

TEST_CASE("flow records") {
    std::istringstream s("src,dst,rate\na,b,1.5\nc,d,2\n");
    const auto f = parse_flows(s);
    REQUIRE(f.size() == 2);
    CHECK(f[0].src_key == "a");
    CHECK(f[1].rate_mbps == 2.0);
    std::istringstream bad("a,b,1\nc,d,zz\n");
    CHECK_THROWS_AS(parse_flows(bad), Error);
}

TEST_CASE("workload CSV uses 1-based ports") {
    std::istringstream s("arrival_slot,input,output,size_bytes\n0,1,4,64\n3,2,1,1500\n");
    const Workload w = parse_workload(s);
    REQUIRE(w.size() == 2);
    CHECK(w[0].input == 0);
    CHECK(w[0].output == 3);
    CHECK(w[1].size == 1500);
    const fs::path p = scratch("w.csv");
    save_workload(w, p.string());
    CHECK(load_workload(p.string()) == w);
    std::istringstream zero("0,0,1,64\n");
    CHECK_THROWS_AS(parse_workload(zero), Error);
}

TEST_CASE("command trace CSV") {
    std::ostringstream o;
    write_command_trace({{CmdKind::ACT, 0, 3, 12.5, 1, 7, 0}}, o);
    CHECK(o.str() == "time_ns,kind,channel,bank,frame_seq,segment\n12.5,ACT,0,3,7,0\n");
}

TEST_CASE("INI configuration") {
    std::istringstream s("[switch]\npreset = desk\nH = 2\n[timing]\nt_faw_ns = 25\n[sim]\nbypass = true\n");
    const ConfigFile c = parse_config(s);
    CHECK(c.cfg.N == 4);
    CHECK(c.cfg.H == 2);
    CHECK(c.timing.t_faw_ns == 25.0);
    CHECK(c.sim.bypass);
    CHECK(c.sim.frames_per_phase == 1);
    std::istringstream unknown("[switch]\nQ = 1\n");
    CHECK_THROWS_AS(parse_config(unknown), Error);
    std::istringstream bad("[switch]\nN = many\n");
    CHECK_THROWS_AS(parse_config(bad), Error);
}

TEST_CASE("doubles print in shortest round-trip form") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(0) == "0");
    CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("reports are deterministic and carry the experiment spec") {
    ExperimentSpec spec{"evaluate-sps", {{"mode", "first-fiber"}, {"tm", "x.csv"}, {"trials", "3"}}};
    YAML::Node r = report_header(spec);
    LossReport lr;
    lr.n_trials = 3;
    r["loss"] = loss_node(lr);
    const std::string a = emit_report(r);
    CHECK(a == emit_report(r));
    CHECK(a.find("network_loss_rate: 0\n") != std::string::npos);
    CHECK(a.find("version: ") != std::string::npos);
    CHECK(spec_from_report(a) == spec);
}

TEST_CASE("cli exit codes and outputs") {
    std::string out;
    CHECK(cli({"frobnicate"}, &out) == kExitUsage);
    CHECK(cli({}) == kExitUsage);
    CHECK(cli({"analyze", "--bogus"}) == kExitUsage);
    CHECK(cli({"analyze"}, &out) == kExitOk);
    CHECK(out.find("total_bytes: 14548960") != std::string::npos);
    CHECK(out.find("power_w_per_switch: 794.208") != std::string::npos);

    const std::string eq1 = std::string(PBR_TEST_DATA) + "/eq1_tm.csv";
    const std::vector<std::string> eval = {"evaluate-sps", "--tm", eq1, "--mode", "first-fiber", "--N", "2",
                                           "--F", "2", "--W", "1", "--H", "2", "--trials", "1"};
    REQUIRE(cli(eval, &out) == kExitOk);
    const YAML::Node n = YAML::Load(out);
    CHECK(n["loss"]["per_switch_loss"][0].as<double>() == doctest::Approx(0.1 / 1.8).epsilon(1e-12));
    const ExperimentSpec s = spec_from_report(out);
    CHECK(s.subcommand == "evaluate-sps");
    CHECK(s.flags.at("mode") == "first-fiber");
    CHECK(s.flags.at("tm") == eq1);
    CHECK(s.flags.at("H") == "2");

    // randomized modes need a seed; bad geometry is an input error
    CHECK(cli({"evaluate-sps", "--tm", eq1, "--N", "2", "--F", "2", "--W", "1", "--H", "2"}) == kExitUsage);
    CHECK(cli({"evaluate-sps", "--tm", eq1, "--seed", "1"}) == kExitFailure);

    const fs::path tm = scratch("gen.csv");
    const fs::path rep1 = scratch("gen1.yaml"), rep2 = scratch("gen2.yaml");
    const std::vector<std::string> gen = {"generate-tm", "--seed", "4", "--rows", "64", "--cols", "4", "--tm-out",
                                          tm.string()};
    auto with_out = [](std::vector<std::string> a, const fs::path& p) {
        a.push_back("--out");
        a.push_back(p.string());
        return a;
    };
    CHECK(cli(with_out(gen, rep1)) == kExitOk);
    const std::string first_tm = slurp(tm);
    CHECK(cli(with_out(gen, rep2)) == kExitOk);
    CHECK(slurp(tm) == first_tm);
    const std::string r1 = slurp(rep1), r2 = slurp(rep2);
    CHECK(r1.substr(r1.find("seed:")) == r2.substr(r2.find("seed:")));
    CHECK(load_tm(tm.string()).is_admissible());
}

TEST_CASE("cli binary runs as a process") {
    const std::string cmd = std::string(PBR_CLI_PATH) + " analyze > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    const std::string bad = std::string(PBR_CLI_PATH) + " nonsense > /dev/null 2>&1";
    const int rc = std::system(bad.c_str());
    CHECK(WEXITSTATUS(rc) == 2);
}

TEST_CASE("shipped config files match the presets") {
    const std::string dir = PBR_CONFIG_DIR;
    const ConfigFile ref = load_config(dir + "/reference.ini");
    CHECK(ref.cfg == reference_config());
    CHECK(ref.timing == reference_timing());
    const ConfigFile desk = load_config(dir + "/desk.ini");
    CHECK(desk.cfg == desk_config());
    CHECK(desk.timing == desk_timing());
    CHECK(desk.sim.frames_per_phase == 1);
}
