#include "arelab/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using arelab::run_cli;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    return lines;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("arelab_cli_test_" + name);
}

} // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"nonsense"}).code == 2);
    const Run r = cli({"detect", "--no-such-flag"});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(cli({"grid", "--format", "json"}).code == 2);
}

TEST_CASE("config errors name the key") {
    const Run r = cli({"detect", "--nmol", "ten"});
    CHECK(r.code == 2);
    CHECK(r.err.find("n_molecules") != std::string::npos);
    const Run bad = cli({"grid", "--set", "warp=9"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("warp") != std::string::npos);
    const Run neg = cli({"grid", "--c", "-0.2"});
    CHECK(neg.code == 2);
    CHECK(neg.err.find("pitch") != std::string::npos);
}

TEST_CASE("metadata header") {
    const Run r = cli({"grid", "--seed", "99", "--n-int", "6"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# arelab ", 0) == 0);
    CHECK(r.out.find("# seed = 99") != std::string::npos);
    CHECK(r.out.find("# grid = hex") != std::string::npos);
    const auto lines = data_lines(r.out);
    CHECK(lines.front() == "index,ring,x_m,y_m,distance_m");
    CHECK(lines.size() == 8);
}

TEST_CASE("cir trace peaks at the sampling time") {
    const Run r = cli({"cir", "--tx-index", "0", "1", "--d", "0.5", "--diff", "0.01", "--t-step", "0.001", "--t-to", "5",
                       "--uca"});
    REQUIRE(r.code == 0);
    const auto lines = data_lines(r.out);
    CHECK(lines.front() == "t_s,cir_tx0,cir_tx1,uca_tx0,uca_tx1");
    double best = -1.0, t_best = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i]);
        double t, v;
        char comma;
        row >> t >> comma >> v;
        if (v > best) {
            best = v;
            t_best = t;
        }
    }
    CHECK(t_best == doctest::Approx(1.845).epsilon(1e-3));
}

TEST_CASE("detect reports thresholds") {
    const Run r = cli({"detect", "--n-int", "6"});
    REQUIRE(r.code == 0);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].find("theta_opt") != std::string::npos);
}

TEST_CASE("sweep CSV columns") {
    const Run r = cli({"are-sweep", "--c-from", "0.2", "--c-to", "0.6", "--points", "3"});
    REQUIRE(r.code == 0);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] ==
          "axis_value,theta_opt,theta_sub,p,q,ber,link_rate_bits,spatial_rate_per_m2,are_bits_per_m2,sinr_worst,"
          "truncation_warning");
    CHECK(lines[1].rfind("0.2,", 0) == 0);

    const Run n = cli({"ber-sweep", "--axis", "n_molecules", "--values", "10", "100"});
    REQUIRE(n.code == 0);
    CHECK(data_lines(n.out).size() == 3);

    const Run g = cli({"grid-compare", "--values", "0.05", "0.2"});
    REQUIRE(g.code == 0);
    const auto gl = data_lines(g.out);
    REQUIRE(gl.size() == 5);
    CHECK(gl[1].rfind("hex,", 0) == 0);
    CHECK(gl[3].rfind("square,", 0) == 0);

    CHECK(cli({"are-sweep", "--axis", "colour", "--values", "1"}).code == 2);
    CHECK(cli({"are-sweep", "--values", "0.2", "-1"}).code == 2);
}

TEST_CASE("monte carlo output is reproducible") {
    const std::vector<std::string> args{"mc-validate", "--seed", "7", "--samples", "20000", "--mc-int", "36"};
    const Run a = cli(args), b = cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto lines = data_lines(a.out);
    CHECK(lines.front() == "theta,ber_hat,stderr,p_hat,q_hat");
    CHECK(lines.size() == 103);
    CHECK(lines.back().rfind("best=", 0) == 0);
    auto c = args;
    c[2] = "8";
    CHECK(cli(c).out != a.out);
}

TEST_CASE("pbs and radius subcommands") {
    const Run p = cli({"pbs-validate", "--realizations", "5", "--t-sim", "1", "--tx-index", "1"});
    REQUIRE(p.code == 0);
    const auto pl = data_lines(p.out);
    CHECK(pl.front() == "t_s,cir_hat,stderr,cir_analytic");
    CHECK(pl.size() == 101);

    const Run o = cli({"optimize-radius", "--w-max", "3"});
    REQUIRE(o.code == 0);
    CHECK(data_lines(o.out).size() == 4);
    CHECK(o.out.find("# best_w = ") != std::string::npos);
}

TEST_CASE("out file and config round trip") {
    const auto out1 = temp_path("a.csv"), out2 = temp_path("b.csv"), cfg = temp_path("cfg.ini");
    const Run first = cli({"mc-validate", "--samples", "5000", "--mc-int", "18", "--nmol", "50", "--cnoise", "3",
                           "--seed", "11", "--out", out1.string(), "--write-config", cfg.string()});
    REQUIRE(first.code == 0);
    CHECK(first.out.empty());
    const Run second = cli({"mc-validate", "--config", cfg.string(), "--out", out2.string()});
    REQUIRE(second.code == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(!slurp(out1).empty());

    const Run override_run = cli({"grid", "--config", cfg.string(), "--grid", "square"});
    REQUIRE(override_run.code == 0);
    CHECK(override_run.out.find("# grid = square") != std::string::npos);
    std::filesystem::remove(out1);
    std::filesystem::remove(out2);
    std::filesystem::remove(cfg);
}
