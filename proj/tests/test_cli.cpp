#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "nmq/cli.hpp"

using namespace nmq;
using namespace nmq::cli;

namespace {

struct Run {
    int code;
    std::string out;
};

// stderr is merged into the captured output
Run nmq_run(const std::string& args) {
    const std::string cmd = std::string(NMQ_CLI_PATH) + " " + args + " 2>&1";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, f)) out.append(buf, n);
    const int st = pclose(f);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
    std::vector<std::vector<std::string>> r;
    std::stringstream ss(csv);
    bool header = true;
    for (std::string line; std::getline(ss, line);) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        r.push_back(cells);
    }
    return r;
}

}  // namespace

TEST_CASE("config keys, precedence and serialization") {
    RunConfig cfg;
    apply_config_text(cfg, "# comment\nmethod = nm,markov\nx=0.1  # trailing\n\ndt=0.1\n", "test");
    CHECK(cfg.methods == std::vector<std::string>{"nm", "markov"});
    CHECK(cfg.x == 0.1);
    cfg.set("beta-omega0", "3");
    CHECK(cfg.x == doctest::Approx(std::exp(-3.0)));
    cfg.set("initial", "custom:0.3,0.1,-0.2");
    CHECK(cfg.initial.state().rho10() == cplx(0.1, -0.2));
    CHECK_THROWS_AS(cfg.set("initial", "custom:0.3,0.5,0.5"), UsageError);
    CHECK_THROWS_AS(cfg.set("method", "nm,exact"), UsageError);
    CHECK_THROWS_AS(cfg.set("dt", "abc"), UsageError);
    CHECK_THROWS_AS(cfg.set("bogus", "1"), UsageError);
    try {
        cfg.set("n-modes", "-3");
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        CHECK(e.flag == "--n-modes");
    }
    cfg.n_modes = 80;
    CHECK_THROWS_AS(cfg.validate(), UsageError);
}

TEST_CASE("serialized config re-parses to an equal config") {
    RunConfig cfg;
    cfg.methods = {"oracle", "nm"};
    cfg.x = std::exp(-2.7);
    cfg.gamma0_over_omega0 = 0.013;
    cfg.dt = 0.1 / 3.0;
    cfg.initial = InitialSpec::parse("custom:0.25,0.125,0.2", "--initial");
    cfg.absolute_time = true;
    cfg.oracle_ensemble = EnsembleChoice::Cluster;
    std::string text;
    for (const auto& kv : cfg.serialize()) text += "# config " + kv + "\n";
    CHECK(parse_header(text + "t_gamma,method\n") == cfg);
}

TEST_CASE("evolve: zero temperature decay, header round-trip, determinism") {
    const auto a = nmq_run("evolve --method zeroT --initial excited --tmax 2 --dt 0.5");
    REQUIRE(a.code == 0);
    const auto r = rows(a.out);
    REQUIRE(r.size() == 5);
    for (const auto& row : r) CHECK(std::stod(row[2]) == doctest::Approx(std::exp(-std::stod(row[0]))).epsilon(1e-11));
    CHECK(a.out.find("# nmq ") == 0);
    CHECK(a.out.find("t_gamma,method,rho11,rho00,re_rho10,im_rho10,abs_rho10\n") != std::string::npos);

    const auto b = nmq_run("evolve --method zeroT --initial excited --tmax 2 --dt 0.5");
    CHECK(a.out == b.out);

    RunConfig expect;
    expect.methods = {"zeroT"};
    expect.tmax = 2;
    expect.dt = 0.5;
    CHECK(parse_header(a.out) == expect);
}

TEST_CASE("config file is overridden by flags") {
    const auto path = std::filesystem::temp_directory_path() / "nmq_cli_test.cfg";
    {
        std::ofstream f(path);
        f << "method=nm\ntmax=1\ndt=0.5\nx=0.2\n";
    }
    const auto r = nmq_run("evolve --config " + path.string() + " --x 0.05");
    REQUIRE(r.code == 0);
    const auto cfg = parse_header(r.out);
    CHECK(cfg.x == 0.05);
    CHECK(cfg.tmax == 1.0);
    std::filesystem::remove(path);
}

TEST_CASE("rates: crossover value, markov constant, ratio near one half") {
    const auto r = nmq_run("rates --method nm,markov --tmax 5 --dt 0.5");
    REQUIRE(r.code == 0);
    const auto rs = rows(r.out);
    REQUIRE(rs.size() == 22);
    CHECK(std::stod(rs[0][2]) == doctest::Approx(1.105263).epsilon(1e-3));
    CHECK(std::stod(rs[1][2]) == doctest::Approx(21.0 / 19.0));
    for (const auto& row : rs) {
        if (row[1] == "nm") CHECK(std::stod(row[4]) == doctest::Approx(0.5).epsilon(0.01));
        if (row[1] == "markov") CHECK(std::stod(row[2]) == doctest::Approx(21.0 / 19.0));
    }
    CHECK(std::stod(rs[20][2]) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(nmq_run("rates --method zeroT").code == 2);
}

TEST_CASE("rates from oracle traces use finite differences") {
    const auto r = nmq_run("rates --method oracle --x 0 --n-modes 41 --tmax 1 --dt 0.1");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# note oracle:") != std::string::npos);
    const auto rs = rows(r.out);
    REQUIRE(rs.size() == 11);
    for (const auto& row : rs) CHECK_FALSE(row[2].empty());
    CHECK(std::stod(rs[10][2]) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(std::stod(rs[10][3]) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("proxies: pure starts and difference columns") {
    const auto r = nmq_run("proxies --method nm,markov --tmax 40 --dt 0.5");
    REQUIRE(r.code == 0);
    const auto rs = rows(r.out);
    CHECK(std::stod(rs[0][2]) == doctest::Approx(1.0));
    CHECK(std::stod(rs[0][3]) == doctest::Approx(0.0));
    for (const auto& row : rs) CHECK(std::stod(row[4]) >= 0.0);
    const auto& nm_last = rs[rs.size() - 2];
    const auto& mk_last = rs.back();
    CHECK(std::stod(nm_last[3]) == doctest::Approx(0.198515243345873).epsilon(1e-8));
    CHECK(std::stod(mk_last[3]) == doctest::Approx(0.191444081957717).epsilon(1e-8));
    const auto solo = rows(nmq_run("entanglement-proxies --method nm --tmax 1 --dt 0.5").out);
    CHECK(solo[0][4].empty());
}

TEST_CASE("exit codes and flag-naming errors") {
    auto r = nmq_run("evolve --n-modes 80 --method oracle");
    CHECK(r.code == 2);
    CHECK(r.out.find("--n-modes") != std::string::npos);
    r = nmq_run("evolve --dt -1");
    CHECK(r.code == 2);
    CHECK(r.out.find("--dt") != std::string::npos);
    r = nmq_run("evolve --x 0.1 --beta-omega0 2");
    CHECK(r.code == 2);
    r = nmq_run("evolve --no-such-flag 1");
    CHECK(r.code == 2);
    r = nmq_run("");
    CHECK(r.code == 2);
    r = nmq_run("evolve --method functional --x 0.05 --tmax 1 --dt 0.5");
    CHECK(r.code == 2);
    CHECK(r.out.find("--mmax") != std::string::npos);
    r = nmq_run("evolve --method oracle --oracle-ensemble truncated --tmax 1 --dt 0.5");
    CHECK(r.code == 2);
    CHECK(r.out.find("--oracle-ensemble") != std::string::npos);
    CHECK(nmq_run("--help").code == 0);
}

TEST_CASE("out flag and absolute time") {
    const auto path = std::filesystem::temp_directory_path() / "nmq_cli_out.csv";
    const auto r = nmq_run("evolve --method nm --tmax 1 --dt 0.5 --absolute-time --out " + path.string());
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str().find("\nt,method,") != std::string::npos);
    CHECK(std::stod(rows(ss.str()).back()[0]) == doctest::Approx(100.0));
    CHECK(parse_header(ss.str()).absolute_time);
    std::filesystem::remove(path);
}

TEST_CASE("oracle and functional agree through the CLI at zero temperature") {
    const auto a = rows(nmq_run("evolve --method oracle,functional --x 0 --n-modes 21 --tmax 2 --dt 0.5").out);
    REQUIRE(a.size() == 10);
    for (std::size_t i = 0; i < a.size(); i += 2) CHECK(std::stod(a[i][2]) == doctest::Approx(std::stod(a[i + 1][2])).epsilon(1e-8));
}

TEST_CASE("validate: coarse bath fails the convergence check, hot bath skips low-temperature checks") {
    auto r = nmq_run("validate --n-modes 11");
    CHECK(r.code == 1);
    auto j = nlohmann::json::parse(r.out);
    bool found = false;
    for (const auto& c : j["checks"])
        if (c["name"] == "0.oracle_convergence") {
            found = true;
            CHECK(c["pass"] == false);
            CHECK(c["detail"].get<std::string>().find("11->21") != std::string::npos);
        }
    CHECK(found);

    r = nmq_run("validate --x 0.5 --n-modes 11");
    j = nlohmann::json::parse(r.out);
    CHECK(j["warnings"].size() >= 1);
    int skipped = 0;
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("expected"));
        CHECK(c.contains("tolerance"));
        if (c["skipped"] == true) {
            CHECK_FALSE(c["reason"].get<std::string>().empty());
            if (c["reason"].get<std::string>().find("x < 0.2") != std::string::npos) ++skipped;
        }
    }
    CHECK(skipped >= 6);
}
