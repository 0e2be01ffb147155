#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace {

struct Run {
    int status = -1;
    std::string output;
};

Run cli(const std::string& args) {
    Run r;
    const std::string command = std::string(CIREST_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

int column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    FAIL("missing column " << name);
    return -1;
}

} // namespace

TEST_CASE("tri-report") {
    const Run r = cli("tri-report 0 0 1 0 0 1");
    REQUIRE(r.status == 0);
    const auto t = rows(r.output);
    REQUIRE(t.size() == 2);
    CHECK(std::stod(t[1][column(t[0], "R_K")]) == doctest::Approx(0.70710678118654757).epsilon(1e-15));
    CHECK(std::stod(t[1][column(t[0], "C_K")]) == doctest::Approx(0.4916).epsilon(1e-4));
    // Negative coordinates are values, not flags.
    CHECK(cli("tri-report 0 0 -1 0 0 -1").status == 0);
    CHECK(cli("tri-report 0 0 1 0 2 0").status == 2);
    CHECK(cli("tri-report 0 0 1").status == 2);
}

TEST_CASE("interp-error") {
    const Run r = cli("interp-error --k 1 --m 1 --p 2 --family example1-right --h-min 1e-3 --h-max 1e-1 --samples 3");
    REQUIRE(r.status == 0);
    const auto t = rows(r.output);
    REQUIRE(t.size() == 4);
    CHECK(t[0] == std::vector<std::string>{"h", "h_K", "R_K", "rho_K", "error", "circumradius_bound",
                                           "classical_bound", "ratio"});
    CHECK(std::stod(t[1][0]) == doctest::Approx(0.1));
    CHECK(std::stod(t[3][0]) == doctest::Approx(1e-3));
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double err = std::stod(t[i][4]);
        const double bound = std::stod(t[i][5]);
        CHECK(std::stod(t[i][7]) == doctest::Approx(err / bound).epsilon(1e-12));
    }
    CHECK(cli("interp-error --family random --samples 2 --p inf --seed 3").status == 0);
    CHECK(cli("interp-error --p 0.5").status == 2);
    CHECK(cli("interp-error --family square").status == 2);
}

TEST_CASE("constants") {
    const Run r = cli("constants --k 1 --m 1 --p 2 --alpha 1,0.5 --beta 1,0.05 --basis-degree 6");
    REQUIRE(r.status == 0);
    const auto t = rows(r.output);
    REQUIRE(t.size() == 4);
    CHECK(t[1][column(t[0], "kind")] == "exact-root");
    CHECK(std::stod(t[1][column(t[0], "value")]) == doctest::Approx(0.49291).epsilon(2e-5));
    for (std::size_t i = 2; i < t.size(); ++i) {
        CHECK(t[i][column(t[0], "kind")] == "rayleigh-lower-bound");
        CHECK(std::stod(t[i][column(t[0], "value")]) <= std::stod(t[i][column(t[0], "upper_bound")]));
    }
    CHECK(cli("constants --k 1 --m 2").status == 2);
    CHECK(cli("constants --alpha 1,2 --beta 1,1,1").status == 2);
}

TEST_CASE("dq-verify and verify-all") {
    const Run dq = cli("dq-verify");
    CHECK(dq.status == 0);
    CHECK(dq.output.find("FAIL") == std::string::npos);
    const Run a = cli("verify-all --seed 1");
    const Run b = cli("verify-all --seed 1");
    CHECK(a.status == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.rfind("module,check,value,tolerance,status\n", 0) == 0);
    CHECK(cli("--seed 1 verify-all").output == a.output);
}

TEST_CASE("mesh-dump and mesh-stats") {
    const Run csv = cli("mesh-dump --N 4 --alpha 1.5");
    REQUIRE(csv.status == 0);
    CHECK(csv.output.rfind("type,index,a,b,c\n", 0) == 0);
    const Run off = cli("mesh-dump --N 4 --alpha 1.5 --format off");
    REQUIRE(off.status == 0);
    CHECK(off.output.rfind("OFF\n", 0) == 0);
    const Run stats = cli("mesh-stats --N 12 --alpha 1.6 --pattern center-split");
    REQUIRE(stats.status == 0);
    const auto t = rows(stats.output);
    REQUIRE(t.size() == 2);
    CHECK(t[1][column(t[0], "pattern")] == "center-split");
    CHECK(std::stod(t[1][column(t[0], "area")]) == doctest::Approx(4.0));
    CHECK(cli("mesh-stats --N 1").status == 2);
    CHECK(cli("mesh-dump --format vtk").status == 2);
}

TEST_CASE("convergence") {
    const std::string path = "cli_convergence_test.csv";
    const Run r = cli("convergence --k 1 --alphas 2.1 --Ns 8,16,32 --out " + path);
    REQUIRE(r.status == 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto t = rows(ss.str());
    REQUIRE(t.size() == 4);
    CHECK(t[0] == std::vector<std::string>{"alpha", "N", "max_h", "max_R", "max_R_h_km1", "h1_error",
                                           "cg_iterations", "converged"});
    for (std::size_t i = 2; i < t.size(); ++i) CHECK(std::stod(t[i][5]) >= std::stod(t[i - 1][5]));
    std::remove(path.c_str());
    // A zero tolerance cannot be met: the failed row is still written and the exit code says so.
    const Run failed = cli("convergence --k 1 --alphas 1.5 --Ns 8 --tol 0");
    CHECK(failed.status == 3);
    CHECK(failed.output.find(",0\n") != std::string::npos);
}

TEST_CASE("usage and i/o errors") {
    CHECK(cli("").status == 2);
    CHECK(cli("no-such-command").status == 2);
    CHECK(cli("mesh-stats --bogus 1").status == 2);
    const Run io = cli("verify-all -o /nonexistent-dir/out.csv");
    CHECK(io.status == 2);
    CHECK(io.output.find("/nonexistent-dir/out.csv") != std::string::npos);
    CHECK(cli("--help").status == 0);
}
