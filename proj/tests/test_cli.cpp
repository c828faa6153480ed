#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "hsi/report.hpp"

namespace {

int run_cli(const std::string& args, const std::string& redirect = "") {
    std::string cmd = std::string("\"") + HSI_CLI_PATH + "\" " + args;
    if (redirect.empty())
        cmd += " >/dev/null 2>&1";
    else
        cmd += " >" + redirect + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("verify emits a passing equality report on the round sphere") {
    const int code = run_cli(
        "verify --inequality carron_improved --surface sphere:n=3 "
        "--testfn constant --out cli_sphere.json");
    REQUIRE(code == 0);
    const nlohmann::json doc = nlohmann::json::parse(slurp("cli_sphere.json"));
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 1);
    REQUIRE(doc[0]["schema"] == "hil/1");
    REQUIRE(doc[0]["name"] == "carron_improved");
    REQUIRE(doc[0]["passed"] == true);
    const double lhs = doc[0]["lhs"].get<double>();
    const double rhs = doc[0]["rhs"].get<double>();
    REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-9));
    std::remove("cli_sphere.json");
}

TEST_CASE("verify output is byte-identical across runs") {
    const std::string args =
        "verify --inequality hardy_ibp --surface flat_annulus:r0=0.1,r1=1,n=3 "
        "--testfn radial_bump:delta=0.2,R=0.9 "
        "--testfn log_cutoff:eps=0.2,R=0.9 --p 2 --a 1 ";
    REQUIRE(run_cli(args + "--out cli_rep_a.json") == 0);
    REQUIRE(run_cli(args + "--out cli_rep_b.json") == 0);
    REQUIRE(slurp("cli_rep_a.json") == slurp("cli_rep_b.json"));
    std::remove("cli_rep_a.json");
    std::remove("cli_rep_b.json");
}

TEST_CASE("verify csv output starts with the documented header") {
    const int code = run_cli(
        "verify --inequality sobolev --surface sphere:n=3 --testfn constant "
        "--p 2 --format csv --out cli_rep.csv");
    REQUIRE(code == 0);
    std::istringstream in(slurp("cli_rep.csv"));
    std::string header, row;
    REQUIRE(std::getline(in, header));
    REQUIRE(header == hsi::InequalityReport::csv_header());
    REQUIRE(std::getline(in, row));
    REQUIRE(row.rfind("sobolev,", 0) == 0);
    std::remove("cli_rep.csv");
}

TEST_CASE("usage and input errors exit with code one") {
    // Missing required flags.
    REQUIRE(run_cli("verify --inequality hardy_ibp") == 1);
    // Unknown subcommand.
    REQUIRE(run_cli("frobnicate") == 1);
    // Weight exponent at the dimension: divergent integral, rejected.
    REQUIRE(run_cli("verify --inequality hardy_ibp --surface sphere:n=3 "
                    "--testfn constant --p 2 --a 3") == 1);
    // Unknown inequality name.
    REQUIRE(run_cli("verify --inequality nonsense --surface sphere:n=3 "
                    "--testfn constant") == 1);
    // Malformed quadrature override.
    REQUIRE(run_cli("verify --inequality sobolev --surface sphere:n=3 "
                    "--testfn constant --quad degree") == 1);
}

TEST_CASE("sharpness sweeps a family parameter into csv") {
    const int code = run_cli(
        "sharpness --inequality carron --surface flat_annulus:r1=1,n=3 "
        "--family-param \"r0=0.1;0.02\" --basis radial:33:log "
        "--out cli_sharp.csv");
    REQUIRE(code == 0);
    std::istringstream in(slurp("cli_sharp.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "surface,inequality,p,a,param,lambda_min,iterations");
    int rows = 0;
    double prev = 1e300;
    while (std::getline(in, line)) {
        ++rows;
        REQUIRE(line.front() == '"');  // surface spec is quoted
        // lambda_min is the second-to-last column.
        const auto last = line.rfind(',');
        const auto before = line.rfind(',', last - 1);
        const double lam = std::stod(line.substr(before + 1, last - before));
        REQUIRE(lam >= 1.0 - 1e-6);
        REQUIRE(lam < prev);  // wider annulus, smaller constant
        prev = lam;
    }
    REQUIRE(rows == 2);
    std::remove("cli_sharp.csv");
}
