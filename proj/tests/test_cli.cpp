#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string outfile = "cli_test_output.tmp";
    std::string cmd = std::string(ASIANLAG_CLI_PATH) + " " + args + " > " + outfile + " 2>&1";
    int rc = std::system(cmd.c_str());
    std::ifstream f(outfile, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    std::remove(outfile.c_str());
    int code = -1;
    if (rc != -1) code = WEXITSTATUS(rc);
    return {code, ss.str()};
}

}  // namespace

TEST_CASE("exit 0: degenerate price run (closed form, no series)") {
    RunResult r = run_cli("price --nu 1 --h 0.0225 --q -0.01 --digits 60 --format json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("degenerate") != std::string::npos);
    CHECK(r.out.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("exit 2: series hypothesis violation names the failed condition") {
    RunResult r = run_cli("price --nu 1 --h 0.0225 --q 0.0225 --c 23 --terms 5 --digits 60");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("qc < 1/2") != std::string::npos);
}

TEST_CASE("exit 2: incomplete parameter block") {
    RunResult r = run_cli("price --nu 1 --h 0.0225 --c 1 --digits 60");
    CHECK(r.exit_code == 2);
}

TEST_CASE("exit 3: slow series flagged as non-converged") {
    RunResult r = run_cli(
        "price --nu 1 --h 0.0225 --q 0.0225 --c 1.367054258545 --terms 19 --digits 80");
    CHECK(r.exit_code == 3);
}

TEST_CASE("exit 0: converged accelerated run") {
    RunResult r = run_cli(
        "price --nu 1 --h 0.0225 --q 0.0225 --c 6 --terms 60 --digits 80 --accelerate "
        "--conv-tol 1e-6 --format json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("accelerated_normalized") != std::string::npos);
}

TEST_CASE("exit 1: validation failure path in the check suite") {
    RunResult r = run_cli(
        "check --digits 60 --skip-density --paths 20000 --mc-sigmas 0.000001");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("csv output is byte-stable across runs") {
    std::string args = "theta --nu 1 --h 0.0225 --terms 3 --digits 80 --format csv";
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("n,n_c30,n_d30,theta_n") == 0);
}

TEST_CASE("moments subcommand emits the requested table") {
    RunResult r = run_cli("moments --nu 1 --h 0.0225 --terms 3 --digits 80 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("43.7837269185") != std::string::npos);
}

TEST_CASE("tables subcommand reproduces the theta growth table") {
    RunResult r = run_cli("tables --which 1 --digits 120");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1,4,4,44.2790749547") != std::string::npos);
    CHECK(r.out.find("19,4,4,4164445349148560860975785222305.1797500863") != std::string::npos);
}

TEST_CASE("json output carries the documented schema") {
    RunResult r = run_cli(
        "price --nu 1 --h 0.0225 --q 0.0225 --c 6 --terms 8 --digits 60 --format json "
        "--conv-tol 1");
    CHECK(r.out.find("\"config\"") != std::string::npos);
    CHECK(r.out.find("\"results\"") != std::string::npos);
    CHECK(r.out.find("\"diagnostics\"") != std::string::npos);
    CHECK(r.out.find("\"residuals\"") != std::string::npos);
}

TEST_CASE("config file supplies defaults, flags override") {
    {
        std::ofstream f("cli_test_config.tmp");
        f << "terms=3\ndigits=80\nformat=csv\nnu=1\nh=0.0225\n";
    }
    RunResult r = run_cli("theta --config cli_test_config.tmp");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("44.2790749547") != std::string::npos);
    RunResult r2 = run_cli("theta --config cli_test_config.tmp --terms 1");
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.find("\n2,") == std::string::npos);
    std::remove("cli_test_config.tmp");
}
