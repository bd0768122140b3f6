#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <string>

#ifndef KINSBP_CLI_PATH
#error "KINSBP_CLI_PATH must be defined"
#endif

namespace {

int run(const std::string& args) {
  const std::string cmd =
      std::string(KINSBP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void shell(const std::string& cmd) {
  if (std::system(cmd.c_str()) != 0) FAIL("helper command failed: " << cmd);
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  return std::string(std::istreambuf_iterator<char>(is),
                     std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("verification suites exit cleanly") {
  CHECK(run("verify sbp") == 0);
  CHECK(run("verify diag") == 0);
  CHECK(run("sbp-verify --nodes 6") == 0);
  CHECK(run("diag-verify --nv 2 --epsilon 1") == 0);
}

TEST_CASE("configuration errors exit with code 2") {
  CHECK(run("") == 2);
  CHECK(run("no-such-command") == 2);
  CHECK(run("convergence --elements 5") == 2);          // needs two counts
  CHECK(run("convergence --epsilon 0.9 --elements 5 --elements 10") == 2);
  CHECK(run("dirichlet-inflow --velocity nope") == 2);
}

TEST_CASE("convergence output is byte-identical across runs") {
  const std::string dir_a = "cli_out_a", dir_b = "cli_out_b";
  shell(("mkdir -p " + dir_a + " " + dir_b).c_str());
  const std::string flags =
      "convergence --epsilon 1e-2 --nodes 2 --elements 4 --elements 8 --out ";
  REQUIRE(run(flags + dir_a) == 0);
  REQUIRE(run(flags + dir_b) == 0);
  const std::string name = "/convergence_eps0.01_N2.csv";
  const std::string a = slurp(dir_a + name);
  const std::string b = slurp(dir_b + name);
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a.rfind("epsilon,K,err_rho,order_rho,err_g,order_g\n", 0) == 0);
  shell(("rm -rf " + dir_a + " " + dir_b).c_str());
}

TEST_CASE("source subcommand runs its default coarse configuration") {
  const std::string dir = "cli_out_src";
  shell(("mkdir -p " + dir).c_str());
  CHECK(run("dirichlet-source --out " + dir) == 0);
  CHECK(run("dirichlet-source --no-source --nodes 3 --slabs 10 --time-nodes 0 "
            "--out " +
            dir) == 0);
  const std::string csv = slurp(dir + "/source_energy.csv");
  CHECK(csv.rfind("slab,", 0) == 0);
  shell(("rm -rf " + dir).c_str());
}

TEST_CASE("gnuplot flag emits a plot script") {
  const std::string dir = "cli_out_gp";
  shell(("mkdir -p " + dir).c_str());
  REQUIRE(run("convergence --epsilon 1e-2 --nodes 2 --elements 4 --elements 8 "
              "--gnuplot --out " +
              dir) == 0);
  const std::string gp = slurp(dir + "/convergence.gp");
  CHECK(gp.find("plot") != std::string::npos);
  shell(("rm -rf " + dir).c_str());
}

TEST_CASE("inflow subcommand writes profiles at the report times") {
  const std::string dir = "cli_out_inflow";
  shell(("mkdir -p " + dir).c_str());
  REQUIRE(run("dirichlet-inflow --epsilon 1 --elements 5 --nodes 2 --out " +
              dir) == 0);
  const std::string csv = slurp(dir + "/inflow_eps1_N2.csv");
  CHECK(csv.rfind("time,x,rho\n", 0) == 0);
  for (const char* t : {"\n0.1000", "\n0.4000", "\n1,", "\n1.6000", "\n4,"}) {
    CHECK(csv.find(t) != std::string::npos);
  }
  shell(("rm -rf " + dir).c_str());
}
