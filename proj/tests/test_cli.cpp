// Exercises the installed CLI binary end to end: exit codes and output
// determinism. The binary path and data dir come from the build system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifndef WEYLZETA_CLI_PATH
#define WEYLZETA_CLI_PATH "./weylzeta"
#endif
#ifndef WEYLZETA_DATA_DIR
#define WEYLZETA_DATA_DIR "data"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(WEYLZETA_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  for (;;) {
    std::size_t n = fread(buf.data(), 1, buf.size(), p);
    if (n == 0) break;
    r.out.append(buf.data(), n);
  }
  int status = pclose(p);
  r.exit_code = WEXITSTATUS(status);
  return r;
}

const std::string kData = std::string("--data-dir ") + WEYLZETA_DATA_DIR +
                          "/specs";

}  // namespace

TEST_CASE("unknown subcommand exits 2") {
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("zeta eval --group E8 " + kData).exit_code == 2);
}

TEST_CASE("rootdata dump") {
  auto r = run("rootdata dump --type G2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"weyl_order\": 12") != std::string::npos);
}

TEST_CASE("lattice rr on the spec's basis") {
  auto r = run("lattice rr --basis 2 0 0 0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("lattice semistable exit code") {
  CHECK(run("lattice semistable --basis 1 0 0.5 0.8660254037844386").exit_code ==
        0);
}

TEST_CASE("zeta fe SL3/P21 passes and is deterministic") {
  std::string args = "zeta fe --group SL3 --parabolic P21 --samples 8 "
                     "--seed 99 " + kData;
  auto r1 = run(args);
  CHECK(r1.exit_code == 0);
  auto r2 = run(args);
  CHECK(r1.out == r2.out);  // same config + seed -> byte-identical JSON
}

TEST_CASE("truncomb check CLI") {
  auto r = run("truncomb check --type A2 --identity LCL-tau-tauhat");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"pass\": true") != std::string::npos);
  CHECK(run("truncomb check --type A2 --identity nonsense").exit_code == 2);
}

TEST_CASE("zeta eval SL2 value") {
  auto r = run("zeta eval --group SL2 --parabolic P11 --sigma-re 2 " + kData);
  CHECK(r.exit_code == 0);
  // xi(4) - xi(3)/2 = 0.0140056...
  CHECK(r.out.find("0.01400562") != std::string::npos);
}
