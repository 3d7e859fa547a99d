#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(CONTCALC_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string data = CONTCALC_TEST_DATA;
const std::string decls = data + "/decls.ctc";
const std::string machines = data + "/machines.ctm";

}  // namespace

TEST_CASE("elaborate") {
  auto r = run("elaborate " + decls);
  CHECK(r.code == 0);
  CHECK(r.out.find("W-domain") != std::string::npos);
  CHECK(r.out.find("M-domain") != std::string::npos);

  std::string bad = "/tmp/contcalc_bad.ctc";
  std::ofstream(bad) << "mu T(A) = rec +\n";
  auto b = run("elaborate " + bad);
  CHECK(b.code == 2);
}

TEST_CASE("enumerate") {
  CHECK(run("enumerate " + decls + " List --atoms A=2 --height 4 --count-only").out == "15\n");
  CHECK(run("enumerate " + decls + " List --atoms A=3 --height 3 --count-only").out == "13\n");
  CHECK(run("enumerate " + decls + " Zero --height 4 --count-only").out == "0\n");
  auto full = run("enumerate " + decls + " List --atoms A=r,e --height 2");
  CHECK(full.code == 0);
  CHECK(full.out.find("count: 3") != std::string::npos);
  auto partial = run("--max-count 5 enumerate " + decls + " List --atoms A=2 --height 4 --count-only");
  CHECK(partial.code == 3);
  CHECK(run("enumerate " + decls + " Missing --count-only").code == 2);
}

TEST_CASE("output is deterministic") {
  auto a = run("enumerate " + decls + " Tree --atoms A=2 --height 3");
  auto b = run("enumerate " + decls + " Tree --atoms A=2 --height 3");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("fold") {
  auto r = run("fold " + decls + " List --algebra length --list r,e,d --atoms A=r,e,d");
  CHECK(r.code == 0);
  CHECK(r.out == "3\n");
  CHECK(run("fold " + decls + " List --algebra length --list [] --atoms A=r").out == "0\n");
}

TEST_CASE("unfold") {
  auto r = run("unfold " + decls + " Colist --machines " + data + "/red.ctm --machine red --state r --atoms A=r,e,d --paths 6");
  CHECK(r.code == 0);
  CHECK(r.out.find("values: r e d r e d\n") != std::string::npos);
}

TEST_CASE("bisim") {
  auto eq = run("bisim " + machines + " inf1/a inf2/a --depth 100");
  CHECK(eq.code == 0);
  CHECK(eq.out.find("bisimilar") != std::string::npos);
  auto ex = run("bisim " + machines + " inf1/a inf2/b --exact");
  CHECK(ex.code == 0);
  CHECK(ex.out == "equal\n");
  auto ne = run("bisim " + machines + " nat3/s3 inf1/a --exact");
  CHECK(ne.code == 1);
  CHECK(ne.out.find("(length 4)") != std::string::npos);
  CHECK(run("bisim " + machines + " nope/a inf1/a --exact").code == 2);
  CHECK(run("bisim " + machines + " inf1/a inf2/a --depth 100000000 --max-count 10").code != 0);
}

TEST_CASE("check-iso") {
  CHECK(run("check-iso " + decls + " List --atoms A=2 --height 4").code == 0);
  CHECK(run("check-iso " + decls + " CoNat").code == 0);
  auto bad = run("check-iso " + decls + " List --atoms A=2 --height 3 --corrupt");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("elaborate /nonexistent/file").code == 2);
}
