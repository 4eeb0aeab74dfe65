#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "qpc/errors.hpp"
#include "qpc/report.hpp"

using namespace qpc;
using namespace qpc::cli;

namespace fs = std::filesystem;

namespace {

std::string key_of(const std::string& text) {
  try {
    parse_config_text(text, {});
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qpc-test-" + name);
  fs::remove_all(p);
  return p;
}

const char* kHarperLe = R"(
[run]
command = le
[cocycle]
kind = harper
lambda1 = 0
lambda2 = 1
lambda3 = 0
[budget]
schedule = 1000 2000
grid = 32
)";

}  // namespace

TEST_CASE("real formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) CHECK(std::stod(format_real(v)) == v);
  CHECK(format_real(0.5) == "0.5");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config parsing") {
  const RunConfig cfg = parse_config_text(kHarperLe, {});
  CHECK(cfg.command == Command::Le);
  CHECK(cfg.experiment == "le");
  REQUIRE(cfg.cocycle);
  CHECK(cfg.cocycle->harper.lambda2 == 1.0);
  CHECK(cfg.budget.schedule == std::vector<std::int64_t>{1000, 2000});
  CHECK(cfg.hash.size() == 16);

  SUBCASE("hash ignores threads and output, follows the seed") {
    const std::string extra = std::string(kHarperLe) + "[output]\ndir = /tmp/x\n";
    CHECK(parse_config_text(extra, {.threads = 3}).hash == cfg.hash);
    CHECK(parse_config_text(kHarperLe, {.seed = 9}).hash != cfg.hash);
  }
  SUBCASE("overrides") {
    const RunConfig o = parse_config_text(kHarperLe, {.command = "ldt", .output_dir = "/tmp/o", .seed = 5, .threads = 2});
    CHECK(o.command == Command::Ldt);
    CHECK(o.output_dir == "/tmp/o");
    CHECK(o.budget.seed == 5);
    CHECK(o.threads == 2);
  }
  SUBCASE("coefficient lists") {
    const TrigPoly p = parse_poly("k", "-1: 0.5 (2,1) 0.5");
    CHECK(p.min_freq() == -1);
    CHECK(p.coeff(0) == cd(2, 1));
    CHECK_THROWS_AS(parse_poly("k", "0.5 1"), ConfigError);
    CHECK_THROWS_AS(parse_poly("k", "0: 1 x"), ConfigError);
  }
}

TEST_CASE("config errors name the offending key") {
  CHECK(key_of("[run]\ncommand = le\n[cocycle]\nkind = harper\nbogus = 1\n") == "cocycle.bogus");
  CHECK(key_of("[run]\ncommand = le\n[nope]\nx = 1\n") == "nope");
  CHECK(key_of("[run]\ncommand = fly\n") == "run.command");
  CHECK(key_of("[run]\ncommand = le\n") == "cocycle");
  CHECK(key_of("[run]\ncommand = le\n[cocycle]\nkind = harper\nlambda = 2\n") == "cocycle.lambda");
  CHECK(key_of("[run]\ncommand = le\n[cocycle]\nkind = harper\n[budget]\ngrid = 0\n") == "budget.grid");
  CHECK(key_of("[run]\ncommand = le\n[cocycle]\nkind = harper\n[budget]\nschedule = 10 5\n") == "budget.schedule");
  CHECK(key_of("[run]\ncommand = le\n[cocycle]\nkind = harper\n[budget]\nkappa = abc\n") == "budget.kappa");
  CHECK(key_of("[run]\ncommand = cf\n[frequency]\nkind = rational\np = 3\n") == "frequency.q");
  CHECK(key_of("[run]\ncommand = cf\n[frequency]\nkind = golden\nvalue = 0.3\n") == "frequency.value");
  CHECK(key_of("[run]\ncommand = ldt\n[cocycle]\nkind = harper\n[budget]\nphases = 10\n") == "budget.phases");
  CHECK(key_of("[run]\ncommand = le\ncommand = cf\n").rfind("line", 0) == 0);
  CHECK(key_of("[run]\ncommand = scan\n[cocycle]\nkind = harper\n[scan]\nmode = frequency\n") ==
        "scan.approximants");
}

TEST_CASE("le on the unimodular Harper cocycle") {
  RunConfig cfg = parse_config_text(kHarperLe, {.output_dir = fresh_dir("le").string()});
  std::ostringstream out;
  const RunOutcome o = run(cfg, out);
  CHECK(o.exit_code == 0);
  REQUIRE(o.files.size() == 2);
  const std::string csv = slurp(o.files[0]);
  CHECK(csv.rfind("# config " + cfg.hash + "\nmethod,", 0) == 0);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  std::getline(lines, line);
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  REQUIRE(cells.size() == 8);
  CHECK(std::isfinite(std::stod(cells[3])));
  CHECK(cells[3] == cells[4]);  // L' = L when det == 1
  const auto stem = fs::path(o.files[0]).stem().string();
  CHECK(stem.rfind("le-", 0) == 0);
  CHECK(stem.substr(stem.size() - 2) == "-1");
}

TEST_CASE("zeros on the singular Harper hopping term") {
  const std::string text = "[run]\ncommand = zeros\n[cocycle]\nkind = harper\nlambda1 = 1\nlambda2 = 2\nlambda3 = 1\n"
                           "[zeros]\ntarget = c\n";
  RunConfig cfg = parse_config_text(text, {.output_dir = fresh_dir("zeros").string()});
  std::ostringstream out;
  const RunOutcome o = run(cfg, out);
  REQUIRE(o.files.size() == 3);
  const std::string zeros = slurp(o.files[0]);
  // exactly one data row with multiplicity 2
  CHECK(std::count(zeros.begin(), zeros.end(), '\n') == 3);
  CHECK(zeros.substr(zeros.size() - 3) == ",2\n");
  CHECK(out.str().find("alpha=0.500") != std::string::npos);
}

TEST_CASE("numerical failures surface as library errors") {
  // zero exactly on the inner contour circle of the default strip
  const std::string text = "[run]\ncommand = zeros\n[zeros]\ntarget = poly\nf = 0: -0.5334880910911033 1\n";
  RunConfig cfg = parse_config_text(text, {.output_dir = fresh_dir("contour").string()});
  std::ostringstream out;
  try {
    run(cfg, out);
    FAIL("expected a numerical error");
  } catch (const NumericalError& e) {
    CHECK(e.kind() == ErrorKind::ZeroOnContour);
  }
}

TEST_CASE("outputs are identical across thread counts") {
  const std::string text = "[run]\ncommand = ldt\n[cocycle]\nkind = almost_mathieu\nlambda = 1.5\nE = 0.2\n"
                           "[budget]\nq_list = 5 8 13 21\npolicy_C = 0.02\nkappa = 0.05\nseed = 4\n";
  std::string csv[2], js[2];
  for (int i = 0; i < 2; ++i) {
    RunConfig cfg = parse_config_text(text, {.output_dir = fresh_dir("det" + std::to_string(i)).string(),
                                             .threads = i == 0 ? 1 : 8});
    std::ostringstream out;
    const RunOutcome o = run(cfg, out);
    csv[i] = slurp(o.files[0]);
    js[i] = slurp(o.files[1]);
  }
  CHECK(csv[0] == csv[1]);
  CHECK(js[0] == js[1]);
  CHECK(js[0].find("\"seed\": 4") != std::string::npos);
}

TEST_CASE("cf and check commands") {
  RunConfig cfg = parse_config_text("[run]\ncommand = cf\n[frequency]\nkind = rational\np = 5\nq = 8\n",
                                    {.output_dir = fresh_dir("cf").string()});
  std::ostringstream out;
  RunOutcome o = run(cfg, out);
  CHECK(o.exit_code == 0);
  CHECK(slurp(o.files[1]).find("\"diophantine\": null") != std::string::npos);

  cfg = parse_config_text("", {.command = "check", .output_dir = fresh_dir("check").string()});
  o = run(cfg, out);
  CHECK(o.exit_code == 0);
  CHECK(out.str().find("FAIL") == std::string::npos);
}
