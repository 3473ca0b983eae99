#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "treewalk/experiments.hpp"

namespace fs = std::filesystem;
using namespace treewalk;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "treewalk");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("treewalk_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config file round trip reproduces the run") {
    const fs::path a = scratch("a"), b = scratch("b");
    auto r = cli({"classical", "--d", "3", "--widths", "0:2:0.5", "--seed", "4", "--out", a.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(a / "manifest.json"));
    CHECK(!fs::exists(fs::path(a.string() + ".partial")));
    r = cli({"run", "--config", (a / "config.txt").string(), "--out", b.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(a / "classical.csv") == slurp(b / "classical.csv"));
    CHECK(slurp(a / "config.txt") != slurp(b / "config.txt"));  // differs only in out
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("config errors name the field and exit with 2") {
    const fs::path dir = scratch("cfg");
    fs::create_directories(dir);
    {
      std::ofstream(dir / "bad.txt") << "kind = classical\nseed = 1\nbogus = 3\n";
    }
    auto r = cli({"run", "--config", (dir / "bad.txt").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("'bogus'") != std::string::npos);

    r = cli({"scattering", "--d", "4", "--momenta", "4.0", "--seed", "1", "--out", (dir / "x").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("'momenta'") != std::string::npos);

    r = cli({"dynamics", "--variant", "mgt-random", "--seed", "1", "--out", (dir / "x").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("'variant'") != std::string::npos);

    r = cli({"classical", "--out", (dir / "x").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("'seed'") != std::string::npos);
    CHECK(!fs::exists(dir / "x"));
    fs::remove_all(dir);
  }

  TEST_CASE("foreign output directories are left alone") {
    const fs::path dir = scratch("foreign");
    fs::create_directories(dir);
    std::ofstream(dir / "keep.txt") << "mine";
    const auto r = cli({"classical", "--seed", "1", "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(slurp(dir / "keep.txt") == "mine");
    CHECK(!fs::exists(fs::path(dir.string() + ".partial")));
    fs::remove_all(dir);
  }

  TEST_CASE("outputs do not depend on the worker count") {
    const fs::path a = scratch("w1"), b = scratch("w3");
    const std::vector<std::string> base = {"scattering", "--d", "3", "--widths", "0,2", "--realizations", "6",
                                           "--momenta", "1.0,1.5707963267948966", "--seed", "12"};
    auto args = base;
    args.insert(args.end(), {"--workers", "1", "--out", a.string()});
    REQUIRE(cli(args).code == 0);
    args = base;
    args.insert(args.end(), {"--workers", "3", "--out", b.string()});
    REQUIRE(cli(args).code == 0);
    CHECK(slurp(a / "transmission_d3.csv") == slurp(b / "transmission_d3.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("verify detects an injected fault") {
    auto r = cli({"verify", "--inject-fault"});
    CHECK(r.code == 1);
    CHECK(r.out.find("spectrum_sgt_d1") != std::string::npos);
    CHECK(r.out.find("FAIL") != std::string::npos);
  }

  TEST_CASE("graph export") {
    const auto r = cli({"graph", "--d", "1", "--variant", "mgt-regular"});
    REQUIRE(r.code == 0);
    int edges = 0;
    std::istringstream in(r.out);
    for (std::string line; std::getline(in, line);)
      if (!line.empty() && line[0] != '#') ++edges;
    CHECK(edges == 8);
    CHECK(cli({"graph", "--d", "0"}).code != 0);
  }
}
