// Copyright 2026 The graphgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "testing.hpp"

namespace graphgame {
namespace {

namespace fs = std::filesystem;
using testing::fixture;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("graphgame_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("analyze lists equilibria and witnesses") {
  const auto r = invoke({"analyze", fixture("coordination.json")});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["equilibria"] == nlohmann::json::array({"lo|lo", "hi|hi"}));
  CHECK(j["profiles"].size() == 4);
  CHECK(j["profiles"][1]["witness"]["gain"] == 1.0);

  const auto iso = nlohmann::json::parse(invoke({"analyze", fixture("isolated.json")}).out);
  CHECK(iso["equilibria"].size() == 6);
}

TEST_CASE("input errors map to exit code 2") {
  CHECK(invoke({"analyze", fixture("malformed_payoff.json")}).code == 2);
  CHECK(invoke({"analyze", "/nonexistent/game.json"}).code == 2);
  CHECK(invoke({"no-such-command"}).code == 2);
  const auto r = invoke({"mcmc-run", fixture("path5_graph.json"), fixture("path5_uniform.json"),
                         "--steps", "0"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("structured failures have their own exit codes") {
  CHECK(invoke({"mcmc-run", fixture("split_graph.json"), fixture("split_target.json")}).code == 3);
  CHECK(invoke({"decompose", fixture("four_cycle.json")}).code == 4);
  CHECK(invoke({"mixed", fixture("cyclic_pennies4.json"), "--max-iter", "2000"}).code == 5);
}

TEST_CASE("mixed writes a certified profile") {
  const fs::path dir = scratch("mixed");
  const auto r = invoke({"mixed", fixture("matching_pennies.json"), "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "mixed.json"));
  CHECK(j == nlohmann::json::parse(r.out));
  CHECK(j.dump().find("0.5") != std::string::npos);
}

TEST_CASE("mcmc-build emits the kernel") {
  const fs::path dir = scratch("build");
  const auto r = invoke({"mcmc-build", fixture("path5_graph.json"), fixture("path5_uniform.json"),
                         "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "kernel.json"));
  std::istringstream csv(slurp(dir / "kernel.csv"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 6);
}

TEST_CASE("mcmc-run output is deterministic per seed") {
  const fs::path a = scratch("run_a");
  const fs::path b = scratch("run_b");
  const std::vector<std::string> base{"mcmc-run", fixture("path5_graph.json"),
                                      fixture("path5_uniform.json"), "--steps", "20000",
                                      "--seed", "11", "--out"};
  auto args_a = base;
  args_a.push_back(a.string());
  auto args_b = base;
  args_b.push_back(b.string());
  REQUIRE(invoke(args_a).code == 0);
  REQUIRE(invoke(args_b).code == 0);
  for (const char* f : {"summary.json", "kernel.csv", "trace.csv", "empirical.csv", "tv.csv"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
    CHECK_FALSE(slurp(a / f).empty());
  }

  std::istringstream tv(slurp(a / "tv.csv"));
  std::string line;
  std::getline(tv, line);
  CHECK(line == "step,tv");
  double last = 0.0;
  while (std::getline(tv, line)) last = std::stod(line.substr(line.find(',') + 1));
  CHECK(last < 0.05);
}

TEST_CASE("mcmc-run on the connected-component case reports its label") {
  const auto r = invoke({"mcmc-run", fixture("controes_graph.json"), fixture("controes_target.json"),
                         "--steps", "1000", "--no-trace"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["case"] == "SupportInComponent");
  CHECK(j["schedule"] == "powergap:1:3");
}

TEST_CASE("decompose names the factors") {
  const auto r = invoke({"decompose", fixture("team_path.json")});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.dump().find("team") != std::string::npos);
  CHECK(j.dump().find("solo") != std::string::npos);
}

TEST_CASE("repeated and folk-check") {
  const auto rep = invoke({"repeated", fixture("matching_pennies.json"), "--t-eval", "2000",
                           "--replicas", "2"});
  REQUIRE(rep.code == 0);
  const auto j = nlohmann::json::parse(rep.out);
  CHECK(j.dump().find("tail_liminf_estimate") != std::string::npos);

  const auto folk = invoke({"folk-check", fixture("coordination.json"), "--t-eval", "20000",
                            "--replicas", "4"});
  CHECK(folk.code == 0);
  CHECK(invoke({"folk-check", fixture("four_cycle.json")}).code == 4);
}

}  // TEST_SUITE

}  // namespace graphgame
