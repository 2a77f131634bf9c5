// Copyright 2026 The gobf-plr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

#include "gobf/io.hpp"

using namespace gobf;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gobf_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run run_cli(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string(GOBF_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

}  // namespace

TEST_CASE("basis with the delay pole gives chi = omega / pi") {
  const auto dir = scratch("basis");
  const auto r = run_cli("basis --poles 0 --points 300 --out " + dir.string(), dir);
  REQUIRE(r.status == 0);
  const auto t = io::read_csv(dir / "chi.csv");
  REQUIRE(t.column("omega").size() == 300);
  for (std::size_t i = 0; i < 300; ++i) {
    CHECK(t.column("chi")[i] == doctest::Approx(t.column("omega")[i] / std::numbers::pi).epsilon(1e-14));
  }
  const auto report = io::read_json(dir / "basis_report.json");
  CHECK(report["version"] == io::kFormatVersion);
  CHECK(report["conservation"]["normalized"].get<double>() == doctest::Approx(1.0));
  CHECK(io::json::parse(r.out) == report);
}

TEST_CASE("basis extrema report") {
  const auto dir = scratch("basis2");
  const auto r = run_cli("basis --poles 0.9996 --points 100 --out " + dir.string(), dir);
  REQUIRE(r.status == 0);
  const auto j = io::json::parse(r.out);
  REQUIRE(j["extrema"].size() == 1);
  CHECK(j["extrema"][0]["omega_max"].get<double>() == doctest::Approx(-std::log(0.9996)).epsilon(0.05));
}

TEST_CASE("spr subcommand") {
  const auto dir = scratch("spr");
  auto r = run_cli("spr --ao 1 --d 1,-0.9 --lambda2 0", dir);
  REQUIRE(r.status == 0);
  auto j = io::json::parse(r.out);
  CHECK(j["is_spr"] == true);
  CHECK(j["version"] == io::kFormatVersion);
  CHECK(j["min_real_part"].get<double>() == doctest::Approx(1.0 / 1.9));
  r = run_cli("spr --ao 1 --d 1,-1.6,0.8 --lambda2 1", dir);
  REQUIRE(r.status == 0);
  CHECK(io::json::parse(r.out)["is_spr"] == false);
}

TEST_CASE("simulate then identify recovers an in-model system") {
  const auto dir = scratch("roundtrip");
  const RationalModel g(Polynomial{0.0, 0.5, 0.25}, Polynomial{1.0, -1.2, 0.5});
  io::write_json(dir / "model.json", io::to_json(g, {}));
  auto r = run_cli("simulate --model " + (dir / "model.json").string() + " --length 1000 --prbs-registers 10 --out " +
                    dir.string(),
                dir);
  REQUIRE(r.status == 0);
  io::write_json(dir / "config.json", io::json{{"paa", {{"f0_scale", 1e8}}}});
  r = run_cli("identify --data " + (dir / "data.csv").string() + " --config " + (dir / "config.json").string() +
               " --poles 0 --order 2 --scheme hrls --out " + (dir / "id").string(),
           dir);
  REQUIRE(r.status == 0);
  const auto m = io::model_from_json(io::read_json(dir / "id" / "model.json"));
  double err = 0.0;
  for (int j = 0; j < 400; ++j) {
    const double w = std::numbers::pi * (j + 0.5) / 400.0;
    err = std::max(err, std::abs(std::abs(m.response(w)) - std::abs(g.response(w))));
  }
  CHECK(err < 1e-6);
  for (const char* f : {"summary.json", "bode_model.csv", "chi.csv", "theta_trajectory.csv", "spr.json"}) {
    CHECK(fs::exists(dir / "id" / f));
  }
  // Bode of the recovered model.
  r = run_cli("bode --model " + (dir / "id" / "model.json").string() + " --points 64 --out " + dir.string(), dir);
  REQUIRE(r.status == 0);
  CHECK(io::read_csv(dir / "bode.csv").column("omega").size() == 64);
}

TEST_CASE("identical invocations write identical bytes") {
  const auto a = scratch("idem_a");
  const std::string cmd = "simulate --length 300 --prbs-registers 9 --snr 22 --seed 4 --out " + a.string();
  REQUIRE(run_cli(cmd, a).status == 0);
  const auto first = slurp(a / "data.csv");
  REQUIRE(run_cli(cmd, a).status == 0);
  CHECK(slurp(a / "data.csv") == first);
}

TEST_CASE("errors are reported as JSON with distinct exit codes") {
  const auto dir = scratch("errors");
  auto expect = [&](const std::string& args, ErrorCode code) {
    CAPTURE(args);
    const auto r = run_cli(args, dir);
    CHECK(r.status == static_cast<int>(code));
    const auto j = io::json::parse(r.err);
    CHECK(j["version"] == io::kFormatVersion);
    CHECK(j["error"]["exit_code"] == static_cast<int>(code));
    CHECK_FALSE(j["error"]["message"].get<std::string>().empty());
  };
  expect("basis --poles 1.5 --out " + dir.string(), ErrorCode::kInstability);
  expect("basis --poles 0.5+0.2i --out " + dir.string(), ErrorCode::kRealness);
  expect("basis --poles x --out " + dir.string(), ErrorCode::kSchema);
  expect("spr --ao 1 --d 2,1", ErrorCode::kInvalidArgument);
  std::ofstream(dir / "bad.csv") << "t,u\n0,1\n";
  expect("identify --data " + (dir / "bad.csv").string() + " --out " + dir.string(), ErrorCode::kSchema);
  std::ofstream(dir / "cfg.json") << R"({"unknown": 1})";
  expect("experiment fig3 --config " + (dir / "cfg.json").string() + " --out " + dir.string(), ErrorCode::kSchema);
  expect("experiment fig7 --out " + dir.string(), ErrorCode::kInvalidArgument);
  std::ofstream(dir / "unstable.json") << R"({"numerator": [0, 1], "denominator": [1, 1]})";
  expect("bode --model " + (dir / "unstable.json").string() + " --out " + dir.string(), ErrorCode::kNumerical);
  std::ofstream(dir / "diverge.json") << R"({"paa": {"divergence_threshold": 1e-6}})";
  REQUIRE(run_cli("simulate --length 200 --prbs-registers 8 --out " + dir.string(), dir).status == 0);
  expect("identify --data " + (dir / "data.csv").string() + " --config " + (dir / "diverge.json").string() +
             " --out " + dir.string(),
         ErrorCode::kDivergence);
}

TEST_CASE("usage errors") {
  const auto dir = scratch("usage");
  CHECK(run_cli("", dir).status != 0);
  CHECK(run_cli("frobnicate", dir).status != 0);
  CHECK(run_cli("identify", dir).status != 0);
  CHECK(run_cli("--help", dir).status == 0);
}
