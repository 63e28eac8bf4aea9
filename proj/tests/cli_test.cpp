// Copyright 2026 The EPS Simulator Authors
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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "eps/cli/commands.hpp"
#include "eps/cli/config.hpp"

using namespace eps::cli;
namespace fs = std::filesystem;

namespace {

struct Csv {
  std::string header;
  std::vector<std::vector<double>> rows;
};

Csv parse_csv(const std::string& text) {
  Csv out;
  std::istringstream in(text);
  std::getline(in, out.header);
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::istringstream cells(line);
    for (std::string cell; std::getline(cells, cell, ',');) row.push_back(std::stod(cell));
    out.rows.push_back(row);
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("eps_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return path / name;
  }
};

const std::string kMinimal = R"({
  // one source, one load, 18 J at slot 1
  "sources": [ { "address": "10.0.0.1", "feeder_capacity": 100 } ],
  "loads": [ { "address": "10.0.2.1", "demands": [ { "slot": 1, "joules": 18 } ] } ],
  "run": { "total_slots": 8 }
})";

struct Outcome {
  int status;
  std::string out, err;
};

Outcome run_with(const RunArgs& args) {
  std::ostringstream out, err;
  const int status = cmd_run(args, out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("minimal config picks up defaults") {
  const auto s = parse_scenario(kMinimal);
  CHECK(s.switch_config.num_banks == 8);
  CHECK(s.switch_config.bank_capacitance == 1.0);
  CHECK(s.bank_voltage_at_start() == 12.0);
  REQUIRE(s.loads.size() == 1);
  CHECK(s.loads[0].capacitance == 1.0);
  CHECK(s.loads[0].mode == eps::core::InterfaceMode::half_cycle);
  CHECK(s.loads[0].demands.at(0).slot == 1);
  CHECK(s.run.total_slots == 8);
  CHECK(s.sources.at(0).voltage == 12.0);
}

TEST_CASE("shipped example config parses and runs clean") {
  TempDir dir("example");
  RunArgs args;
  args.config = fs::path(EPS_SOURCE_DIR) / "config" / "example.json";
  args.out_dir = dir.path;
  const auto r = run_with(args);
  CHECK(r.status == kExitOk);
  CHECK(r.err.empty());
  for (const char* f : {"trace.log", "protocol.log", "transfers.csv", "metrics.csv", "bank_utilization.csv",
                        "latency.csv", "audit.csv"})
    CHECK(fs::exists(dir.path / f));
  CHECK(r.out.find(" clean") != std::string::npos);
}

TEST_CASE("config errors carry a code and a location") {
  auto expect = [](const std::string& text, const std::string& code, const std::string& field) {
    try {
      parse_scenario(text);
      FAIL("accepted: ", text);
    } catch (const ConfigError& e) {
      CHECK(e.code() == code);
      CHECK(e.field() == field);
    }
  };
  expect(R"({"loads": [ {"address": "10.0.2.1"}, {"address": "10.0.2.1"} ], "switch": {"num_outputs": 2}})",
         "config_field", "loads[1].address");
  expect(R"({"loads": [ {"address": "10.0.2.1", "colour": 1} ]})", "config_field", "loads[0].colour");
  expect(R"({"loads": [ {"address": "10.0.2"} ]})", "config_field", "loads[0].address");
  expect(R"({"loads": [ {"capacitance": 1} ]})", "config_field", "loads[0].address");
  expect(R"({"loads": [ {"address": "10.0.2.1", "mode": "third"} ]})", "config_field", "loads[0].mode");
  expect(R"({"loads": [ {"address": "10.0.2.1", "demands": [ {"slot": 1.5, "joules": 1} ]} ]})", "config_field",
         "loads[0].demands[0].slot");
  expect(R"({"loads": [ {"address": "10.0.2.1", "demands": [ {"slot": 4, "joules": 1}, {"slot": 2, "joules": 1} ]} ]})",
         "config_field", "loads[0].demands[1].slot");
  expect(R"({"sources": [ {"address": "10.0.0.1"} ]})", "config_field", "sources[0].feeder_capacity");
  expect(R"({"sources": [ {"address": "10.0.0.1", "feeder_capacity": "lots"} ]})", "config_field",
         "sources[0].feeder_capacity");
  expect(R"({"network": {"links": [ {"from": "10.0.1.1", "to": "9.9.9.9"} ]}})", "config_field",
         "network.links[0].to");
  expect(R"({"run": {"total_slots": -3}})", "config_field", "run.total_slots");
  expect(R"({"switch": {"num_banks": 0}})", "config_field", "switch");
  expect(R"([1, 2])", "config_field", "");
  expect(R"({"extra": true})", "config_field", "extra");

  try {
    parse_scenario("{\n  \"run\": {\n    \"total_slots\": 5,\n  }\n}");
    FAIL("accepted trailing comma");
  } catch (const ConfigError& e) {
    CHECK(e.code() == "config_parse");
    CHECK(e.line == 4u);
    CHECK(e.column == 3u);
  }
}

TEST_CASE("run exit codes and error lines") {
  TempDir dir("codes");
  RunArgs args;
  args.out_dir = dir.path / "out";

  args.config = dir.write("dup.json", R"({"sources": [{"address": "10.0.2.1", "feeder_capacity": 1}],
                                          "loads": [{"address": "10.0.2.1"}]})");
  auto r = run_with(args);
  CHECK(r.status == kExitError);
  CHECK(r.err.rfind("error code=config_field field=loads[0].address message=\"duplicate address", 0) == 0);

  args.config = dir.write("syntax.json", "{\n  \"run\": { ]\n}");
  r = run_with(args);
  CHECK(r.status == kExitError);
  CHECK(r.err.rfind("error code=config_parse line=2 column=12 ", 0) == 0);

  args.config = dir.path / "missing.json";
  r = run_with(args);
  CHECK(r.status == kExitError);
  CHECK(r.err.rfind("error code=config_io ", 0) == 0);

  args.config = dir.write("ok.json", kMinimal);
  r = run_with(args);
  CHECK(r.status == kExitOk);

  args.tamper_slot = 3;
  r = run_with(args);
  CHECK(r.status == kExitAudit);
  CHECK(r.err.rfind("error code=audit_violation slot=3 ", 0) == 0);

  args.tamper_slot = 2;
  r = run_with(args);
  CHECK(r.status == kExitError);
  CHECK(r.err.rfind("error code=usage slot=2 ", 0) == 0);
}

TEST_CASE("seed and slot overrides, byte-stable outputs") {
  TempDir dir("stable");
  RunArgs args;
  args.config = dir.write("ok.json", kMinimal);

  args.out_dir = dir.path / "short";
  args.slots = 2;
  REQUIRE(run_with(args).status == kExitOk);
  const auto transfers = parse_csv(slurp(dir.path / "short" / "transfers.csv"));
  CHECK(transfers.rows.empty());

  args.slots = 40;
  args.seed = 99;
  args.out_dir = dir.path / "a";
  REQUIRE(run_with(args).status == kExitOk);
  args.out_dir = dir.path / "b";
  REQUIRE(run_with(args).status == kExitOk);
  for (const char* f : {"trace.log", "transfers.csv", "metrics.csv", "audit.csv", "latency.csv"})
    CHECK(slurp(dir.path / "a" / f) == slurp(dir.path / "b" / f));
}

TEST_CASE("transfer curve versus bank count") {
  CurveArgs args;
  args.mode = CurveMode::vs_ratio;
  std::ostringstream os;
  write_transfer_curve(os, args);
  const auto csv = parse_csv(os.str());
  CHECK(csv.header == "n,cs_F,v_sl_V,delivered_J,ratio");
  REQUIRE(csv.rows.size() == 8);
  double prev = 0.0, prev_step = 1.0;
  for (std::size_t i = 0; i < 8; ++i) {
    const double n = static_cast<double>(i + 1);
    const double vsl = 12.0 * n / (n + 1.0);  // charge sharing, unit bank and load
    CHECK(csv.rows[i][0] == n);
    CHECK(csv.rows[i][2] == doctest::Approx(vsl).epsilon(1e-14));
    CHECK(csv.rows[i][3] == doctest::Approx(0.5 * vsl * vsl).epsilon(1e-14));
    CHECK(csv.rows[i][4] == doctest::Approx(vsl * vsl / 144.0).epsilon(1e-14));
    const double step = csv.rows[i][4] - prev;
    CHECK(step > 0.0);
    CHECK(step < prev_step);
    prev = csv.rows[i][4];
    prev_step = step;
  }
  CHECK(csv.rows[7][2] == doctest::Approx(96.0 / 9.0).epsilon(1e-14));
  CHECK(csv.rows[7][4] == doctest::Approx(0.790).epsilon(1e-3));
}

TEST_CASE("transfer curve versus preload voltage") {
  CurveArgs args;
  args.banks = 4;
  std::ostringstream os;
  write_transfer_curve(os, args);
  const auto csv = parse_csv(os.str());
  CHECK(csv.header == "vl_V,delivered_J,ratio,charge_C");
  REQUIRE(csv.rows.size() == 50);
  CHECK(csv.rows.front()[0] == 0.0);
  CHECK(csv.rows.back()[0] == 12.0);
  CHECK(std::abs(csv.rows.front()[2] - 0.64) <= 1e-12);
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const double vl = csv.rows[i][0];
    const double vsl = (4.0 * 12.0 + vl) / 5.0;
    CHECK(csv.rows[i][1] == doctest::Approx(0.5 * (vsl * vsl - vl * vl)).epsilon(1e-12));
    CHECK(csv.rows[i][3] == doctest::Approx(vsl - vl).epsilon(1e-12));
  }

  args.banks = 1;
  args.points = 2;
  std::ostringstream one;
  write_transfer_curve(one, args);
  const auto pair = parse_csv(one.str());
  REQUIRE(pair.rows.size() == 2);
  CHECK(pair.rows[1][0] == 12.0);
  CHECK(pair.rows[1][1] == 0.0);
}

TEST_CASE("empty grids are usage errors") {
  CurveArgs args;
  args.points = 0;
  std::ostringstream out, err;
  CHECK(cmd_transfer_curve(args, out, err) == kExitError);
  CHECK(err.str().rfind("error code=usage ", 0) == 0);
  CHECK(out.str().empty());

  args = {};
  args.mode = CurveMode::vs_ratio;
  args.max_banks = 0;
  std::ostringstream err2;
  CHECK(cmd_transfer_curve(args, out, err2) == kExitError);
  CHECK(err2.str().rfind("error code=usage ", 0) == 0);
}

TEST_CASE("transient RC waveform through the command") {
  TempDir dir("rc");
  TransientArgs args;
  args.duration = 10.0;
  args.timestep = 1e-3;
  args.out_dir = dir.path;
  std::ostringstream out, err;
  REQUIRE(cmd_transient(args, out, err) == kExitOk);
  const auto csv = parse_csv(slurp(dir.path / "waveform.csv"));
  CHECK(csv.header == "t_s,v_source_V,v_load_V,i_A");
  bool seen = false;
  for (const auto& row : csv.rows)
    if (std::abs(row[0] - 0.5) < 1e-9) {
      seen = true;
      const double analytic = 6.0 * (1.0 - std::exp(-1.0));
      CHECK(std::abs(row[2] - analytic) <= 0.005 * analytic);
    }
  CHECK(seen);

  std::ostringstream again, err2;
  args.out_dir.reset();
  REQUIRE(cmd_transient(args, again, err2) == kExitOk);
  CHECK(again.str() == slurp(dir.path / "waveform.csv"));
}

TEST_CASE("lossless LC keeps total energy") {
  TransientArgs args;
  args.resistance = 0.0;
  args.inductance = 1e-3;
  const double ceq = 0.5;
  const double period = 2.0 * std::numbers::pi * std::sqrt(1e-3 * ceq);
  args.timestep = period / 200.0;
  args.duration = 5.0 * period;
  std::ostringstream os;
  write_transient(os, args);
  const auto csv = parse_csv(os.str());
  REQUIRE(csv.rows.size() > 900);
  const double e0 = 0.5 * 144.0;
  for (const auto& row : csv.rows) {
    const double e = 0.5 * row[1] * row[1] + 0.5 * row[2] * row[2] + 0.5 * 1e-3 * row[3] * row[3];
    CHECK(std::abs(e - e0) <= 1e-6 * e0);
  }
}

TEST_CASE("transient argument errors are usage errors") {
  TransientArgs args;
  args.timestep = 1.0;
  args.duration = 0.5;
  std::ostringstream out, err;
  CHECK(cmd_transient(args, out, err) == kExitError);
  CHECK(err.str().rfind("error code=usage ", 0) == 0);

  args = {};
  args.resistance = 0.0;
  std::ostringstream err2;
  CHECK(cmd_transient(args, out, err2) == kExitError);
  CHECK(err2.str().rfind("error code=usage ", 0) == 0);
}

TEST_CASE("error lines escape quotes") {
  std::ostringstream err;
  print_error(err, code::config_field, "bad \"x\"\nnext", {{"field", "a.b"}});
  CHECK(err.str() == "error code=config_field field=a.b message=\"bad \\\"x\\\"\\nnext\"\n");
}
