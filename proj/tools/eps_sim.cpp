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

// eps-sim: run scenarios, sweep transfer curves, integrate transients.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eps/cli/commands.hpp"
#include "eps/cli/config.hpp"

using namespace eps::cli;

int main(int argc, char** argv) {
  CLI::App app{"Energy packet switch simulator", "eps-sim"};
  app.require_subcommand(1);

  RunArgs run;
  std::string out_dir;
  auto* run_cmd = app.add_subcommand("run", "Execute a scenario and write trace, metrics and audit files");
  run_cmd->add_option("--config,-c", run.config, "Scenario file (JSON, comments allowed)")->required();
  run_cmd->add_option("--out-dir,-o", out_dir, "Output directory (overrides run.out_dir)");
  run_cmd->add_option("--seed", run.seed, "Network RNG seed");
  run_cmd->add_option("--slots", run.slots, "Number of slots to simulate");
  run_cmd->add_option("--tamper-slot", run.tamper_slot)->group("");
  run_cmd->add_option("--tamper-joules", run.tamper_joules)->group("");

  CurveArgs curve;
  std::string curve_dir;
  auto* curve_cmd = app.add_subcommand("transfer-curve", "Delivered energy versus preload voltage or bank count");
  std::string mode;
  curve_cmd->add_option("--mode", mode, "vs_preload or vs_ratio")
      ->required()
      ->check(CLI::IsMember({"vs_preload", "vs_ratio"}));
  curve_cmd->add_option("--vs", curve.source_voltage, "Bank voltage [V]")->capture_default_str();
  curve_cmd->add_option("--cb", curve.bank_capacitance, "Capacitance of one bank [F]")->capture_default_str();
  curve_cmd->add_option("--cl", curve.load_capacitance, "Load capacitance [F]")->capture_default_str();
  curve_cmd->add_option("--n", curve.banks, "vs_preload: banks in parallel")->capture_default_str();
  curve_cmd->add_option("--max-n", curve.max_banks, "vs_ratio: largest bank count")->capture_default_str();
  curve_cmd->add_option("--points", curve.points, "vs_preload: Vl grid points over [0, Vs]")->capture_default_str();
  curve_cmd->add_option("--out-dir,-o", curve_dir, "Write CSV here instead of stdout");

  TransientArgs tr;
  std::string tr_dir;
  auto* tr_cmd = app.add_subcommand("transient", "Waveform of one capacitor-to-capacitor exchange");
  tr_cmd->add_option("--cs", tr.source_capacitance, "[F]")->capture_default_str();
  tr_cmd->add_option("--vs", tr.source_voltage, "[V]")->capture_default_str();
  tr_cmd->add_option("--cl", tr.load_capacitance, "[F]")->capture_default_str();
  tr_cmd->add_option("--vl", tr.load_voltage, "[V]")->capture_default_str();
  tr_cmd->add_option("--r", tr.resistance, "Series resistance [ohm]")->capture_default_str();
  tr_cmd->add_option("--l", tr.inductance, "Series inductance [H]; selects the RLC model");
  tr_cmd->add_option("--dt", tr.timestep, "Timestep [s]")->capture_default_str();
  tr_cmd->add_option("--duration", tr.duration, "[s]")->capture_default_str();
  tr_cmd->add_option("--out-dir,-o", tr_dir, "Write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(std::cerr, code::usage, e.what());
    return kExitError;
  }

  try {
    if (run_cmd->parsed()) {
      if (!out_dir.empty()) run.out_dir = out_dir;
      return cmd_run(run, std::cout, std::cerr);
    }
    if (curve_cmd->parsed()) {
      if (!curve_dir.empty()) curve.out_dir = curve_dir;
      curve.mode = mode == "vs_ratio" ? CurveMode::vs_ratio : CurveMode::vs_preload;
      return cmd_transfer_curve(curve, std::cout, std::cerr);
    }
    if (!tr_dir.empty()) tr.out_dir = tr_dir;
    return cmd_transient(tr, std::cout, std::cerr);
  } catch (const std::exception& e) {
    print_error(std::cerr, code::internal, e.what());
    return kExitError;
  }
}
