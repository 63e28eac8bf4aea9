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

#include "eps/cli/commands.hpp"

#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "eps/cli/config.hpp"
#include "eps/error.hpp"
#include "eps/numfmt.hpp"
#include "eps/physics/exchange.hpp"
#include "eps/physics/transient.hpp"
#include "eps/sim/engine.hpp"

namespace eps::cli {

namespace fs = std::filesystem;

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

/// Writes through `write` into `dir/name`, or to `out` when no dir is set.
template <class Fn>
int emit(const std::optional<fs::path>& dir, const char* name, std::ostream& out, std::ostream& err, Fn&& write) {
  if (!dir) {
    write(out);
    return kExitOk;
  }
  std::error_code ec;
  fs::create_directories(*dir, ec);
  const fs::path path = *dir / name;
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    print_error(err, code::output_io, "cannot write " + path.string());
    return kExitError;
  }
  write(file);
  out << path.string() << "\n";
  return kExitOk;
}

}  // namespace

void print_error(std::ostream& err, std::string_view code, const std::string& message,
                 const std::vector<std::pair<std::string, std::string>>& fields) {
  err << "error code=" << code;
  for (const auto& [k, v] : fields) err << ' ' << k << '=' << v;
  err << " message=" << quote(message) << "\n";
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  sim::ScenarioConfig scenario;
  try {
    scenario = load_scenario(args.config);
  } catch (const ConfigError& e) {
    std::vector<std::pair<std::string, std::string>> where;
    if (!e.field().empty()) where.emplace_back("field", e.field());
    if (e.line) where.emplace_back("line", std::to_string(*e.line));
    if (e.column) where.emplace_back("column", std::to_string(*e.column));
    print_error(err, e.code(), e.what(), where);
    return kExitError;
  }
  if (args.seed) scenario.run.rng_seed = *args.seed;
  if (args.slots) scenario.run.total_slots = *args.slots;
  if (args.out_dir) scenario.run.out_dir = args.out_dir->string();

  sim::RunOptions options;
  bool tampered = false;
  if (args.tamper_slot)
    options.before_audit = [&](sim::SimulationTrace& t) {
      tampered = sim::tamper_transfer(t, *args.tamper_slot, args.tamper_joules);
    };
  const sim::RunResult result = sim::run(scenario, options);
  if (args.tamper_slot && !tampered) {
    print_error(err, code::usage, "no transfer in the tamper slot", {{"slot", std::to_string(*args.tamper_slot)}});
    return kExitError;
  }

  try {
    for (const auto& p : sim::write_outputs(result, scenario.run.out_dir)) out << p.string() << "\n";
  } catch (const std::exception& e) {
    print_error(err, code::output_io, e.what(), {{"dir", scenario.run.out_dir}});
    return kExitError;
  }

  const auto& audit = result.audit;
  out << "audit slots=" << audit.slots.size() << " max_violation=" << format_double(audit.max_violation)
      << (audit.clean() ? " clean" : " VIOLATION") << "\n";
  if (!audit.clean()) {
    print_error(err, code::audit_violation, "energy balance broken",
                {{"slot", std::to_string(audit.worst_slot.value_or(0))},
                 {"violation", format_double(audit.max_violation)},
                 {"tolerance", format_double(audit.tolerance)}});
    return kExitAudit;
  }
  return kExitOk;
}

void write_transfer_curve(std::ostream& os, const CurveArgs& a) {
  using physics::Capacitor;
  require(std::isfinite(a.source_voltage) && a.source_voltage > 0.0, "source voltage must be positive");
  require(std::isfinite(a.bank_capacitance) && a.bank_capacitance > 0.0, "bank capacitance must be positive");
  require(std::isfinite(a.load_capacitance) && a.load_capacitance > 0.0, "load capacitance must be positive");
  const double vs = a.source_voltage;
  std::string line;
  auto field = [&](double v) {
    if (!line.empty()) line += ',';
    append_double(line, v);
  };

  if (a.mode == CurveMode::vs_preload) {
    require(a.points >= 1, "empty Vl grid");
    require(a.banks >= 1, "banks must be >= 1");
    const double cs = a.banks * a.bank_capacitance;
    os << "vl_V,delivered_J,ratio,charge_C\n";
    for (std::size_t i = 0; i < a.points; ++i) {
      const double vl = a.points == 1 ? 0.0 : vs * static_cast<double>(i) / static_cast<double>(a.points - 1);
      const auto m = physics::merge(Capacitor(cs, vs), Capacitor(a.load_capacitance, vl));
      line.clear();
      field(vl);
      field(m.energy_delivered_to_load);
      field(physics::transfer_ratio(a.banks, vl, vs));
      field(a.load_capacitance * (m.equilibrium_voltage - vl));
      os << line << "\n";
    }
    return;
  }
  require(a.max_banks >= 1, "empty bank-count grid");
  os << "n,cs_F,v_sl_V,delivered_J,ratio\n";
  for (unsigned n = 1; n <= a.max_banks; ++n) {
    const double cs = n * a.bank_capacitance;
    const auto m = physics::merge(Capacitor(cs, vs), Capacitor(a.load_capacitance, 0.0));
    line.clear();
    field(n);
    field(cs);
    field(m.equilibrium_voltage);
    field(m.energy_delivered_to_load);
    // Same definition as transfer_ratio but honouring a non-unit bank/load ratio.
    field((m.equilibrium_voltage / vs) * (m.equilibrium_voltage / vs));
    os << line << "\n";
  }
}

int cmd_transfer_curve(const CurveArgs& args, std::ostream& out, std::ostream& err) {
  // Render first so a bad grid leaves no partial file behind.
  std::ostringstream csv;
  try {
    write_transfer_curve(csv, args);
  } catch (const PreconditionError& e) {
    print_error(err, code::usage, e.what());
    return kExitError;
  }
  const char* name = args.mode == CurveMode::vs_preload ? "transfer_curve_vs_preload.csv" : "transfer_curve_vs_ratio.csv";
  return emit(args.out_dir, name, out, err, [&](std::ostream& os) { os << csv.str(); });
}

void write_transient(std::ostream& os, const TransientArgs& a) {
  const physics::Capacitor source(a.source_capacitance, a.source_voltage);
  const physics::Capacitor load(a.load_capacitance, a.load_voltage);
  const auto wave = a.inductance
                        ? physics::rlc_transient(source, load, a.resistance, *a.inductance, a.timestep, a.duration)
                        : physics::rc_transient(source, load, a.resistance, a.timestep, a.duration);
  physics::write_waveform_csv(os, wave);
}

int cmd_transient(const TransientArgs& args, std::ostream& out, std::ostream& err) {
  std::ostringstream csv;
  try {
    write_transient(csv, args);
  } catch (const PreconditionError& e) {
    print_error(err, code::usage, e.what());
    return kExitError;
  }
  return emit(args.out_dir, "waveform.csv", out, err, [&](std::ostream& os) { os << csv.str(); });
}

}  // namespace eps::cli
