/*
 * Copyright (c) 2026 The toponogov Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command line front end of the scenario runner.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "toponogov/errors.hpp"
#include "toponogov/scenario.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

toponogov::cli::Json parse_json(const std::string& text, const std::string& what) {
  try {
    return toponogov::cli::Json::parse(text);
  } catch (const toponogov::cli::Json::parse_error& e) {
    throw toponogov::cli::UsageError(what + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  namespace tc = toponogov::cli;

  CLI::App app{"Comparison geometry experiments: model-space trigonometry, comparison checks, "
               "thin-hinge iteration and defect descent."};
  std::string scenario, config_path, space_json, format, out;
  double kappa = 0.0, tolerance = 0.0;
  std::uint64_t seed = 0;
  int n_max = 0;
  bool timing = false, list = false;

  app.add_option("--scenario", scenario, "Scenario name (see --list)");
  app.add_option("--config", config_path, "Scenario config (JSON file)")->check(CLI::ExistingFile);
  auto* kappa_opt = app.add_option("--kappa", kappa, "Comparison curvature");
  app.add_option("--space", space_json, R"(Space as inline JSON, e.g. {"space":"sphere","radius":1})");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out, "Output path (default: standard output)");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed");
  auto* tol_opt = app.add_option("--tolerance", tolerance, "Angle tolerance (radians)")->check(CLI::NonNegativeNumber);
  auto* nmax_opt = app.add_option("--n-max", n_max, "Iteration cap for the thin-hinge iteration")
                       ->check(CLI::PositiveNumber);
  app.add_flag("--timing", timing, "Add wall time to the JSON report");
  app.add_flag("--list", list, "List scenarios and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  if (list) {
    for (const auto& n : tc::scenario_names()) std::cout << n << '\n';
    return 0;
  }

  try {
    tc::Json cfg_json = tc::Json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw tc::IoError("cannot read '" + config_path + "'");
      std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
      cfg_json = parse_json(text, config_path);
      if (!cfg_json.is_object()) throw tc::UsageError("config file must hold a JSON object");
    }
    if (!scenario.empty()) cfg_json["scenario"] = scenario;
    if (!space_json.empty()) cfg_json["space"] = parse_json(space_json, "--space");
    if (*kappa_opt) cfg_json["kappa"] = kappa;
    if (*seed_opt) cfg_json["seed"] = seed;
    if (*nmax_opt) cfg_json["n_max"] = n_max;
    if (!format.empty()) cfg_json["format"] = format;
    if (timing) cfg_json["timing"] = true;
    if (!cfg_json.contains("scenario")) throw tc::UsageError("no scenario given (use --scenario or a config file)");

    tc::ScenarioConfig cfg = tc::config_from_json(cfg_json);
    if (*tol_opt) cfg.tol.angle = tolerance;
    const tc::Report report = tc::run_scenario(cfg);
    tc::emit_report(report, cfg.format, out);
    return 0;
  } catch (const tc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tc::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}
