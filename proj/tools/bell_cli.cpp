// Copyright (c) 2026 The bell-lab developers
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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bell/scenario.hpp"

namespace {

int run_curve(const std::vector<std::string>& states, const std::vector<std::string>& densities,
              const std::vector<std::string>& models, double start, double stop, double step,
              const bell::IntegrationConfig& cfg, const std::string& output) {
  std::vector<std::pair<std::string, bell::CorrelationSource>> sources;
  try {
    for (const auto& name : states)
      sources.emplace_back("state:" + name, bell::make_named_state(name));
    for (const auto& name : densities) {
      if (name == "maximally-mixed")
        sources.emplace_back("density:maximally-mixed", bell::DensityMatrix::maximally_mixed());
      else
        sources.emplace_back("density:pure-" + name,
                             bell::density_from_pure(bell::make_named_state(name)));
    }
    for (const auto& name : models)
      sources.emplace_back("model:" + name, bell::make_model(name));
  } catch (const std::exception& e) {
    std::cerr << "curve error: " << e.what() << "\n";
    return 1;
  }

  const std::string target = bell::resolve_output_path(output);
  if (target == "-")
    return bell::emit_correlation_curve(sources, start, stop, step, cfg, std::cout);
  std::ofstream out(target, std::ios::binary);
  if (!out) {
    std::cerr << "curve error: cannot open output file '" << target << "'\n";
    return 1;
  }
  return bell::emit_correlation_curve(sources, start, stop, step, cfg, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bell-lab: two-qubit spin-correlation laboratory"};
  app.require_subcommand(1);

  // run
  std::string scenario_path;
  bell::RunOverrides overrides;
  std::uint64_t seed_opt = 0, samples_opt = 0;
  unsigned threads_opt = 0;
  std::string output_opt;
  CLI::App* run = app.add_subcommand("run", "evaluate a scenario file");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  CLI::Option* run_seed = run->add_option("--seed", seed_opt, "override the scenario seed");
  CLI::Option* run_samples =
      run->add_option("--samples", samples_opt, "override the sample count");
  CLI::Option* run_threads =
      run->add_option("--threads", threads_opt, "worker threads (0 = auto)");
  CLI::Option* run_output = run->add_option("--output,-o", output_opt, "override the output path");

  // paper-check
  CLI::App* check = app.add_subcommand(
      "paper-check", "verify the built-in 60-degree singlet reference values");

  // curve
  std::vector<std::string> curve_states, curve_densities, curve_models;
  double start = 0.0, stop = 180.0, step = 5.0;
  std::uint64_t curve_samples = 100000, curve_seed = 1;
  unsigned curve_threads = 0;
  std::string curve_method = "monte-carlo";
  std::string curve_output = "-";
  CLI::App* curve = app.add_subcommand(
      "curve", "tabulate correlation vs analyzer angle for one or more sources");
  curve->add_option("--state", curve_states, "named state column (repeatable)");
  curve->add_option("--density", curve_densities,
                    "density column: maximally-mixed or a pure state name (repeatable)");
  curve->add_option("--model", curve_models, "hidden-variable model column (repeatable)");
  curve->add_option("--start", start, "first angle in degrees");
  curve->add_option("--stop", stop, "last angle in degrees");
  curve->add_option("--step", step, "angle increment in degrees");
  curve->add_option("--samples", curve_samples, "Monte Carlo samples per point");
  curve->add_option("--seed", curve_seed, "Monte Carlo seed");
  curve->add_option("--threads", curve_threads, "worker threads (0 = auto)");
  curve->add_option("--method", curve_method, "monte-carlo or quadrature");
  curve->add_option("--output,-o", curve_output, "output path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (run->parsed()) {
    if (*run_seed) overrides.seed = seed_opt;
    if (*run_samples) overrides.samples = samples_opt;
    if (*run_threads) overrides.threads = threads_opt;
    if (*run_output) overrides.output = output_opt;
    return bell::run_scenario_file(scenario_path, overrides);
  }

  if (check->parsed()) {
    const bell::ReferenceCheckReport report = bell::paper_check();
    std::cout << bell::render(report);
    return report.all_ok ? 0 : 3;
  }

  if (curve->parsed()) {
    bell::IntegrationConfig cfg;
    if (curve_method == "monte-carlo") {
      cfg.method = bell::IntegrationConfig::Method::MonteCarlo;
    } else if (curve_method == "quadrature") {
      cfg.method = bell::IntegrationConfig::Method::SphereQuadrature;
    } else {
      std::cerr << "curve error: unknown method '" << curve_method << "'\n";
      return 1;
    }
    cfg.sample_count = curve_samples;
    cfg.seed = curve_seed;
    cfg.threads = curve_threads;
    return run_curve(curve_states, curve_densities, curve_models, start, stop, step, cfg,
                     curve_output);
  }

  return 1;
}
