/*
 * Copyright 2026 The uhlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <CLI11.hpp>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace uhlab::cli;
  CLI::App app{"Uniform hyperbolicity experiments for Jacobi and CMV cocycles"};
  std::string command, config;
  RunOptions opt;
  std::uint64_t seed = 0;
  double param = 0.0;
  app.add_option("command", command, "scan | certify | perturb | compare | truncate | grid-dump")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("--config", config, "experiment config (ini)")->required();
  app.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "overrides pipeline.seed");
  app.add_option("--threads", opt.threads, "worker cap")->capture_default_str()->check(CLI::PositiveNumber);
  auto* param_opt = app.add_option("--param", param, "energy E or phase psi for certify, perturb and grid-dump");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  if (*seed_opt) opt.seed = seed;
  if (*param_opt) opt.param = param;
  try {
    const auto cfg = load_config(config);
    const auto rep = run(command, cfg, opt);
    for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
    std::cout << rep.command << ": " << rep.status << " " << rep.summary.dump() << "\n";
    for (const auto& o : rep.outputs) std::cout << "  wrote " << o << "\n";
    std::cout << "  threads " << opt.threads << ", wall time " << rep.wall_time << " s\n";
    return rep.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
