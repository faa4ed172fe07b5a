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

// Experiment configs and the command implementations behind the uhlab tool.

#ifndef UHLAB_TOOLS_CLI_HPP
#define UHLAB_TOOLS_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uhlab/io.hpp"

namespace uhlab::cli {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitInconclusive = 2 };

struct InputFile {
  std::string path;  // as written in the config
  std::string sha1;  // git blob hash of the contents
};

struct ExperimentConfig {
  std::string path;
  std::string sha1;
  /// (section, key, value) in file order.
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections;

  // [model]
  std::string kind;  // jacobi | cmv
  BaseDynamics dynamics = BaseDynamics::rotation(kGoldenFrequency);
  SamplingMap a, b, f;
  std::vector<InputFile> inputs;
  std::optional<double> param;

  // [uh]
  ScanParams scan_params;

  // [scan]
  double scan_lo = -3.0, scan_hi = 3.0, scan_step = 1e-3;

  // [truncate]
  std::size_t truncation_size = 200;
  std::vector<BasePoint> base_points;
  double boundary_phase = 0.0;
  double delta = 1e-2;

  // [pipeline]
  SupportBox support;
  double eps_target = 0.1;
  int budget = 24;
  int max_retries = 6;
  int map_resolution = 512;
  std::uint64_t seed = 1;
};

/// Parses an ini-style config; map files resolve relative to the config's
/// directory. Throws Error(ConfigInvalid) on unknown keys or bad values.
ExperimentConfig load_config(const std::string& path);

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::optional<double> param;
};

struct RunReport {
  std::string command;
  int exit_code = kExitOk;
  std::string status;
  std::vector<std::string> outputs;
  std::vector<std::string> notes;
  double wall_time = 0.0;
  io::Json summary;  // command-specific headline numbers
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"scan", "certify", "perturb", "compare", "truncate", "grid-dump"};
  return c;
}

/// Runs one command and writes its outputs plus report.json into out_dir.
RunReport run(const std::string& command, const ExperimentConfig& cfg, const RunOptions& opt);

/// Git blob hash ("blob <size>\0" + contents) as lowercase hex SHA-1.
std::string git_blob_sha1(const std::string& contents);

}  // namespace uhlab::cli

#endif  // UHLAB_TOOLS_CLI_HPP
