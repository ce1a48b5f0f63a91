// Copyright 2026 The unravel Authors
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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "unravel/trajectories.hpp"

namespace unravel {

/// Generator description document:
///
///   {
///     "dimension": N,
///     "hamiltonian": [[re, im], ...],            // N*N pairs, row-major
///     "lindblad_operators": [[[re, im], ...], ...]
///   }
///
/// or, instead of "lindblad_operators", a Kossakowski pair
///
///     "basis": [[[re, im], ...], ...],           // each N*N, row-major
///     "kossakowski": [[re, im], ...]             // K*K, row-major
///
/// or a raw superoperator acting on column-major vec(rho)
///
///     "superoperator": [[re, im], ...]           // N^4 pairs, row-major
Liouvillian generator_from_json(const nlohmann::json& description);
nlohmann::json generator_to_json(const Liouvillian& generator);

CMatrix matrix_from_json(const nlohmann::json& pairs, Eigen::Index rows, Eigen::Index cols);
nlohmann::json matrix_to_json(const CMatrix& m);

/// Batch run settings; see docs in README for the JSON schema.
struct RunConfig {
  // Generator source: exactly one of model / description is set after loading.
  std::string model;
  std::map<std::string, double> parameters;
  std::optional<nlohmann::json> description;

  /// Amplitudes; empty means the last basis state |N-1>.
  std::optional<CVector> initial_state;
  std::optional<int> initial_basis;

  /// qsd | diffusive | jump | cp_qsd
  std::string unraveling = "qsd";
  /// For diffusive: named frame policy ("zero", "identity") or explicit matrices.
  std::string s_policy;
  std::optional<CMatrix> s_matrix;
  std::optional<CMatrix> S_matrix;

  double dt = 1e-3;
  double t_final = 1.0;
  long trajectories = 1000;
  std::uint64_t seed = 1;
  int record_stride = 10;
  double tolerance = 0.03;
  int classify_samples = 1000;
  bool classify_refine = true;
};

/// Parses a run configuration; relative generator file paths resolve against
/// `base_dir` and are inlined as a description.
RunConfig run_config_from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json run_config_to_json(const RunConfig& config);

std::shared_ptr<const Liouvillian> make_generator(const RunConfig& config);
TrajectoryConfig make_trajectory_config(const RunConfig& config,
                                        std::shared_ptr<const Liouvillian> generator);

}  // namespace unravel
