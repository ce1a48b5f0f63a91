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

#include <cstdint>
#include <string>
#include <vector>

#include "unravel/trajectories.hpp"

namespace unravel {

struct DensitySeries {
  std::vector<double> times;
  std::vector<CMatrix> matrices;
};

/// Fixed-step RK4 on vec(rho)' = L vec(rho), recording every
/// `record_stride`-th step (times k * dt). Throws NumericalInstability when
/// the trace or Hermiticity drifts by more than 1e-8 or entries blow up.
DensitySeries integrate_master_equation(const Liouvillian& generator, const CMatrix& rho0,
                                        double dt, double t_final, int record_stride = 1);

/// rho(t) = (1/M) sum_i psi_i(t) psi_i(t)^dag over records sharing one grid.
DensitySeries ensemble_average(const std::vector<TrajectoryRecord>& records);

/// 1/2 sum |eig(rho - sigma)|.
double trace_distance(const CMatrix& rho, const CMatrix& sigma);

/// Bloch vector (x, y, z) of a 2x2 density matrix.
Eigen::Vector3d bloch_vector(const CMatrix& rho);

/// Streaming first and second moments of psi psi^dag on a time grid.
/// Merging is associative; merge in a fixed order for bit-exact sums.
class EnsembleAccumulator {
 public:
  EnsembleAccumulator() = default;
  EnsembleAccumulator(std::size_t n_times, int dim);

  void add(const TrajectoryRecord& record);
  void merge(const EnsembleAccumulator& other);

  long count() const { return count_; }
  DensitySeries mean(const std::vector<double>& times) const;
  /// Entrywise standard error of the mean of psi psi^dag at each time.
  std::vector<RMatrix> standard_errors() const;

 private:
  long count_ = 0;
  int dim_ = 0;
  std::vector<CMatrix> sum_;
  std::vector<RMatrix> sum_sq_;
};

/// Standard-error matrix aggregated with the trace-distance norm.
double aggregate_error(const RMatrix& entrywise);

struct EnsembleResult {
  DensitySeries mean;
  /// Per-time Monte Carlo error in trace-distance units.
  std::vector<double> mc_error;
  long n_trajectories = 0;
  std::vector<int> jump_counts;
  /// First jump time per trajectory, NaN when it never jumped.
  std::vector<double> first_jump_times;
};

/// Raised when trajectories of an ensemble fail; carries the count and the
/// first failure (by trajectory index).
class EnsembleFailure : public Error {
 public:
  EnsembleFailure(long failures, long index, const std::string& first_message);
  long failures() const { return failures_; }
  long first_index() const { return first_index_; }

 private:
  long failures_;
  long first_index_;
};

struct EnsembleOptions {
  long trajectories = 1000;
  /// 0 selects std::thread::hardware_concurrency().
  int workers = 0;
};

/// Runs trajectories i = 0..M-1 with seeds stream_seed(config.seed, i). The
/// result does not depend on the worker count.
EnsembleResult run_ensemble(const TrajectoryConfig& config, const EnsembleOptions& options);

struct ValidationReport {
  double max_trace_distance = 0.0;
  std::vector<double> times;
  std::vector<double> distances;
  std::vector<double> mc_errors;
  double mc_error_estimate = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  long n_trajectories = 0;
};

/// Compares an M-trajectory ensemble with the master equation on the
/// recording grid.
ValidationReport validate_unraveling(const TrajectoryConfig& config, long trajectories,
                                     double tolerance, int workers = 0);

ValidationReport compare_with_master_equation(const TrajectoryConfig& config,
                                              const EnsembleResult& ensemble, double tolerance);

}  // namespace unravel
