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

#include "unravel/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace unravel {

DensitySeries integrate_master_equation(const Liouvillian& generator, const CMatrix& rho0,
                                        double dt, double t_final, int record_stride) {
  const int n = generator.dim();
  if (rho0.rows() != n || rho0.cols() != n) {
    throw DimensionMismatch("integrate_master_equation: rho0 dimension mismatch");
  }
  if (!(dt > 0.0) || !(t_final > 0.0) || record_stride < 1) {
    throw InvalidArgument("integrate_master_equation: need dt > 0, t_final > 0, stride >= 1");
  }
  if (hermiticity_error(rho0) > tol::kStructural || std::abs(rho0.trace() - 1.0) > tol::kStructural) {
    throw InvalidArgument("integrate_master_equation: rho0 must be Hermitian with unit trace");
  }
  if (min_eigenvalue(rho0) < -tol::kNegativity) {
    throw InvalidArgument("integrate_master_equation: rho0 is not positive semidefinite");
  }

  const CMatrix& m = generator.matrix();
  const long steps = std::lround(t_final / dt);
  DensitySeries out;
  out.times.push_back(0.0);
  out.matrices.push_back(rho0);

  CVector x = vec(rho0);
  for (long k = 1; k <= steps; ++k) {
    const CVector k1 = m * x;
    const CVector k2 = m * (x + 0.5 * dt * k1);
    const CVector k3 = m * (x + 0.5 * dt * k2);
    const CVector k4 = m * (x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (k % record_stride == 0 || k == steps) {
      const CMatrix rho = unvec(x, n);
      if (!is_finite(rho) || rho.cwiseAbs().maxCoeff() > 1e6) {
        throw NumericalInstability("integrate_master_equation: solution diverged; reduce dt");
      }
      if (std::abs(rho.trace() - 1.0) > tol::kNegativity || hermiticity_error(rho) > tol::kNegativity) {
        throw NumericalInstability("integrate_master_equation: trace or Hermiticity drift");
      }
      if (k % record_stride == 0) {
        out.times.push_back(static_cast<double>(k) * dt);
        out.matrices.push_back(rho);
      }
    }
  }
  return out;
}

DensitySeries ensemble_average(const std::vector<TrajectoryRecord>& records) {
  if (records.empty()) throw InvalidArgument("ensemble_average: no records");
  const auto& grid = records.front().times;
  const int n = records.front().states.front().dim();
  EnsembleAccumulator acc(grid.size(), n);
  for (const auto& r : records) {
    if (r.times != grid) throw InvalidArgument("ensemble_average: records use different grids");
    acc.add(r);
  }
  return acc.mean(grid);
}

double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionMismatch("trace_distance: dimension mismatch");
  }
  return trace_norm_half(rho - sigma);
}

Eigen::Vector3d bloch_vector(const CMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw DimensionMismatch("bloch_vector: needs 2x2");
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

EnsembleAccumulator::EnsembleAccumulator(std::size_t n_times, int dim)
    : dim_(dim),
      sum_(n_times, CMatrix::Zero(dim, dim)),
      sum_sq_(n_times, RMatrix::Zero(dim, dim)) {}

void EnsembleAccumulator::add(const TrajectoryRecord& record) {
  if (record.states.size() != sum_.size()) {
    throw InvalidArgument("EnsembleAccumulator: record length differs from grid");
  }
  for (std::size_t t = 0; t < sum_.size(); ++t) {
    const CVector& v = record.states[t].vector();
    if (v.size() != dim_) throw DimensionMismatch("EnsembleAccumulator: state dimension");
    sum_[t].noalias() += v * v.adjoint();
    const RVector p = v.cwiseAbs2();
    sum_sq_[t].noalias() += p * p.transpose();
  }
  ++count_;
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  if (other.sum_.size() != sum_.size() || other.dim_ != dim_) {
    throw InvalidArgument("EnsembleAccumulator: merging different grids");
  }
  for (std::size_t t = 0; t < sum_.size(); ++t) {
    sum_[t] += other.sum_[t];
    sum_sq_[t] += other.sum_sq_[t];
  }
  count_ += other.count_;
}

DensitySeries EnsembleAccumulator::mean(const std::vector<double>& times) const {
  if (count_ == 0) throw InvalidArgument("EnsembleAccumulator: empty");
  if (times.size() != sum_.size()) throw InvalidArgument("EnsembleAccumulator: grid mismatch");
  DensitySeries out;
  out.times = times;
  out.matrices.reserve(sum_.size());
  for (const auto& s : sum_) {
    CMatrix rho = s / static_cast<double>(count_);
    out.matrices.push_back(0.5 * (rho + rho.adjoint()));
  }
  return out;
}

std::vector<RMatrix> EnsembleAccumulator::standard_errors() const {
  std::vector<RMatrix> out;
  out.reserve(sum_.size());
  const double m = static_cast<double>(count_);
  for (std::size_t t = 0; t < sum_.size(); ++t) {
    if (count_ < 2) {
      out.push_back(RMatrix::Zero(dim_, dim_));
      continue;
    }
    const CMatrix mean = sum_[t] / m;
    RMatrix var = sum_sq_[t] / m - mean.cwiseAbs2();
    var = (var * (m / (m - 1.0))).cwiseMax(0.0);
    out.push_back((var / m).cwiseSqrt());
  }
  return out;
}

double aggregate_error(const RMatrix& entrywise) {
  return trace_norm_half(entrywise.cast<Complex>());
}

EnsembleFailure::EnsembleFailure(long failures, long index, const std::string& first_message)
    : Error([&] {
        std::ostringstream os;
        os << failures << " trajectories failed; first (index " << index << "): " << first_message;
        return os.str();
      }()),
      failures_(failures),
      first_index_(index) {}

namespace {

constexpr long kChunk = 64;

struct ChunkResult {
  EnsembleAccumulator acc;
  std::vector<int> jump_counts;
  std::vector<double> first_jumps;
  long failures = 0;
  long first_failure = -1;
  std::string first_message;
};

}  // namespace

EnsembleResult run_ensemble(const TrajectoryConfig& config, const EnsembleOptions& options) {
  config.validate();
  if (options.trajectories < 1) throw InvalidArgument("run_ensemble: need at least one trajectory");

  const long m = options.trajectories;
  const std::size_t n_times = static_cast<std::size_t>(config.steps() / config.record_stride + 1);
  const int dim = config.generator->dim();
  const long n_chunks = (m + kChunk - 1) / kChunk;
  std::vector<ChunkResult> chunks(static_cast<std::size_t>(n_chunks));
  std::vector<double> times;
  std::mutex times_mutex;

  std::atomic<long> next_chunk{0};
  auto worker = [&] {
    for (long c = next_chunk++; c < n_chunks; c = next_chunk++) {
      ChunkResult& chunk = chunks[static_cast<std::size_t>(c)];
      chunk.acc = EnsembleAccumulator(n_times, dim);
      const long begin = c * kChunk;
      const long end = std::min(m, begin + kChunk);
      for (long i = begin; i < end; ++i) {
        TrajectoryConfig local = config;
        local.seed = stream_seed(config.seed, static_cast<std::uint64_t>(i));
        try {
          TrajectoryRecord record = run_trajectory(local);
          chunk.acc.add(record);
          chunk.jump_counts.push_back(static_cast<int>(record.jump_times.size()));
          chunk.first_jumps.push_back(record.jump_times.empty()
                                          ? std::numeric_limits<double>::quiet_NaN()
                                          : record.jump_times.front());
          if (i == 0) {
            std::lock_guard lock(times_mutex);
            times = record.times;
          }
        } catch (const Error& e) {
          if (chunk.failures++ == 0) {
            chunk.first_failure = i;
            chunk.first_message = e.what();
          }
        }
      }
    }
  };

  int workers = options.workers > 0 ? options.workers
                                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = static_cast<int>(std::clamp<long>(workers, 1, n_chunks));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  // Chunks are in index order, so the first failing chunk holds the lowest
  // failing trajectory.
  long failures = 0;
  const ChunkResult* first_failed = nullptr;
  for (const auto& chunk : chunks) {
    failures += chunk.failures;
    if (chunk.failures > 0 && first_failed == nullptr) first_failed = &chunk;
  }
  if (first_failed != nullptr) {
    throw EnsembleFailure(failures, first_failed->first_failure, first_failed->first_message);
  }

  EnsembleAccumulator total(n_times, dim);
  EnsembleResult result;
  for (const auto& chunk : chunks) {
    total.merge(chunk.acc);
    result.jump_counts.insert(result.jump_counts.end(), chunk.jump_counts.begin(),
                              chunk.jump_counts.end());
    result.first_jump_times.insert(result.first_jump_times.end(), chunk.first_jumps.begin(),
                                   chunk.first_jumps.end());
  }
  result.mean = total.mean(times);
  result.n_trajectories = total.count();
  for (const auto& se : total.standard_errors()) result.mc_error.push_back(aggregate_error(se));
  return result;
}

ValidationReport compare_with_master_equation(const TrajectoryConfig& config,
                                              const EnsembleResult& ensemble, double tolerance) {
  const DensitySeries exact =
      integrate_master_equation(*config.generator, config.initial_state.projector(), config.dt,
                                config.t_final, config.record_stride);
  if (exact.times.size() != ensemble.mean.times.size()) {
    throw InvalidArgument("compare_with_master_equation: grids differ");
  }
  ValidationReport report;
  report.tolerance = tolerance;
  report.n_trajectories = ensemble.n_trajectories;
  report.times = exact.times;
  for (std::size_t t = 0; t < exact.times.size(); ++t) {
    const double d = trace_distance(ensemble.mean.matrices[t], exact.matrices[t]);
    report.distances.push_back(d);
    report.mc_errors.push_back(ensemble.mc_error[t]);
    report.max_trace_distance = std::max(report.max_trace_distance, d);
    report.mc_error_estimate = std::max(report.mc_error_estimate, ensemble.mc_error[t]);
  }
  report.pass = report.max_trace_distance <= tolerance;
  return report;
}

ValidationReport validate_unraveling(const TrajectoryConfig& config, long trajectories,
                                     double tolerance, int workers) {
  if (trajectories < 100) throw InvalidArgument("validate_unraveling: need at least 100 trajectories");
  const EnsembleResult ensemble = run_ensemble(config, {trajectories, workers});
  return compare_with_master_equation(config, ensemble, tolerance);
}

}  // namespace unravel
