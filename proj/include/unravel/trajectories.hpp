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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "unravel/noise.hpp"
#include "unravel/rate_structures.hpp"

namespace unravel {

/// How the self-correlation S of the diffusive noise is chosen at each step.
enum class NoisePolicyKind {
  /// S = 0, sampled from the W-correlated noise directly.
  qsd,
  /// A fixed S, checked against W(psi) at every step.
  explicit_matrix,
  /// A fixed (N-1)x(N-1) matrix s applied in the eigenframe of W(psi):
  /// dchi = phi_a conj(dxi_a), W = sum_a phi_a phi_a^dag, E[dxi dxi^T] = s dt.
  frame_s,
};

struct NoisePolicy {
  NoisePolicyKind kind = NoisePolicyKind::qsd;
  CMatrix matrix;

  static NoisePolicy qsd() { return {}; }
  static NoisePolicy explicit_matrix(CMatrix S);
  static NoisePolicy frame(CMatrix s);
};

enum class UnravelingKind { diffusive, jump, cp_qsd };

struct Unraveling {
  UnravelingKind kind = UnravelingKind::diffusive;
  NoisePolicy noise;

  static Unraveling diffusive(NoisePolicy policy = NoisePolicy::qsd()) {
    return {UnravelingKind::diffusive, std::move(policy)};
  }
  static Unraveling jump() { return {UnravelingKind::jump, {}}; }
  static Unraveling cp_qsd() { return {UnravelingKind::cp_qsd, {}}; }
};

std::string to_string(const Unraveling& u);

struct TrajectoryConfig {
  std::shared_ptr<const Liouvillian> generator;
  PureState initial_state = PureState::basis(1, 0);
  double dt = 1e-3;
  double t_final = 1.0;
  Unraveling unraveling;
  std::uint64_t seed = 0;
  int record_stride = 1;

  long steps() const;
  /// Throws InvalidArgument on inconsistent settings; returns warnings
  /// (currently only dt * rate > 0.1).
  std::vector<std::string> validate() const;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<PureState> states;
  std::vector<double> jump_times;
  std::uint64_t seed = 0;
};

/// Spectral decomposition of W(psi) on the complement of psi, eigenvalues
/// descending with values in [-tol::kNegativity, 0) clipped to zero. Positive
/// values at rounding level (64 eps max|L|) are zeroed as well.
struct TransitionSpectrum {
  RVector rates;
  CMatrix channels;  // N x (N-1), orthonormal, orthogonal to psi
  double min_raw = 0.0;
};

/// Throws NotPositiveAtState when an eigenvalue lies below -tol::kNegativity.
TransitionSpectrum transition_spectrum(const RateStructure& rs, const PureState& psi);

/// Euler-Maruyama step psi + (L + w/2) psi dt + dchi, then renormalized.
PureState diffusive_step(const Liouvillian& generator, const PureState& psi, double dt,
                         const NoisePolicy& policy, Rng& rng);

/// Step with a cached frame-noise sampler; `noise` must match policy.matrix.
PureState diffusive_step(const Liouvillian& generator, const PureState& psi, double dt,
                         const NoisePolicy& policy, const CorrelatedNoise* noise, Rng& rng);

/// (-iH + <F_a^dag> F_a - 1/2 F_a^dag F_a - 1/2 |<F_a>|^2) psi.
CVector cp_qsd_drift(const CMatrix& hamiltonian, const std::vector<CMatrix>& operators,
                     const PureState& psi);

/// (F_a - <F_a>) psi for each operator.
std::vector<CVector> cp_qsd_noise_vectors(const std::vector<CMatrix>& operators,
                                          const PureState& psi);

PureState cp_qsd_step(const CMatrix& hamiltonian, const std::vector<CMatrix>& operators,
                      const PureState& psi, double dt, Rng& rng);

/// Integrated hazard since the last jump and the exponential threshold that
/// triggers the next one. A negative threshold means "draw on first use".
/// `rate` caches w at the state returned by the previous jump_step; pass that
/// same state to the next call or reset `has_rate`.
struct JumpAccumulator {
  double hazard = 0.0;
  double threshold = -1.0;
  bool has_rate = false;
  double rate = 0.0;
};

struct JumpStepResult {
  PureState state;
  bool jumped = false;
};

/// Frictional flow d psi/dt = (L + w) psi integrated by one RK4 step, hazard
/// accumulated by the trapezoid rule, and a jump into an eigenvector of W
/// (chosen with probability rate_k / w) when the hazard crosses the threshold.
JumpStepResult jump_step(const Liouvillian& generator, const PureState& psi, double dt, Rng& rng,
                         JumpAccumulator& accumulator);

/// Deterministic in (config, config.seed).
TrajectoryRecord run_trajectory(const TrajectoryConfig& config);

}  // namespace unravel
