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
#include <random>
#include <vector>

#include "unravel/linalg.hpp"

namespace unravel {

using Rng = std::mt19937_64;

/// Seed of the private RNG stream for trajectory `index` under `master_seed`.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index);

enum class NoiseOrigin { qsd_zero, explicit_matrix, from_s };

/// Self-correlation E[dchi dchi^T] = S dt of the complex noise. S = 0 is
/// quantum state diffusion; every S passing validate_noise_spec against the
/// W in force gives another diffusive unraveling of the same generator.
struct NoiseSpec {
  CMatrix S;
  NoiseOrigin origin = NoiseOrigin::qsd_zero;

  static NoiseSpec qsd(int dim);
  /// Requires S = S^T within 1e-12.
  static NoiseSpec explicit_matrix(CMatrix S);
};

struct Increment {
  CVector dchi;
  double dt = 0.0;
};

/// Real covariance of (u, v), dchi = u + i v, per unit time:
///   E[u u^T] = Re(W + S)/2, E[v v^T] = Re(W - S)/2, E[u v^T] = (Im S - Im W)/2.
RMatrix real_noise_covariance(const CMatrix& W, const CMatrix& S);

/// True iff [[W, S], [conj(S), conj(W)]] >= -1e-10 (the joint covariance of
/// (dchi, conj(dchi)) per unit time). Throws InvalidArgument on asymmetric S.
bool validate_noise_spec(const CMatrix& W, const CMatrix& S);

/// Largest singular value.
double spectral_norm(const CMatrix& m);

/// S = sum_ab conj(s_ab) phi_a phi_b^T for dchi = phi_a conj(dxi_a) with
/// E[dxi dxi^dag] = 1 dt and E[dxi dxi^T] = s dt. Needs ||s|| <= 1 and s = s^T.
NoiseSpec build_S_from_s(const std::vector<CVector>& phi_perp, const CMatrix& s);

/// Zero-mean complex Gaussian with E[dchi dchi^dag] = W dt and
/// E[dchi dchi^T] = S dt, projected onto the complement of psi.
Increment sample_increment(const CMatrix& W, const NoiseSpec& spec, const PureState& psi,
                           double dt, Rng& rng);

/// Sampler for m standard complex noises xi with E[dxi dxi^dag] = I dt and
/// E[dxi dxi^T] = s dt. The real covariance is factored once on construction.
class CorrelatedNoise {
 public:
  explicit CorrelatedNoise(const CMatrix& s);

  int size() const { return static_cast<int>(factor_.rows() / 2); }
  const CMatrix& s() const { return s_; }
  CVector sample(double dt, Rng& rng) const;

 private:
  CMatrix s_;
  RMatrix factor_;
};

}  // namespace unravel
