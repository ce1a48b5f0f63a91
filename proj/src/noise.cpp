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

#include "unravel/noise.hpp"

#include <cmath>

namespace unravel {
namespace {

double scale_of(const CMatrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

void require_symmetric(const CMatrix& s, const char* what) {
  if (s.rows() != s.cols()) throw DimensionMismatch(std::string(what) + ": matrix not square");
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale_of(s)) {
    throw InvalidArgument(std::string(what) + ": matrix is not symmetric");
  }
}

// Symmetric square root factor B with B B^T = C; eigenvalues in
// [-floor, 0) are clipped. Returns false when C is more negative than that.
bool psd_factor(const RMatrix& c, double floor, RMatrix& factor, double& min_eig) {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(0.5 * (c + c.transpose()));
  RVector values = solver.eigenvalues();
  min_eig = values(0);
  if (min_eig < -floor) return false;
  values = values.cwiseMax(0.0).cwiseSqrt();
  factor = solver.eigenvectors() * values.asDiagonal();
  return true;
}

CVector draw(const RMatrix& factor, double dt, Rng& rng) {
  std::normal_distribution<double> normal;
  const Eigen::Index m = factor.rows() / 2;
  RVector z(factor.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  const RVector x = std::sqrt(dt) * (factor * z);
  CVector out(m);
  for (Eigen::Index i = 0; i < m; ++i) out(i) = Complex(x(i), x(i + m));
  return out;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) {
  // splitmix64 finalizer over master + index
  std::uint64_t z = master_seed + index * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

NoiseSpec NoiseSpec::qsd(int dim) { return {CMatrix::Zero(dim, dim), NoiseOrigin::qsd_zero}; }

NoiseSpec NoiseSpec::explicit_matrix(CMatrix S) {
  require_symmetric(S, "NoiseSpec");
  return {std::move(S), NoiseOrigin::explicit_matrix};
}

RMatrix real_noise_covariance(const CMatrix& W, const CMatrix& S) {
  if (W.rows() != W.cols() || S.rows() != W.rows() || S.cols() != W.cols()) {
    throw DimensionMismatch("real_noise_covariance: W and S must be N x N");
  }
  const Eigen::Index n = W.rows();
  RMatrix c(2 * n, 2 * n);
  c.topLeftCorner(n, n) = 0.5 * (W + S).real();
  c.bottomRightCorner(n, n) = 0.5 * (W - S).real();
  c.topRightCorner(n, n) = 0.5 * (S.imag() - W.imag());
  c.bottomLeftCorner(n, n) = c.topRightCorner(n, n).transpose();
  return c;
}

bool validate_noise_spec(const CMatrix& W, const CMatrix& S) {
  require_symmetric(S, "validate_noise_spec");
  if (S.rows() != W.rows() || W.rows() != W.cols()) {
    throw DimensionMismatch("validate_noise_spec: W and S sizes differ");
  }
  const Eigen::Index n = W.rows();
  CMatrix block(2 * n, 2 * n);
  block << W, S, S.conjugate(), W.conjugate();
  return min_eigenvalue(block) >= -tol::kCovariance;
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

NoiseSpec build_S_from_s(const std::vector<CVector>& phi_perp, const CMatrix& s) {
  const auto m = static_cast<Eigen::Index>(phi_perp.size());
  if (s.rows() != m || s.cols() != m) {
    throw DimensionMismatch("build_S_from_s: s must be k x k for k vectors");
  }
  require_symmetric(s, "build_S_from_s");
  if (spectral_norm(s) > 1.0 + 1e-12) {
    throw InvalidArgument("build_S_from_s: spectral norm of s exceeds 1");
  }
  if (m == 0) throw InvalidArgument("build_S_from_s: no vectors given");
  const Eigen::Index n = phi_perp.front().size();
  CMatrix phi(n, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    if (phi_perp[a].size() != n) throw DimensionMismatch("build_S_from_s: vector sizes differ");
    phi.col(a) = phi_perp[a];
  }
  NoiseSpec spec;
  spec.S = phi * s.conjugate() * phi.transpose();
  spec.S = 0.5 * (spec.S + spec.S.transpose()).eval();
  spec.origin = NoiseOrigin::from_s;
  return spec;
}

Increment sample_increment(const CMatrix& W, const NoiseSpec& spec, const PureState& psi,
                           double dt, Rng& rng) {
  if (!(dt > 0.0)) throw InvalidArgument("sample_increment: dt must be positive");
  if (W.rows() != psi.dim() || spec.S.rows() != psi.dim()) {
    throw DimensionMismatch("sample_increment: W, S and psi dimensions differ");
  }
  const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
  RMatrix factor;
  double min_eig = 0.0;
  if (!psd_factor(real_noise_covariance(W, spec.S), tol::kCovariance * scale, factor, min_eig)) {
    const double w_min = min_eigenvalue(W);
    if (w_min < -tol::kNegativity) throw NotPositiveAtState(psi, w_min);
    throw InvalidArgument("sample_increment: noise self-correlation incompatible with W");
  }
  CVector dchi = draw(factor, dt, rng);
  const CVector& v = psi.vector();
  dchi -= v * v.dot(dchi);
  return {std::move(dchi), dt};
}

CorrelatedNoise::CorrelatedNoise(const CMatrix& s) : s_(s) {
  require_symmetric(s, "CorrelatedNoise");
  if (spectral_norm(s) > 1.0 + 1e-12) {
    throw InvalidArgument("CorrelatedNoise: spectral norm of s exceeds 1");
  }
  const Eigen::Index m = s.rows();
  double min_eig = 0.0;
  if (!psd_factor(real_noise_covariance(CMatrix::Identity(m, m), s), tol::kCovariance, factor_,
                  min_eig)) {
    throw InvalidArgument("CorrelatedNoise: covariance not positive semidefinite");
  }
}

CVector CorrelatedNoise::sample(double dt, Rng& rng) const { return draw(factor_, dt, rng); }

}  // namespace unravel
