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

#include "unravel/trajectories.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace unravel {

NoisePolicy NoisePolicy::explicit_matrix(CMatrix S) {
  NoiseSpec::explicit_matrix(S);  // symmetry check
  return {NoisePolicyKind::explicit_matrix, std::move(S)};
}

NoisePolicy NoisePolicy::frame(CMatrix s) {
  CorrelatedNoise check(s);  // symmetry and norm check
  return {NoisePolicyKind::frame_s, std::move(s)};
}

std::string to_string(const Unraveling& u) {
  switch (u.kind) {
    case UnravelingKind::jump: return "jump";
    case UnravelingKind::cp_qsd: return "cp_qsd";
    case UnravelingKind::diffusive:
      switch (u.noise.kind) {
        case NoisePolicyKind::qsd: return "qsd";
        case NoisePolicyKind::explicit_matrix: return "diffusive(S)";
        case NoisePolicyKind::frame_s: return "diffusive(s)";
      }
  }
  return "?";
}

long TrajectoryConfig::steps() const { return std::lround(t_final / dt); }

std::vector<std::string> TrajectoryConfig::validate() const {
  if (!generator) throw InvalidArgument("trajectory config: no generator");
  if (initial_state.dim() != generator->dim()) {
    throw DimensionMismatch("trajectory config: initial state dimension differs from generator");
  }
  if (!(dt > 0.0) || !(t_final > 0.0) || dt > t_final) {
    throw InvalidArgument("trajectory config: need 0 < dt <= t_final");
  }
  if (record_stride < 1) throw InvalidArgument("trajectory config: record_stride must be >= 1");
  if (unraveling.kind == UnravelingKind::cp_qsd && generator->lindblad() == nullptr) {
    throw InvalidArgument("trajectory config: cp_qsd needs a generator with Lindblad data");
  }
  const int n = generator->dim();
  if (unraveling.kind == UnravelingKind::diffusive) {
    const auto& m = unraveling.noise.matrix;
    if (unraveling.noise.kind == NoisePolicyKind::explicit_matrix && (m.rows() != n || m.cols() != n)) {
      throw DimensionMismatch("trajectory config: explicit S must be N x N");
    }
    if (unraveling.noise.kind == NoisePolicyKind::frame_s &&
        (m.rows() != n - 1 || m.cols() != n - 1)) {
      throw DimensionMismatch("trajectory config: frame s must be (N-1) x (N-1)");
    }
  }

  std::vector<std::string> warnings;
  const double rate = compute_rate_structure(*generator, initial_state).w;
  if (dt * rate > 0.1) {
    std::ostringstream os;
    os << "dt * w = " << dt * rate << " at the initial state exceeds 0.1";
    warnings.push_back(os.str());
  }
  return warnings;
}

TransitionSpectrum transition_spectrum(const RateStructure& rs, const PureState& psi) {
  const int n = psi.dim();
  TransitionSpectrum out;
  if (n < 2) {
    out.rates = RVector(0);
    out.channels = CMatrix(n, 0);
    return out;
  }
  const CMatrix q = orthogonal_complement(psi.vector());
  const HermitianEigen eig = hermitian_eigen(q.adjoint() * rs.W * q);
  out.min_raw = eig.values(0);
  if (out.min_raw < -tol::kNegativity) throw NotPositiveAtState(psi, out.min_raw);
  // Rounding-level rates are zeroed too, so that sqrt(rate) does not turn
  // 1e-16 residue into 1e-8 noise.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, rs.L.cwiseAbs().maxCoeff());
  out.rates = eig.values.reverse().unaryExpr([floor](double r) { return r > floor ? r : 0.0; });
  out.channels = q * eig.vectors.rowwise().reverse();
  return out;
}

namespace {

PureState renormalized(CVector v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw NumericalInstability("trajectory step produced a zero or non-finite state");
  }
  return PureState::normalize(std::move(v));
}

CVector standard_complex_noise(Eigen::Index m, double dt, Rng& rng) {
  std::normal_distribution<double> normal;
  const double sd = std::sqrt(0.5 * dt);
  CVector out(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    out(i) = sd * Complex(re, im);
  }
  return out;
}

// (L(P) + w) v with P the projector onto v; homogeneous of degree one in v
// and norm-conserving, so RK4 stages need no renormalization.
CVector frictional_velocity(const Liouvillian& generator, const CVector& v) {
  const double nn = v.squaredNorm();
  const CMatrix L = generator.apply(v * v.adjoint() / nn);
  const CVector lv = L * v;
  const double mean = v.dot(lv).real() / nn;
  return lv - mean * v;
}

}  // namespace

PureState diffusive_step(const Liouvillian& generator, const PureState& psi, double dt,
                         const NoisePolicy& policy, Rng& rng) {
  if (policy.kind == NoisePolicyKind::frame_s) {
    const CorrelatedNoise noise(policy.matrix);
    return diffusive_step(generator, psi, dt, policy, &noise, rng);
  }
  return diffusive_step(generator, psi, dt, policy, nullptr, rng);
}

PureState diffusive_step(const Liouvillian& generator, const PureState& psi, double dt,
                         const NoisePolicy& policy, const CorrelatedNoise* noise, Rng& rng) {
  const RateStructure rs = compute_rate_structure(generator, psi);
  const TransitionSpectrum spec = transition_spectrum(rs, psi);
  const CVector& v = psi.vector();

  // drift - w/2 psi = (L + w/2) psi
  CVector next = v + (rs.drift - 0.5 * rs.w * v) * dt;
  if (spec.rates.size() == 0 || spec.rates.maxCoeff() <= 0.0) return renormalized(next);

  switch (policy.kind) {
    case NoisePolicyKind::qsd: {
      // W^(1/2) zeta with E[zeta zeta^dag] = dt, E[zeta zeta^T] = 0
      const CVector zeta = standard_complex_noise(spec.rates.size(), dt, rng);
      next += spec.channels * spec.rates.cwiseSqrt().cast<Complex>().cwiseProduct(zeta);
      break;
    }
    case NoisePolicyKind::explicit_matrix: {
      const CMatrix w_clipped =
          spec.channels * spec.rates.cast<Complex>().asDiagonal() * spec.channels.adjoint();
      next += sample_increment(w_clipped, NoiseSpec{policy.matrix, NoiseOrigin::explicit_matrix},
                               psi, dt, rng)
                  .dchi;
      break;
    }
    case NoisePolicyKind::frame_s: {
      if (noise == nullptr || noise->size() != spec.rates.size()) {
        throw InvalidArgument("diffusive_step: frame noise sampler missing or mis-sized");
      }
      const CVector dxi = noise->sample(dt, rng);
      const CMatrix phi = spec.channels * spec.rates.cwiseSqrt().cast<Complex>().asDiagonal();
      next += phi * dxi.conjugate();
      break;
    }
  }
  return renormalized(next);
}

CVector cp_qsd_drift(const CMatrix& hamiltonian, const std::vector<CMatrix>& operators,
                     const PureState& psi) {
  const CVector& v = psi.vector();
  CVector out = -kI * (hamiltonian * v);
  for (const auto& f : operators) {
    const CVector fv = f * v;
    const Complex mean_f = v.dot(fv);
    out += std::conj(mean_f) * fv - 0.5 * (f.adjoint() * fv) - 0.5 * std::norm(mean_f) * v;
  }
  return out;
}

std::vector<CVector> cp_qsd_noise_vectors(const std::vector<CMatrix>& operators,
                                          const PureState& psi) {
  const CVector& v = psi.vector();
  std::vector<CVector> out;
  out.reserve(operators.size());
  for (const auto& f : operators) {
    const CVector fv = f * v;
    out.push_back(fv - v.dot(fv) * v);
  }
  return out;
}

PureState cp_qsd_step(const CMatrix& hamiltonian, const std::vector<CMatrix>& operators,
                      const PureState& psi, double dt, Rng& rng) {
  if (hamiltonian.rows() != psi.dim()) throw DimensionMismatch("cp_qsd_step: dimension mismatch");
  CVector next = psi.vector() + cp_qsd_drift(hamiltonian, operators, psi) * dt;
  if (!operators.empty()) {
    const auto vectors = cp_qsd_noise_vectors(operators, psi);
    const CVector dxi = standard_complex_noise(static_cast<Eigen::Index>(vectors.size()), dt, rng);
    for (std::size_t a = 0; a < vectors.size(); ++a) {
      next += vectors[a] * std::conj(dxi(static_cast<Eigen::Index>(a)));
    }
  }
  return renormalized(next);
}

JumpStepResult jump_step(const Liouvillian& generator, const PureState& psi, double dt, Rng& rng,
                         JumpAccumulator& accumulator) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  if (accumulator.threshold < 0.0) {
    accumulator.threshold = -std::log1p(-uniform(rng));
  }
  std::optional<TransitionSpectrum> start_spec;
  if (!accumulator.has_rate) {
    start_spec = transition_spectrum(compute_rate_structure(generator, psi), psi);
    accumulator.rate = start_spec->rates.sum();
  }

  const CVector& v = psi.vector();
  const CVector k1 = frictional_velocity(generator, v);
  const CVector k2 = frictional_velocity(generator, v + 0.5 * dt * k1);
  const CVector k3 = frictional_velocity(generator, v + 0.5 * dt * k2);
  const CVector k4 = frictional_velocity(generator, v + dt * k3);
  PureState flowed = renormalized(v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));

  const TransitionSpectrum end_spec =
      transition_spectrum(compute_rate_structure(generator, flowed), flowed);
  const double end_rate = end_spec.rates.sum();
  accumulator.hazard += 0.5 * (accumulator.rate + end_rate) * dt;
  accumulator.rate = end_rate;
  accumulator.has_rate = true;
  if (accumulator.hazard < accumulator.threshold) return {std::move(flowed), false};

  accumulator.hazard = 0.0;
  accumulator.threshold = -std::log1p(-uniform(rng));
  if (!(end_rate > 0.0) && !start_spec) {
    start_spec = transition_spectrum(compute_rate_structure(generator, psi), psi);
  }
  const TransitionSpectrum& spec = end_rate > 0.0 ? end_spec : *start_spec;
  const double total = spec.rates.sum();
  if (!(total > 0.0)) return {std::move(flowed), false};
  accumulator.has_rate = false;

  const double u = uniform(rng) * total;
  double cumulative = 0.0;
  Eigen::Index channel = spec.rates.size() - 1;
  for (Eigen::Index k = 0; k < spec.rates.size(); ++k) {
    cumulative += spec.rates(k);
    if (u < cumulative) {
      channel = k;
      break;
    }
  }
  while (channel > 0 && spec.rates(channel) <= 0.0) --channel;
  return {PureState::normalize(spec.channels.col(channel)), true};
}

TrajectoryRecord run_trajectory(const TrajectoryConfig& config) {
  config.validate();
  const Liouvillian& generator = *config.generator;
  Rng rng(config.seed);
  TrajectoryRecord record;
  record.seed = config.seed;

  const long steps = config.steps();
  const auto reserve = static_cast<std::size_t>(steps / config.record_stride + 1);
  record.times.reserve(reserve);
  record.states.reserve(reserve);
  record.times.push_back(0.0);
  record.states.push_back(config.initial_state);

  std::optional<CorrelatedNoise> frame_noise;
  if (config.unraveling.kind == UnravelingKind::diffusive &&
      config.unraveling.noise.kind == NoisePolicyKind::frame_s) {
    frame_noise.emplace(config.unraveling.noise.matrix);
  }
  const LindbladData* lindblad = generator.lindblad();

  PureState psi = config.initial_state;
  JumpAccumulator accumulator;
  for (long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    try {
      switch (config.unraveling.kind) {
        case UnravelingKind::diffusive:
          psi = diffusive_step(generator, psi, config.dt, config.unraveling.noise,
                               frame_noise ? &*frame_noise : nullptr, rng);
          break;
        case UnravelingKind::cp_qsd:
          psi = cp_qsd_step(lindblad->hamiltonian, lindblad->operators, psi, config.dt, rng);
          break;
        case UnravelingKind::jump: {
          auto result = jump_step(generator, psi, config.dt, rng, accumulator);
          psi = std::move(result.state);
          if (result.jumped) record.jump_times.push_back(t);
          break;
        }
      }
    } catch (const NotPositiveAtState& e) {
      throw NotPositiveAtState(e.witness(), e.min_eigenvalue(), t - config.dt);
    }
    if (k % config.record_stride == 0) {
      record.times.push_back(t);
      record.states.push_back(psi);
    }
  }
  return record;
}

}  // namespace unravel
