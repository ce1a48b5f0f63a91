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

#include <doctest.h>

#include "oracles.hpp"
#include "unravel/ensemble.hpp"
#include "unravel/models.hpp"

using namespace unravel;

namespace {

std::shared_ptr<const Liouvillian> share(Liouvillian lv) {
  return std::make_shared<const Liouvillian>(std::move(lv));
}

CMatrix bloch_rho(const Eigen::Vector3d& r) {
  return 0.5 * (CMatrix::Identity(2, 2) + r(0) * pauli_x() + r(1) * pauli_y() + r(2) * pauli_z());
}

TrajectoryConfig damping_config(Unraveling u, double t_final = 1.0) {
  TrajectoryConfig c;
  c.generator = share(models::amplitude_damping(1.0));
  c.initial_state = PureState::from_normalized(oracle::bloch_state(2.2, 0.5));
  c.unraveling = std::move(u);
  c.dt = 1e-3;
  c.t_final = t_final;
  c.record_stride = 50;
  c.seed = 2026;
  return c;
}

double max_distance(const DensitySeries& a, const DensitySeries& b) {
  double d = 0.0;
  for (std::size_t t = 0; t < a.matrices.size(); ++t) d = std::max(d, trace_distance(a.matrices[t], b.matrices[t]));
  return d;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

TEST_CASE("trace_distance examples") {
  CMatrix zero = CMatrix::Zero(2, 2), one = CMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  one(1, 1) = 1.0;
  std::mt19937_64 rng(1);
  const CVector v = oracle::haar_vector(3, rng);
  const CMatrix rho = v * v.adjoint();
  CHECK(trace_distance(rho, rho) == doctest::Approx(0.0).scale(1.0));
  CHECK(trace_distance(zero, one) == doctest::Approx(1.0));
  CHECK(trace_distance(0.5 * CMatrix::Identity(2, 2), zero) == doctest::Approx(0.5));
  CHECK_THROWS_AS(trace_distance(rho, zero), DimensionMismatch);
}

TEST_CASE("bloch_vector") {
  const Eigen::Vector3d r(0.3, -0.4, 0.5);
  CHECK((bloch_vector(bloch_rho(r)) - r).norm() < 1e-15);
  const CVector plus = oracle::bloch_state(M_PI / 2, 0.0);
  CHECK((bloch_vector(plus * plus.adjoint()) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(bloch_vector(CMatrix::Identity(3, 3) / 3.0), DimensionMismatch);
}

TEST_CASE("master equation: amplitude damping closed form") {
  CMatrix rho0 = CMatrix::Zero(2, 2);
  rho0(1, 1) = 1.0;
  for (double gamma : {1.0, 0.4}) {
    const DensitySeries s = integrate_master_equation(models::amplitude_damping(gamma), rho0, 1e-3, 2.0, 10);
    REQUIRE(s.times.size() == 201);
    for (std::size_t t = 0; t < s.times.size(); ++t) {
      CHECK(s.times[t] == doctest::Approx(0.01 * t));
      CHECK(std::abs(s.matrices[t](1, 1).real() - std::exp(-gamma * s.times[t])) < 1e-8);
      CHECK(std::abs(s.matrices[t].trace() - 1.0) < 1e-10);
      CHECK(hermiticity_error(s.matrices[t]) < 1e-10);
    }
  }
}

TEST_CASE("master equation: zero generator keeps rho constant") {
  std::mt19937_64 rng(2);
  const CVector v = oracle::haar_vector(3, rng);
  const CMatrix rho0 = v * v.adjoint();
  const Liouvillian zero = build_lindblad(CMatrix::Zero(3, 3), {});
  const DensitySeries s = integrate_master_equation(zero, rho0, 0.1, 1.0);
  for (const auto& m : s.matrices) CHECK(oracle::max_abs(m - rho0) < 1e-15);
}

TEST_CASE("master equation: Pauli Bloch decay rates") {
  // r_i(t) = exp(-Gamma_i t) r_i with Gamma_i = 2 (g_j + g_k).
  for (double g0 : {1.0, 0.5}) {
    const double g[3] = {g0, g0, -0.4 * g0};
    const Eigen::Vector3d gamma(2 * (g[1] + g[2]), 2 * (g[0] + g[2]), 2 * (g[0] + g[1]));
    CHECK(gamma(0) == doctest::Approx(1.2 * g0));
    CHECK(gamma(2) == doctest::Approx(4.0 * g0));
    const Eigen::Vector3d r0 = Eigen::Vector3d(1, 1, 1).normalized();
    const DensitySeries s =
        integrate_master_equation(models::pauli(g[0], g[1], g[2]), bloch_rho(r0), 1e-3, 1.5, 100);
    for (std::size_t t = 0; t < s.times.size(); ++t) {
      const Eigen::Vector3d r = bloch_vector(s.matrices[t]);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(r(i) - std::exp(-gamma(i) * s.times[t]) * r0(i)) < 1e-9);
    }
  }
}

TEST_CASE("master equation: non-CP Pauli generator keeps pure states positive") {
  std::mt19937_64 rng(3);
  const Liouvillian lv = models::pauli(1.0, 1.0, -0.4);
  for (int k = 0; k < 20; ++k) {
    const CVector v = oracle::haar_vector(2, rng);
    const DensitySeries s = integrate_master_equation(lv, v * v.adjoint(), 1e-3, 3.0, 10);
    double least = 1.0;
    for (const auto& m : s.matrices) least = std::min(least, min_eigenvalue(m));
    CHECK(least >= -1e-8);
  }
}

TEST_CASE("master equation: RK4 error shrinks ~16x when dt halves") {
  CMatrix rho0 = CMatrix::Zero(2, 2);
  rho0(1, 1) = 1.0;
  const Liouvillian lv = models::amplitude_damping(1.0);
  auto error = [&](double dt) {
    const DensitySeries s = integrate_master_equation(lv, rho0, dt, 2.0);
    return std::abs(s.matrices.back()(1, 1).real() - std::exp(-2.0));
  };
  const double ratio = error(0.1) / error(0.05);
  CHECK(ratio > 13.0);
  CHECK(ratio < 19.0);
}

TEST_CASE("master equation errors") {
  const Liouvillian lv = models::amplitude_damping(1.0);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  bad(0, 0) = 1.0;
  CHECK_THROWS_AS(integrate_master_equation(lv, bad, 1e-3, 1.0), InvalidArgument);
  CHECK_THROWS_AS(integrate_master_equation(lv, CMatrix::Identity(2, 2), 1e-3, 1.0), InvalidArgument);
  CMatrix negative = CMatrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(integrate_master_equation(lv, negative, 1e-3, 1.0), InvalidArgument);
  CHECK_THROWS_AS(integrate_master_equation(lv, CMatrix::Identity(3, 3) / 3.0, 1e-3, 1.0), DimensionMismatch);
  CMatrix rho0 = CMatrix::Zero(2, 2);
  rho0(1, 1) = 1.0;
  CHECK_THROWS_AS(integrate_master_equation(models::amplitude_damping(1000.0), rho0, 0.01, 1.0),
                  NumericalInstability);
}

TEST_CASE("ensemble_average") {
  TrajectoryConfig c = damping_config(Unraveling::diffusive(), 0.2);
  const TrajectoryRecord r = run_trajectory(c);
  const DensitySeries single = ensemble_average({r});
  for (std::size_t t = 0; t < single.matrices.size(); ++t) {
    CHECK(oracle::max_abs(single.matrices[t] - r.states[t].projector()) < 1e-15);
  }
  std::vector<TrajectoryRecord> records;
  for (std::uint64_t s = 0; s < 20; ++s) {
    c.seed = s;
    records.push_back(run_trajectory(c));
  }
  for (const auto& m : ensemble_average(records).matrices) {
    CHECK(hermiticity_error(m) == 0.0);
    CHECK(std::abs(m.trace() - 1.0) < 1e-14);
  }
  c.t_final = 0.3;
  records.push_back(run_trajectory(c));
  CHECK_THROWS_AS(ensemble_average(records), InvalidArgument);
  CHECK_THROWS_AS(ensemble_average({}), InvalidArgument);
}

TEST_CASE("EnsembleAccumulator merge matches sequential accumulation") {
  TrajectoryConfig c = damping_config(Unraveling::diffusive(), 0.2);
  std::vector<TrajectoryRecord> records;
  for (std::uint64_t s = 0; s < 12; ++s) {
    c.seed = s;
    records.push_back(run_trajectory(c));
  }
  const std::size_t n = records.front().times.size();
  EnsembleAccumulator all(n, 2), a(n, 2), b(n, 2);
  for (std::size_t i = 0; i < records.size(); ++i) {
    all.add(records[i]);
    (i < 5 ? a : b).add(records[i]);
  }
  a.merge(b);
  CHECK(a.count() == 12);
  const auto ma = a.mean(records.front().times), mall = all.mean(records.front().times);
  const auto ea = a.standard_errors(), eall = all.standard_errors();
  for (std::size_t t = 0; t < n; ++t) {
    CHECK(oracle::max_abs(ma.matrices[t] - mall.matrices[t]) < 1e-15);
    CHECK((ea[t] - eall[t]).cwiseAbs().maxCoeff() < 1e-7);  // sqrt of a rounding-level variance at t = 0
  }
  // standard error against a direct computation at the last time
  const std::size_t t = n - 1;
  double sum = 0.0, sq = 0.0;
  for (const auto& r : records) {
    const double p = std::norm(r.states[t][1]);
    sum += p;
    sq += p * p;
  }
  const double m = 12.0, mean = sum / m;
  const double se = std::sqrt((sq / m - mean * mean) * m / (m - 1.0) / m);
  CHECK(eall[t](1, 1) == doctest::Approx(se));
}

TEST_CASE("aggregate_error is half the sum of absolute eigenvalues") {
  RMatrix e(2, 2);
  e << 0.01, 0.02, 0.02, 0.01;  // eigenvalues 0.03, -0.01
  CHECK(aggregate_error(e) == doctest::Approx(0.02));
}

TEST_CASE("run_ensemble does not depend on the worker count") {
  TrajectoryConfig c = damping_config(Unraveling::jump(), 0.5);
  const EnsembleResult one = run_ensemble(c, {150, 1});
  const EnsembleResult many = run_ensemble(c, {150, 3});
  CHECK(one.n_trajectories == 150);
  REQUIRE(one.mean.matrices.size() == many.mean.matrices.size());
  for (std::size_t t = 0; t < one.mean.matrices.size(); ++t) {
    CHECK(one.mean.matrices[t] == many.mean.matrices[t]);
    CHECK(one.mc_error[t] == many.mc_error[t]);
  }
  CHECK(one.jump_counts == many.jump_counts);
  REQUIRE(one.first_jump_times.size() == 150);
  for (std::size_t i = 0; i < 150; ++i) {
    CHECK((one.jump_counts[i] == 0) == std::isnan(one.first_jump_times[i]));
  }
}

TEST_CASE("run_ensemble: seeds follow the per-index streams") {
  TrajectoryConfig c = damping_config(Unraveling::diffusive(), 0.1);
  const EnsembleResult e = run_ensemble(c, {3, 2});
  std::vector<TrajectoryRecord> records;
  for (std::uint64_t i = 0; i < 3; ++i) {
    TrajectoryConfig local = c;
    local.seed = stream_seed(c.seed, i);
    records.push_back(run_trajectory(local));
  }
  const DensitySeries direct = ensemble_average(records);
  for (std::size_t t = 0; t < direct.matrices.size(); ++t) {
    CHECK(oracle::max_abs(direct.matrices[t] - e.mean.matrices[t]) < 1e-15);
  }
}

TEST_CASE("run_ensemble reports failing trajectories") {
  TrajectoryConfig c;
  c.generator = share(models::pauli(1.0, 1.0, -1.2));
  c.initial_state = PureState::from_normalized(oracle::bloch_state(M_PI / 2, 0.0));
  c.t_final = 0.01;
  try {
    run_ensemble(c, {70, 2});
    FAIL("expected EnsembleFailure");
  } catch (const EnsembleFailure& e) {
    CHECK(e.failures() == 70);
    CHECK(e.first_index() == 0);
  }
}

TEST_CASE("disjoint half-ensembles agree within twice the combined error") {
  TrajectoryConfig c = damping_config(Unraveling::diffusive());
  const EnsembleResult a = run_ensemble(c, {1000, 0});
  c.seed += 1;
  const EnsembleResult b = run_ensemble(c, {1000, 0});
  for (std::size_t t = 1; t < a.mean.matrices.size(); ++t) {
    const double bound = 2.0 * std::hypot(a.mc_error[t], b.mc_error[t]);
    CHECK(trace_distance(a.mean.matrices[t], b.mean.matrices[t]) <= bound);
  }
}

TEST_CASE("cp_qsd and invariant QSD ensembles agree on a Lindblad generator") {
  TrajectoryConfig c = damping_config(Unraveling::diffusive());
  const EnsembleResult qsd = run_ensemble(c, {1000, 0});
  c.unraveling = Unraveling::cp_qsd();
  const EnsembleResult cp = run_ensemble(c, {1000, 0});
  CHECK(max_distance(qsd.mean, cp.mean) <= 2.0 * std::hypot(max_of(qsd.mc_error), max_of(cp.mc_error)));
}

TEST_CASE("validate_unraveling") {
  const TrajectoryConfig c = damping_config(Unraveling::jump());
  const ValidationReport r = validate_unraveling(c, 400, 0.1);
  CHECK(r.pass);
  CHECK(r.n_trajectories == 400);
  CHECK(r.times.size() == r.distances.size());
  CHECK(r.mc_errors.size() == r.distances.size());
  CHECK(r.max_trace_distance == doctest::Approx(max_of(r.distances)));
  CHECK(r.mc_error_estimate > 0.0);
  CHECK(r.max_trace_distance < 4.0 * r.mc_error_estimate + 0.01);
  CHECK(validate_unraveling(c, 400, 1e-6).pass == false);
  CHECK_THROWS_AS(validate_unraveling(c, 99, 0.1), InvalidArgument);
}
