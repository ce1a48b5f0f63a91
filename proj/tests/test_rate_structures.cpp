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
#include "unravel/models.hpp"
#include "unravel/rate_structures.hpp"

using namespace unravel;

namespace {

CMatrix proj(const CVector& v) { return v * v.adjoint(); }

CVector ket(int n, int i) {
  CVector v = CVector::Zero(n);
  v(i) = 1.0;
  return v;
}

PureState plus_state() {
  CVector v(2);
  v << 1.0, 1.0;
  return PureState::normalize(v);
}

PureState minus_state() {
  CVector v(2);
  v << 1.0, -1.0;
  return PureState::normalize(v);
}

}  // namespace

TEST_CASE("compute_L examples") {
  const PureState one = PureState::basis(2, 1);
  const CMatrix l = compute_L(models::amplitude_damping(1.0), one);
  CHECK(oracle::max_abs(l - (proj(ket(2, 0)) - proj(ket(2, 1)))) < 1e-14);

  const CMatrix ld = compute_L(models::dephasing(1.0), plus_state());
  CHECK(oracle::max_abs(ld - (minus_state().projector() - plus_state().projector())) < 1e-14);

  std::mt19937_64 rng(1);
  const CMatrix h = oracle::random_hermitian(3, rng);
  const HermitianEigen eig = hermitian_eigen(h);
  const PureState eigenstate = PureState::normalize(eig.vectors.col(1));
  CHECK(oracle::max_abs(compute_L(build_lindblad(h, {}), eigenstate)) < 1e-12);

  CHECK_THROWS_AS(compute_L(models::amplitude_damping(1.0), PureState::basis(3, 0)), DimensionMismatch);
}

TEST_CASE("compute_rate_structure: amplitude damping at |1>") {
  const RateStructure rs = compute_rate_structure(models::amplitude_damping(1.0), PureState::basis(2, 1));
  CHECK(oracle::max_abs(rs.W - proj(ket(2, 0))) < 1e-14);
  CHECK(rs.w == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rs.drift.norm() < 1e-14);
}

TEST_CASE("compute_rate_structure: unitary only") {
  std::mt19937_64 rng(2);
  for (int n : {2, 4}) {
    const CMatrix h = oracle::random_hermitian(n, rng);
    const PureState psi = PureState::normalize(oracle::haar_vector(n, rng));
    const RateStructure rs = compute_rate_structure(build_lindblad(h, {}), psi);
    CHECK(oracle::max_abs(rs.W) < 1e-12);
    CHECK(std::abs(rs.w) < 1e-12);
    const CVector& v = psi.vector();
    const Complex mean_h = v.dot(h * v);
    const CVector expected = -kI * (h * v - mean_h * v);
    CHECK((rs.drift - expected).norm() < 1e-12);
  }
}

TEST_CASE("compute_rate_structure: Pauli (1, 1, -0.4) at |0>") {
  for (double g0 : {1.0, 0.3}) {
    const RateStructure rs =
        compute_rate_structure(models::pauli(g0, g0, -0.4 * g0), PureState::basis(2, 0));
    CHECK(oracle::max_abs(rs.W - 2.0 * g0 * proj(ket(2, 1))) < 1e-14);
    CHECK(rs.w == doctest::Approx(2.0 * g0).epsilon(1e-14));
  }
}

TEST_CASE("dephasing: W at |+> and the dark state |0>") {
  const double gamma = 0.8;
  const Liouvillian lv = models::dephasing(gamma);
  const RateStructure plus = compute_rate_structure(lv, plus_state());
  CHECK(oracle::max_abs(plus.W - gamma * minus_state().projector()) < 1e-14);
  const RateStructure dark = compute_rate_structure(lv, PureState::basis(2, 0));
  CHECK(oracle::max_abs(dark.W) < 1e-15);
  CHECK(dark.w == 0.0);
  CHECK(dark.drift.norm() < 1e-15);
}

TEST_CASE("reconstruct_rhs examples") {
  const Liouvillian damp = models::amplitude_damping(1.0);
  const PureState one = PureState::basis(2, 1);
  const CMatrix rhs = reconstruct_rhs(compute_rate_structure(damp, one), one);
  CHECK(oracle::max_abs(rhs - (proj(ket(2, 0)) - proj(ket(2, 1)))) < 1e-14);

  std::mt19937_64 rng(3);
  const CMatrix h = oracle::random_hermitian(3, rng);
  const PureState psi = PureState::normalize(oracle::haar_vector(3, rng));
  const CMatrix p = psi.projector();
  const CMatrix u = reconstruct_rhs(compute_rate_structure(build_lindblad(h, {}), psi), psi);
  CHECK(oracle::max_abs(u - (-kI) * (h * p - p * h)) < 1e-12);
}

TEST_CASE("reconstruction identity and W identities on random generators and states") {
  std::mt19937_64 rng(4);
  int cases = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const Liouvillian lv = (seed % 2 == 0) ? models::random_lindblad(n, 2, seed)
                                           : models::random_gks(n, seed, 0.8);
    for (int rep = 0; rep < 2; ++rep, ++cases) {
      const PureState psi = PureState::normalize(oracle::haar_vector(n, rng));
      const RateStructure rs = compute_rate_structure(lv, psi);
      const CVector& v = psi.vector();
      // Oracle for L: the direct formula on the stored provenance would
      // duplicate the generator; apply() is already checked against it.
      const CMatrix l = lv.apply(psi.projector());
      CHECK((reconstruct_rhs(rs, psi) - l).norm() <= 1e-10);
      CHECK((rs.W * v).norm() <= 1e-12);
      CHECK((v.adjoint() * rs.W).norm() <= 1e-12);
      CHECK(hermiticity_error(rs.W) <= 1e-12);
      CHECK(std::abs(rs.w + v.dot(l * v).real()) <= 1e-12);
      CHECK(std::abs(rs.w - rs.W.trace().real()) <= 1e-12);
      CHECK(std::abs(v.dot(rs.drift).real()) <= 1e-12);
      CHECK(std::abs(rs.L.trace()) <= 1e-12);
    }
  }
  CHECK(cases >= 100);
}

TEST_CASE("W of a Lindblad generator equals the operator covariance sum") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;
    const CMatrix h = oracle::random_hermitian(n, rng);
    std::vector<CMatrix> ops{oracle::random_matrix(n, n, rng), oracle::random_matrix(n, n, rng)};
    const Liouvillian lv = build_lindblad(h, ops);
    const PureState psi = PureState::normalize(oracle::haar_vector(n, rng));
    const CVector& v = psi.vector();
    CMatrix expected = CMatrix::Zero(n, n);
    for (const auto& f : ops) {
      const CVector g = f * v - v.dot(f * v) * v;
      expected += g * g.adjoint();
    }
    CHECK((compute_rate_structure(lv, psi).W - expected).norm() <= 1e-10);
  }
}

TEST_CASE("kossakowski_pair_check examples") {
  const auto [a, b] = kossakowski_pair_check(models::amplitude_damping(1.0), PureState::basis(2, 1),
                                             PureState::basis(2, 0));
  CHECK(a == doctest::Approx(-1.0));
  CHECK(b == doctest::Approx(1.0));

  std::mt19937_64 rng(6);
  const Liouvillian unitary = build_lindblad(oracle::random_hermitian(2, rng), {});
  const auto [c, d] = kossakowski_pair_check(unitary, PureState::from_normalized(oracle::bloch_state(0.7, 1.1)),
                                             PureState::from_normalized(oracle::bloch_antipode(0.7, 1.1)));
  CHECK(std::abs(c) < 1e-12);
  CHECK(std::abs(d) < 1e-12);

  CHECK_THROWS_AS(kossakowski_pair_check(unitary, PureState::basis(2, 0), plus_state()), InvalidArgument);
  CHECK_THROWS_AS(kossakowski_pair_check(unitary, PureState::basis(2, 0), PureState::basis(3, 1)),
                  DimensionMismatch);
}

TEST_CASE("kossakowski_pair_check finds a violating pair for Pauli (1, 1, -1.2)") {
  const Liouvillian lv = models::pauli(1.0, 1.0, -1.2);
  double least = std::numeric_limits<double>::infinity();
  for (int a = 0; a <= 36; ++a) {
    for (int b = 0; b < 36; ++b) {
      const double theta = M_PI * a / 36, phi = 2.0 * M_PI * b / 36;
      const auto [first, second] =
          kossakowski_pair_check(lv, PureState::from_normalized(oracle::bloch_state(theta, phi)),
                                 PureState::from_normalized(oracle::bloch_antipode(theta, phi)));
      // qubit: <psi|L|psi> = -w = -(the only pair rate)
      CHECK(first == doctest::Approx(-second).scale(1.0));
      least = std::min(least, second);
      // second component is the pair rate; compare with the independent formula
      CHECK(second == doctest::Approx(oracle::pauli_pair_rate(1.0, 1.0, -1.2, oracle::bloch_state(theta, phi),
                                                              oracle::bloch_antipode(theta, phi)))
                          .epsilon(1e-9)
                          .scale(1.0));
    }
  }
  CHECK(least < -0.1);
}

TEST_CASE("restricted W spectrum and pair checks agree on sampled qubit states") {
  std::mt19937_64 rng(7);
  int agree = 0, total = 0;
  for (const Liouvillian& lv : {models::pauli(1.0, 1.0, -0.4), models::pauli(1.0, 1.0, -1.2),
                                models::random_gks(2, 3, 1.0), models::random_gks(2, 4, 0.2)}) {
    for (int s = 0; s < 300; ++s, ++total) {
      const CVector v = oracle::haar_vector(2, rng);
      const PureState psi = PureState::from_normalized(v);
      CVector perp(2);
      perp << -std::conj(v(1)), std::conj(v(0));
      const auto pair = kossakowski_pair_check(lv, psi, PureState::from_normalized(perp));
      const bool by_pairs = pair.first <= tol::kNegativity && pair.second >= -tol::kNegativity;
      const bool by_w = restricted_min_eigenvalue(lv, psi) >= -tol::kNegativity;
      agree += (by_pairs == by_w);
    }
  }
  CHECK(total >= 1000);
  CHECK(agree == total);
}
