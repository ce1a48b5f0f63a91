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

#include "unravel/rate_structures.hpp"

#include <cmath>

namespace unravel {

CMatrix compute_L(const Liouvillian& generator, const PureState& psi) {
  if (psi.dim() != generator.dim()) {
    throw DimensionMismatch("compute_L: state dimension differs from generator dimension");
  }
  return generator.apply(psi.projector());
}

RateStructure compute_rate_structure(const Liouvillian& generator, const PureState& psi) {
  RateStructure rs;
  rs.L = compute_L(generator, psi);
  const CVector& v = psi.vector();
  const CVector l_psi = rs.L * v;
  const double mean_l = v.dot(l_psi).real();  // <L>, real since L is Hermitian

  // W = L - L P - P L + <L> P with P = psi psi^dag, expanded without forming P.
  rs.W = rs.L;
  rs.W.noalias() -= l_psi * v.adjoint();
  rs.W.noalias() -= v * l_psi.adjoint();
  rs.W.noalias() += mean_l * (v * v.adjoint());
  rs.w = rs.W.trace().real();
  // (L - <L>) psi = (L + w) psi
  rs.drift = l_psi - mean_l * v;
  return rs;
}

CMatrix reconstruct_rhs(const RateStructure& rs, const PureState& psi) {
  const CVector& v = psi.vector();
  if (rs.W.rows() != v.size()) {
    throw DimensionMismatch("reconstruct_rhs: rate structure and state dimensions differ");
  }
  return rs.drift * v.adjoint() + v * rs.drift.adjoint() + rs.W - rs.w * (v * v.adjoint());
}

std::pair<double, double> kossakowski_pair_check(const Liouvillian& generator,
                                                 const PureState& psi,
                                                 const PureState& psi_perp) {
  if (psi_perp.dim() != psi.dim()) {
    throw DimensionMismatch("kossakowski_pair_check: state dimensions differ");
  }
  if (std::abs(psi.vector().dot(psi_perp.vector())) > tol::kStructural) {
    throw InvalidArgument("kossakowski_pair_check: states are not orthogonal");
  }
  const CMatrix L = compute_L(generator, psi);
  const double first = psi.vector().dot(L * psi.vector()).real();
  const double second = psi_perp.vector().dot(L * psi_perp.vector()).real();
  return {first, second};
}

}  // namespace unravel
