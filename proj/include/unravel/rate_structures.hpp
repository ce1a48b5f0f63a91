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

#include <utility>

#include "unravel/generators.hpp"

namespace unravel {

/// Representation-independent rate objects of a generator at a pure state psi.
///
///   L     = L(psi psi^dag)
///   W     = L - {L, psi psi^dag} + <L> psi psi^dag     (transition rate operator)
///   w     = Tr W = -<L>                                 (total transition rate)
///   drift = (L - <L>) psi = -i H_fr psi                 (frictional flow)
///
/// The frictional Hamiltonian is only defined through its action on psi, so
/// the drift vector is what gets stored.
struct RateStructure {
  CMatrix L;
  CMatrix W;
  double w = 0.0;
  CVector drift;
};

/// L(psi psi^dag).
CMatrix compute_L(const Liouvillian& generator, const PureState& psi);

RateStructure compute_rate_structure(const Liouvillian& generator, const PureState& psi);

/// drift psi^dag + psi drift^dag + W - w psi psi^dag; equals L(psi psi^dag).
CMatrix reconstruct_rhs(const RateStructure& rs, const PureState& psi);

/// (psi^dag L psi, psi_perp^dag L psi_perp) with L = L(psi psi^dag). Positive
/// dynamics needs the first <= 0 and the second >= 0 for every orthogonal pair.
std::pair<double, double> kossakowski_pair_check(const Liouvillian& generator,
                                                 const PureState& psi,
                                                 const PureState& psi_perp);

}  // namespace unravel
