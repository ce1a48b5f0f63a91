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
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "unravel/linalg.hpp"

namespace unravel {

// Superoperators act on column-major vectorized operators:
//   vec(A X B) = (B^T (x) A) vec(X).
// Every matrix representation in this library follows that convention.

struct LindbladData {
  CMatrix hamiltonian;
  std::vector<CMatrix> operators;
};

struct KossakowskiData {
  CMatrix hamiltonian;
  std::vector<CMatrix> basis;
  CMatrix coefficients;
};

struct RawData {};

using Provenance = std::variant<LindbladData, KossakowskiData, RawData>;

/// Trace- and Hermiticity-preserving generator of rho' = L(rho), stored as a
/// dense N^2 x N^2 matrix. Immutable after construction.
class Liouvillian {
 public:
  /// Wraps a raw superoperator matrix; validates both structural invariants.
  static Liouvillian from_matrix(CMatrix matrix);

  Liouvillian(CMatrix matrix, Provenance provenance);

  int dim() const { return dim_; }
  const CMatrix& matrix() const { return matrix_; }
  const Provenance& provenance() const { return provenance_; }
  /// Lindblad data when the generator was built from it, else nullptr.
  const LindbladData* lindblad() const { return std::get_if<LindbladData>(&provenance_); }

  CMatrix apply(const CMatrix& x) const;

  /// max |Tr L(E_ij)| over matrix units.
  double trace_preservation_error() const;
  /// max |L(E_ji) - L(E_ij)^dagger| over matrix units.
  double hermiticity_preservation_error() const;

 private:
  int dim_;
  CMatrix matrix_;
  Provenance provenance_;
};

/// L(rho) = -i[H, rho] + sum_a (F_a rho F_a^dag - 1/2 {F_a^dag F_a, rho}).
Liouvillian build_lindblad(const CMatrix& hamiltonian, const std::vector<CMatrix>& operators);

/// L(rho) = -i[H, rho] + sum_ij K_ij (G_i rho G_j^dag - 1/2 {G_j^dag G_i, rho}).
/// K is Hermitian but may be indefinite, which is how non-CP generators enter.
Liouvillian build_kossakowski(const CMatrix& hamiltonian, const std::vector<CMatrix>& basis,
                              const CMatrix& coefficients);

inline CMatrix apply(const Liouvillian& generator, const CMatrix& x) { return generator.apply(x); }

/// Choi matrix C = sum_ij |i><j| (x) L(|i><j|), index (i, a) -> i * N + a.
CMatrix choi_matrix(const Liouvillian& generator);

/// Conditional complete positivity: the Choi matrix compressed to the
/// complement of the maximally entangled vector is PSD within `tolerance`.
bool is_cp_generator(const Liouvillian& generator, double tolerance = tol::kStructural);

enum class GeneratorTag { cp, positive_not_cp, not_positive, undetermined };

std::string_view to_string(GeneratorTag tag);

struct GeneratorClass {
  GeneratorTag tag = GeneratorTag::undetermined;
  /// State attaining the least W eigenvalue found.
  std::optional<PureState> witness;
  /// Least eigenvalue of W(psi) on the complement of psi over all states tried.
  double min_eigenvalue = 0.0;
  bool choi_cp = false;
  int states_examined = 0;
};

/// Least eigenvalue of the transition rate operator W(psi) restricted to the
/// orthogonal complement of psi.
double restricted_min_eigenvalue(const Liouvillian& generator, const PureState& psi);

/// Haar sampling (plus optional local descent) of min-eig W(psi). A negative
/// eigenvalue below -tol::kNegativity proves non-positivity; its absence is
/// only evidence. Non-violating generators are tagged by the Choi test; a
/// non-CP generator whose best sample sits within tol::kNegativity of zero is
/// reported as undetermined.
GeneratorClass check_positivity(const Liouvillian& generator, int n_samples, bool refine,
                                std::uint64_t seed = 0x5eed'0f'c1a55ULL);

}  // namespace unravel
