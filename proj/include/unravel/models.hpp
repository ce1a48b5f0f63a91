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
#include <map>
#include <string>
#include <vector>

#include "unravel/generators.hpp"

namespace unravel::models {

/// F = sqrt(gamma) sigma_-, H = 0.
Liouvillian amplitude_damping(double gamma);

/// F = sqrt(gamma) sigma_z, H = 0.
Liouvillian dephasing(double gamma);

/// sum_i g_i (sigma_i rho sigma_i - rho) in Kossakowski form; any signs.
/// CP iff all g_i >= 0, positive iff g_i + g_j >= 0 for every pair.
Liouvillian pauli(double g1, double g2, double g3);

/// Gaussian-random H and `n_ops` operators; always CP.
Liouvillian random_lindblad(int dim, int n_ops, std::uint64_t seed);

/// Kossakowski form over a randomly rotated orthonormal traceless Hermitian
/// basis with K = U diag(lambda) U^dag: lambda_i in [0.5, 1.5] except the
/// last, which is -neg_weight.
Liouvillian random_gks(int dim, std::uint64_t seed, double neg_weight);

/// Orthonormal (Tr A^dag B = delta) traceless Hermitian basis of N x N
/// matrices (generalized Gell-Mann / sqrt 2).
std::vector<CMatrix> traceless_hermitian_basis(int dim);

struct ModelDescriptor {
  std::string name;
  std::map<std::string, double> parameters;
  std::string expected_class;
  std::string notes;
};

/// Catalog in stable (alphabetical) order with default parameters.
std::vector<ModelDescriptor> catalog();

/// Builds a catalog model; parameters not given fall back to the defaults.
/// Throws InvalidArgument on unknown names or parameters.
Liouvillian build(const std::string& name, const std::map<std::string, double>& parameters);

}  // namespace unravel::models
