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

#include "unravel/models.hpp"

#include <cmath>
#include <random>

#include "unravel/noise.hpp"

namespace unravel::models {
namespace {

void require_rate(double gamma, const char* what) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument(std::string(what) + ": rate must be positive");
  }
}

void require_dimension(int dim, const char* what) {
  if (dim < 2 || dim > kMaxDimension) {
    throw InvalidArgument(std::string(what) + ": dimension must be in [2, 16]");
  }
}

CMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal;
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

}  // namespace

Liouvillian amplitude_damping(double gamma) {
  require_rate(gamma, "amplitude_damping");
  return build_lindblad(CMatrix::Zero(2, 2), {std::sqrt(gamma) * sigma_minus()});
}

Liouvillian dephasing(double gamma) {
  require_rate(gamma, "dephasing");
  return build_lindblad(CMatrix::Zero(2, 2), {std::sqrt(gamma) * pauli_z()});
}

Liouvillian pauli(double g1, double g2, double g3) {
  CMatrix k = CMatrix::Zero(3, 3);
  k(0, 0) = g1;
  k(1, 1) = g2;
  k(2, 2) = g3;
  return build_kossakowski(CMatrix::Zero(2, 2), {pauli_x(), pauli_y(), pauli_z()}, k);
}

Liouvillian random_lindblad(int dim, int n_ops, std::uint64_t seed) {
  require_dimension(dim, "random_lindblad");
  if (n_ops < 0) throw InvalidArgument("random_lindblad: n_ops must be >= 0");
  Rng rng(seed);
  const CMatrix a = gaussian_matrix(dim, dim, rng);
  const CMatrix h = 0.5 * (a + a.adjoint());
  std::vector<CMatrix> ops;
  const double scale = 1.0 / std::sqrt(2.0 * dim);
  for (int k = 0; k < n_ops; ++k) ops.push_back(scale * gaussian_matrix(dim, dim, rng));
  return build_lindblad(h, ops);
}

std::vector<CMatrix> traceless_hermitian_basis(int dim) {
  std::vector<CMatrix> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      CMatrix sym = CMatrix::Zero(dim, dim);
      sym(j, k) = r;
      sym(k, j) = r;
      basis.push_back(sym);
      CMatrix anti = CMatrix::Zero(dim, dim);
      anti(j, k) = -kI * r;
      anti(k, j) = kI * r;
      basis.push_back(anti);
    }
  }
  for (int l = 1; l < dim; ++l) {
    CMatrix diag = CMatrix::Zero(dim, dim);
    const double c = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int i = 0; i < l; ++i) diag(i, i) = c;
    diag(l, l) = -c * l;
    basis.push_back(diag);
  }
  return basis;
}

Liouvillian random_gks(int dim, std::uint64_t seed, double neg_weight) {
  require_dimension(dim, "random_gks");
  if (!(neg_weight >= 0.0)) throw InvalidArgument("random_gks: neg_weight must be >= 0");
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.5, 1.5);
  std::normal_distribution<double> normal;

  const std::vector<CMatrix> gell_mann = traceless_hermitian_basis(dim);
  const int k = static_cast<int>(gell_mann.size());
  RMatrix g(k, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) g(i, j) = normal(rng);
  }
  const RMatrix rotation = Eigen::HouseholderQR<RMatrix>(g).householderQ();
  std::vector<CMatrix> basis(static_cast<std::size_t>(k), CMatrix::Zero(dim, dim));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) basis[i] += rotation(i, j) * gell_mann[j];
  }

  const CMatrix u = Eigen::HouseholderQR<CMatrix>(gaussian_matrix(k, k, rng)).householderQ();
  RVector lambda(k);
  for (int i = 0; i < k; ++i) lambda(i) = uniform(rng);
  lambda(k - 1) = -neg_weight;
  CMatrix coefficients = u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
  coefficients = 0.5 * (coefficients + coefficients.adjoint()).eval();

  const CMatrix a = gaussian_matrix(dim, dim, rng);
  const CMatrix h = 0.25 * (a + a.adjoint());
  return build_kossakowski(h, basis, coefficients);
}

std::vector<ModelDescriptor> catalog() {
  return {
      {"amplitude_damping", {{"gamma", 1.0}}, "CP", "F = sqrt(gamma) sigma_-"},
      {"dephasing", {{"gamma", 1.0}}, "CP", "F = sqrt(gamma) sigma_z"},
      {"pauli",
       {{"g1", 1.0}, {"g2", 1.0}, {"g3", -0.4}},
       "positive (not CP)",
       "sum g_i (sigma_i rho sigma_i - rho); CP iff g_i >= 0, positive iff g_i + g_j >= 0"},
      {"random_gks",
       {{"dim", 2.0}, {"seed", 1.0}, {"neg_weight", 0.0}},
       "runtime",
       "random traceless basis, K with one eigenvalue -neg_weight"},
      {"random_lindblad",
       {{"dim", 3.0}, {"n_ops", 2.0}, {"seed", 1.0}},
       "CP",
       "Gaussian-random Hamiltonian and operators"},
  };
}

Liouvillian build(const std::string& name, const std::map<std::string, double>& parameters) {
  for (const auto& model : catalog()) {
    if (model.name != name) continue;
    std::map<std::string, double> p = model.parameters;
    for (const auto& [key, value] : parameters) {
      if (!p.contains(key)) {
        throw InvalidArgument("model '" + name + "' has no parameter '" + key + "'");
      }
      p[key] = value;
    }
    const auto as_int = [&](const char* key) { return static_cast<int>(std::lround(p.at(key))); };
    const auto as_seed = [&](const char* key) {
      return static_cast<std::uint64_t>(std::llround(p.at(key)));
    };
    if (name == "amplitude_damping") return amplitude_damping(p.at("gamma"));
    if (name == "dephasing") return dephasing(p.at("gamma"));
    if (name == "pauli") return pauli(p.at("g1"), p.at("g2"), p.at("g3"));
    if (name == "random_gks") return random_gks(as_int("dim"), as_seed("seed"), p.at("neg_weight"));
    if (name == "random_lindblad") {
      return random_lindblad(as_int("dim"), as_int("n_ops"), as_seed("seed"));
    }
  }
  throw InvalidArgument("unknown model '" + name + "'");
}

}  // namespace unravel::models
