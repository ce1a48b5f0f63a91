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

#include "unravel/generators.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "unravel/rate_structures.hpp"

namespace unravel {
namespace {

int checked_dimension(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows != cols || rows < 1) {
    throw DimensionMismatch(std::string(what) + ": matrix must be square and non-empty");
  }
  if (rows > kMaxDimension) {
    std::ostringstream os;
    os << what << ": dimension " << rows << " exceeds the supported maximum " << kMaxDimension;
    throw InvalidArgument(os.str());
  }
  return static_cast<int>(rows);
}

void require_hermitian(const CMatrix& m, double tolerance, const char* what) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!is_finite(m)) throw InvalidArgument(std::string(what) + " has non-finite entries");
  if (hermiticity_error(m) > tolerance * scale) {
    throw InvalidArgument(std::string(what) + " is not Hermitian");
  }
}

void require_square(const CMatrix& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream os;
    os << what << ": expected " << dim << "x" << dim << ", got " << m.rows() << "x" << m.cols();
    throw DimensionMismatch(os.str());
  }
  if (!is_finite(m)) throw InvalidArgument(std::string(what) + " has non-finite entries");
}

// Superoperator of rho -> -i[H, rho].
CMatrix commutator_superop(const CMatrix& h) {
  const Eigen::Index n = h.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  return -kI * (kron(id, h) - kron(h.transpose(), id));
}

// Superoperator of rho -> -1/2 {A, rho}.
CMatrix anticommutator_superop(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  return -0.5 * (kron(id, a) + kron(a.transpose(), id));
}

}  // namespace

std::string_view to_string(GeneratorTag tag) {
  switch (tag) {
    case GeneratorTag::cp: return "CP";
    case GeneratorTag::positive_not_cp: return "positive (not CP)";
    case GeneratorTag::not_positive: return "NOT positive";
    case GeneratorTag::undetermined: return "undetermined";
  }
  return "?";
}

Liouvillian::Liouvillian(CMatrix matrix, Provenance provenance)
    : matrix_(std::move(matrix)), provenance_(std::move(provenance)) {
  const auto n2 = matrix_.rows();
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n2))));
  if (matrix_.cols() != n2 || static_cast<Eigen::Index>(n) * n != n2 || n < 1) {
    throw DimensionMismatch("Liouvillian: matrix must be N^2 x N^2");
  }
  if (n > kMaxDimension) throw InvalidArgument("Liouvillian: dimension exceeds supported maximum");
  if (!is_finite(matrix_)) throw InvalidArgument("Liouvillian: non-finite entries");
  dim_ = n;
}

Liouvillian Liouvillian::from_matrix(CMatrix matrix) {
  Liouvillian lv(std::move(matrix), RawData{});
  const double scale = std::max(1.0, lv.matrix_.cwiseAbs().maxCoeff());
  if (lv.trace_preservation_error() > tol::kStructural * scale) {
    throw InvalidArgument("Liouvillian: matrix is not trace-preserving");
  }
  if (lv.hermiticity_preservation_error() > tol::kStructural * scale) {
    throw InvalidArgument("Liouvillian: matrix is not Hermiticity-preserving");
  }
  return lv;
}

CMatrix Liouvillian::apply(const CMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw DimensionMismatch("Liouvillian::apply: operand dimension mismatch");
  }
  CMatrix out(dim_, dim_);
  const auto n2 = static_cast<Eigen::Index>(dim_) * dim_;
  Eigen::Map<CVector>(out.data(), n2).noalias() = matrix_ * Eigen::Map<const CVector>(x.data(), n2);
  return out;
}

double Liouvillian::trace_preservation_error() const {
  double err = 0.0;
  for (Eigen::Index col = 0; col < matrix_.cols(); ++col) {
    Complex tr = 0.0;
    for (int a = 0; a < dim_; ++a) tr += matrix_(a + a * dim_, col);
    err = std::max(err, std::abs(tr));
  }
  return err;
}

double Liouvillian::hermiticity_preservation_error() const {
  double err = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      // Column i + j N is the image of E_ij.
      const CMatrix img_ij = unvec(matrix_.col(i + j * dim_), dim_);
      const CMatrix img_ji = unvec(matrix_.col(j + i * dim_), dim_);
      err = std::max(err, (img_ji - img_ij.adjoint()).cwiseAbs().maxCoeff());
    }
  }
  return err;
}

Liouvillian build_lindblad(const CMatrix& hamiltonian, const std::vector<CMatrix>& operators) {
  const int n = checked_dimension(hamiltonian.rows(), hamiltonian.cols(), "build_lindblad");
  require_hermitian(hamiltonian, 1e-12, "build_lindblad: Hamiltonian");
  CMatrix m = commutator_superop(hamiltonian);
  for (const auto& f : operators) {
    require_square(f, n, "build_lindblad: operator");
    m += kron(f.conjugate(), f);
    m += anticommutator_superop(f.adjoint() * f);
  }
  return Liouvillian(std::move(m), LindbladData{hamiltonian, operators});
}

Liouvillian build_kossakowski(const CMatrix& hamiltonian, const std::vector<CMatrix>& basis,
                              const CMatrix& coefficients) {
  const int n = checked_dimension(hamiltonian.rows(), hamiltonian.cols(), "build_kossakowski");
  require_hermitian(hamiltonian, 1e-12, "build_kossakowski: Hamiltonian");
  const auto k = static_cast<Eigen::Index>(basis.size());
  if (coefficients.rows() != k || coefficients.cols() != k) {
    throw DimensionMismatch("build_kossakowski: coefficient matrix size differs from basis length");
  }
  require_hermitian(coefficients, 1e-12, "build_kossakowski: coefficient matrix");
  for (const auto& g : basis) require_square(g, n, "build_kossakowski: basis operator");

  CMatrix m = commutator_superop(hamiltonian);
  CMatrix anti = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const Complex kij = coefficients(i, j);
      if (kij == Complex{}) continue;
      m += kij * kron(basis[j].conjugate(), basis[i]);
      anti += kij * (basis[j].adjoint() * basis[i]);
    }
  }
  m += anticommutator_superop(anti);
  return Liouvillian(std::move(m), KossakowskiData{hamiltonian, basis, coefficients});
}

CMatrix choi_matrix(const Liouvillian& generator) {
  const int n = generator.dim();
  CMatrix choi = CMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const CMatrix img = unvec(generator.matrix().col(i + j * n), n);
      choi.block(i * n, j * n, n, n) = img;
    }
  }
  return choi;
}

bool is_cp_generator(const Liouvillian& generator, double tolerance) {
  const int n = generator.dim();
  const CMatrix choi = choi_matrix(generator);
  CVector omega = CVector::Zero(n * n);
  for (int i = 0; i < n; ++i) omega(i * n + i) = 1.0 / std::sqrt(static_cast<double>(n));
  const CMatrix q = CMatrix::Identity(n * n, n * n) - omega * omega.adjoint();
  const CMatrix compressed = q * choi * q;
  return min_eigenvalue(compressed) >= -tolerance;
}

double restricted_min_eigenvalue(const Liouvillian& generator, const PureState& psi) {
  if (generator.dim() < 2) return 0.0;
  const RateStructure rs = compute_rate_structure(generator, psi);
  const CMatrix q = orthogonal_complement(psi.vector());
  return min_eigenvalue(q.adjoint() * rs.W * q);
}

namespace {

PureState haar_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(normal(rng), normal(rng));
  return PureState::normalize(std::move(v));
}

// Stochastic local descent of the least restricted W eigenvalue: Gaussian
// perturbations of shrinking radius, accepting only improvements.
std::pair<PureState, double> descend(const Liouvillian& generator, PureState start,
                                     double start_value, std::mt19937_64& rng, int& evaluations) {
  std::normal_distribution<double> normal;
  const int n = generator.dim();
  PureState best = std::move(start);
  double best_value = start_value;
  double radius = 0.3;
  int failures = 0;
  while (radius > 1e-7 && evaluations < 20000) {
    CVector v = best.vector();
    for (int i = 0; i < n; ++i) v(i) += radius * Complex(normal(rng), normal(rng));
    PureState trial = PureState::normalize(std::move(v));
    const double value = restricted_min_eigenvalue(generator, trial);
    ++evaluations;
    if (value < best_value) {
      best = std::move(trial);
      best_value = value;
      failures = 0;
      radius *= 1.2;
    } else if (++failures >= 4 * n) {
      radius *= 0.5;
      failures = 0;
    }
  }
  return {std::move(best), best_value};
}

}  // namespace

GeneratorClass check_positivity(const Liouvillian& generator, int n_samples, bool refine,
                                std::uint64_t seed) {
  if (n_samples < 1) throw InvalidArgument("check_positivity: n_samples must be >= 1");
  std::mt19937_64 rng(seed);
  const int n = generator.dim();

  GeneratorClass out;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    PureState psi = haar_state(n, rng);
    const double value = restricted_min_eigenvalue(generator, psi);
    ++out.states_examined;
    if (value < out.min_eigenvalue) {
      out.min_eigenvalue = value;
      out.witness = std::move(psi);
    }
  }
  if (refine && out.witness) {
    int evaluations = 0;
    auto [state, value] = descend(generator, *out.witness, out.min_eigenvalue, rng, evaluations);
    out.states_examined += evaluations;
    out.witness = std::move(state);
    out.min_eigenvalue = value;
  }

  out.choi_cp = is_cp_generator(generator);
  if (out.min_eigenvalue < -tol::kNegativity) {
    out.tag = GeneratorTag::not_positive;
  } else if (out.choi_cp) {
    out.tag = GeneratorTag::cp;
  } else if (out.min_eigenvalue > tol::kNegativity) {
    out.tag = GeneratorTag::positive_not_cp;
  } else {
    out.tag = GeneratorTag::undetermined;
  }
  return out;
}

}  // namespace unravel
