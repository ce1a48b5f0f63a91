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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace unravel {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Largest Hilbert-space dimension supported (dense N^2 x N^2 superoperators).
inline constexpr int kMaxDimension = 16;

namespace tol {
/// Structural identities (trace/Hermiticity preservation, reconstructions).
inline constexpr double kStructural = 1e-10;
/// Eigenvalues above -kNegativity count as zero.
inline constexpr double kNegativity = 1e-8;
/// Unit-norm requirement on pure states.
inline constexpr double kNormalization = 1e-12;
/// Floor applied to noise covariance eigenvalues.
inline constexpr double kCovariance = 1e-10;
}  // namespace tol

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NumericalInstability : public Error {
 public:
  using Error::Error;
};

/// Normalized complex amplitude vector.
class PureState {
 public:
  /// Rescales `amplitudes` to unit norm; throws on the zero vector.
  static PureState normalize(CVector amplitudes);
  /// Requires ||amplitudes|| = 1 within tol::kNormalization.
  static PureState from_normalized(CVector amplitudes);
  /// Computational basis state |index>.
  static PureState basis(int dim, int index);

  int dim() const { return static_cast<int>(amp_.size()); }
  const CVector& vector() const { return amp_; }
  Complex operator[](int i) const { return amp_(i); }
  CMatrix projector() const { return amp_ * amp_.adjoint(); }

 private:
  explicit PureState(CVector amp) : amp_(std::move(amp)) {}
  CVector amp_;
};

/// Raised when the transition rate operator has an eigenvalue below
/// -tol::kNegativity at the current state, i.e. the dynamics is not positive
/// there. Carries the offending state as witness.
class NotPositiveAtState : public Error {
 public:
  NotPositiveAtState(const PureState& witness, double min_eigenvalue, double time = 0.0);

  const PureState& witness() const { return witness_; }
  double min_eigenvalue() const { return min_eigenvalue_; }
  double time() const { return time_; }

 private:
  PureState witness_;
  double min_eigenvalue_;
  double time_;
};

// Pauli matrices and ladder operators in the {|0>, |1>} basis.
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
/// sigma_- = |0><1|.
CMatrix sigma_minus();

/// Column-major vectorization of a square matrix.
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, int dim);

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

bool is_finite(const CMatrix& m);
double hermiticity_error(const CMatrix& m);

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};
HermitianEigen hermitian_eigen(const CMatrix& m);
double min_eigenvalue(const CMatrix& hermitian);

/// Orthonormal basis (N x (N-1) columns) of the complement of psi.
CMatrix orthogonal_complement(const CVector& psi);

/// 1/2 sum |eig(a - b)| for Hermitian a, b.
double trace_norm_half(const CMatrix& hermitian);

}  // namespace unravel
