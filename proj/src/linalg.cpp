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

#include "unravel/linalg.hpp"

#include <cmath>
#include <sstream>

namespace unravel {

PureState PureState::normalize(CVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvalidArgument("PureState: cannot normalize a zero or non-finite vector");
  }
  amplitudes /= n;
  return PureState(std::move(amplitudes));
}

PureState PureState::from_normalized(CVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(std::abs(n - 1.0) <= tol::kNormalization)) {
    std::ostringstream os;
    os << "PureState: norm " << n << " differs from 1";
    throw InvalidArgument(os.str());
  }
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim) {
    throw InvalidArgument("PureState::basis: index out of range");
  }
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

NotPositiveAtState::NotPositiveAtState(const PureState& witness, double min_eigenvalue,
                                       double time)
    : Error([&] {
        std::ostringstream os;
        os << "transition rate operator not positive at state (min eigenvalue "
           << min_eigenvalue << ", t = " << time << ")";
        return os.str();
      }()),
      witness_(witness),
      min_eigenvalue_(min_eigenvalue),
      time_(time) {}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

CMatrix sigma_minus() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw DimensionMismatch("unvec: vector length is not dim^2");
  }
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

bool is_finite(const CMatrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const Complex z = m.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double hermiticity_error(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianEigen hermitian_eigen(const CMatrix& m) {
  if (m.rows() == 1 && m.cols() == 1) {
    return {RVector::Constant(1, m(0, 0).real()), CMatrix::Ones(1, 1)};
  }
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalInstability("hermitian_eigen: decomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const CMatrix& hermitian) {
  if (hermitian.rows() == 1 && hermitian.cols() == 1) return hermitian(0, 0).real();
  const CMatrix h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

CMatrix orthogonal_complement(const CVector& psi) {
  const Eigen::Index n = psi.size();
  if (n == 2) {
    // (a, b) -> (-conj(b), conj(a))
    CMatrix q(2, 1);
    q(0, 0) = -std::conj(psi(1));
    q(1, 0) = std::conj(psi(0));
    return q / psi.norm();
  }
  const CMatrix column = psi;
  Eigen::HouseholderQR<CMatrix> qr(column);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  return q.rightCols(n - 1);
}

double trace_norm_half(const CMatrix& hermitian) {
  const CMatrix h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace unravel
