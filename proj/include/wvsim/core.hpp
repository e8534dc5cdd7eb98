// Copyright 2026 The wvsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WVSIM_CORE_HPP
#define WVSIM_CORE_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "wvsim/errors.hpp"

// Dense complex linear algebra over small Hilbert spaces. Everything here is
// immutable after construction and every operation is a pure function, so all
// of it is safe to call concurrently. Units: hbar = 1 throughout the library.

namespace wvsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Tolerance policy: constructor checks at 1e-10, equality assertions at 1e-9.
// Iterative/adiabatic results carry their own per-operation tolerances.
inline constexpr double kConstructTol = 1e-10;
inline constexpr double kAssertTol = 1e-9;
inline constexpr double kDefaultOverlapFloor = 1e-8;
inline constexpr int kDefaultMaxExpDim = 256;

double max_abs(const Matrix& m);

// Finite-dimensional pure state in the computational basis |0>,...,|d-1>.
// The stored amplitude vector is unit-norm.
class QState {
 public:
  explicit QState(Vector amps);

  static QState basis(int dim, int index);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amps() const { return amps_; }
  Complex amp(int k) const { return amps_(k); }

 private:
  Vector amps_;
};

enum class OperatorKind { General, Hermitian, Unitary, Projector };

// Square complex matrix with a role tag. The tag is validated on
// construction: hermitian within 1e-10, unitary within 1e-10, projector
// additionally satisfies M^2 = M within 1e-10.
class QOperator {
 public:
  QOperator(Matrix m, OperatorKind kind);

  static QOperator identity(int dim);
  static QOperator hermitian(Matrix m) { return QOperator(std::move(m), OperatorKind::Hermitian); }
  static QOperator unitary(Matrix m) { return QOperator(std::move(m), OperatorKind::Unitary); }
  static QOperator projector(Matrix m) { return QOperator(std::move(m), OperatorKind::Projector); }
  static QOperator general(Matrix m) { return QOperator(std::move(m), OperatorKind::General); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  OperatorKind kind() const { return kind_; }
  QOperator dagger() const;

 private:
  Matrix m_;
  OperatorKind kind_;
};

// Hermitian, positive semidefinite, unit trace.
class DensityOp {
 public:
  explicit DensityOp(Matrix m);

  static DensityOp pure(const QState& psi);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

// Kronecker products; tensor index order is left factor major.
QState tensor(const QState& a, const QState& b);
QOperator tensor(const QOperator& a, const QOperator& b);
Matrix kron(const Matrix& a, const Matrix& b);

// exp(scale * M). Hermitian generators go through the eigendecomposition
// (exact on the dominant use case exp(-i t H)); anything else falls back to
// scaling-and-squaring with a Pade approximant.
QOperator matrix_exponential(const QOperator& m, Complex scale,
                             int max_dim = kDefaultMaxExpDim);

enum class Subsystem { First, Second };

DensityOp partial_trace(const DensityOp& rho, int dim_first, int dim_second,
                        Subsystem keep);
Matrix partial_trace_matrix(const Matrix& m, int dim_first, int dim_second,
                            Subsystem keep);

struct Eigensystem {
  Eigen::VectorXd eigenvalues;  // ascending
  Matrix eigenvectors;          // column k pairs with eigenvalues(k)
};

Eigensystem eigendecompose_hermitian(const QOperator& m);

// Eigenvalues clustered into degenerate groups (gap tolerance) together with
// the projectors onto the corresponding eigenspaces.
struct SpectralProjectors {
  std::vector<double> eigenvalues;
  std::vector<Matrix> projectors;
};

SpectralProjectors eigenprojectors(const QOperator& a, double gap_tol = 1e-8);

inline Complex inner(const QState& a, const QState& b) {
  return a.amps().dot(b.amps());  // Eigen dot conjugates the left argument
}

void require_same_dim(int a, int b, const char* what);

}  // namespace wvsim

#endif  // WVSIM_CORE_HPP
