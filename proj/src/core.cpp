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

#include "wvsim/core.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace wvsim {

const char* guard_name(Guard guard) {
  switch (guard) {
    case Guard::DimensionMismatch: return "DimensionMismatch";
    case Guard::DimensionLimit: return "DimensionLimit";
    case Guard::ZeroVector: return "ZeroVector";
    case Guard::NonHermitian: return "NonHermitian";
    case Guard::NonUnitary: return "NonUnitary";
    case Guard::NonProjector: return "NonProjector";
    case Guard::InvalidDensity: return "InvalidDensity";
    case Guard::IncompleteBasis: return "IncompleteBasis";
    case Guard::NearOrthogonalSelection: return "NearOrthogonalSelection";
    case Guard::VanishingOverlap: return "VanishingOverlap";
    case Guard::AllPathsVanish: return "AllPathsVanish";
    case Guard::AntipodalSelection: return "AntipodalSelection";
    case Guard::GammaEqualsEta: return "GammaEqualsEta";
    case Guard::DegenerateFit: return "DegenerateFit";
    case Guard::GridResolution: return "GridResolution";
    case Guard::GridWindow: return "GridWindow";
    case Guard::SpectralGapViolation: return "SpectralGapViolation";
    case Guard::InsufficientSteps: return "InsufficientSteps";
    case Guard::SlicingNonConvergence: return "SlicingNonConvergence";
    case Guard::NonFiniteResult: return "NonFiniteResult";
    case Guard::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownGuard";
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw SimError(Guard::DimensionMismatch,
                   std::string(what) + " (" + std::to_string(a) + " vs " +
                       std::to_string(b) + ")");
  }
}

QState::QState(Vector amps) : amps_(std::move(amps)) {
  if (amps_.size() < 1) {
    throw SimError(Guard::InvalidArgument, "state needs dim >= 1");
  }
  const double n = amps_.norm();
  if (n < 1e-300) {
    throw SimError(Guard::ZeroVector, "cannot normalize a zero state vector");
  }
  amps_ /= n;
}

QState QState::basis(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim) {
    throw SimError(Guard::InvalidArgument, "basis index out of range");
  }
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return QState(std::move(v));
}

QOperator::QOperator(Matrix m, OperatorKind kind) : m_(std::move(m)), kind_(kind) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    throw SimError(Guard::InvalidArgument, "operator must be square, dim >= 1");
  }
  switch (kind_) {
    case OperatorKind::General:
      break;
    case OperatorKind::Hermitian:
      if (max_abs(m_ - m_.adjoint()) > kConstructTol) {
        throw SimError(Guard::NonHermitian, "hermitian tag violated");
      }
      break;
    case OperatorKind::Unitary:
      if (max_abs(m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols())) >
          kConstructTol) {
        throw SimError(Guard::NonUnitary, "unitary tag violated");
      }
      break;
    case OperatorKind::Projector:
      if (max_abs(m_ - m_.adjoint()) > kConstructTol) {
        throw SimError(Guard::NonHermitian, "projector must be hermitian");
      }
      if (max_abs(m_ * m_ - m_) > kConstructTol) {
        throw SimError(Guard::NonProjector, "projector tag violated (M^2 != M)");
      }
      break;
  }
}

QOperator QOperator::identity(int dim) {
  return QOperator(Matrix::Identity(dim, dim), OperatorKind::Unitary);
}

QOperator QOperator::dagger() const {
  OperatorKind k = kind_;
  return QOperator(m_.adjoint(), k);
}

DensityOp::DensityOp(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    throw SimError(Guard::InvalidArgument, "density operator must be square");
  }
  if (max_abs(m_ - m_.adjoint()) > kConstructTol) {
    throw SimError(Guard::InvalidDensity, "density operator not hermitian");
  }
  if (std::abs(m_.trace() - Complex(1.0, 0.0)) > kConstructTol) {
    throw SimError(Guard::InvalidDensity, "density operator trace != 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kConstructTol) {
    throw SimError(Guard::InvalidDensity, "density operator not PSD");
  }
}

DensityOp DensityOp::pure(const QState& psi) {
  return DensityOp(psi.amps() * psi.amps().adjoint());
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

QState tensor(const QState& a, const QState& b) {
  Vector out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a.amp(i) * b.amps();
  }
  return QState(std::move(out));
}

QOperator tensor(const QOperator& a, const QOperator& b) {
  OperatorKind kind = OperatorKind::General;
  if (a.kind() == b.kind()) kind = a.kind();
  return QOperator(kron(a.matrix(), b.matrix()), kind);
}

QOperator matrix_exponential(const QOperator& m, Complex scale, int max_dim) {
  if (m.dim() > max_dim) {
    throw SimError(Guard::DimensionLimit,
                   "matrix_exponential dim " + std::to_string(m.dim()) +
                       " over limit " + std::to_string(max_dim));
  }
  const bool hermitian_input =
      m.kind() == OperatorKind::Hermitian || m.kind() == OperatorKind::Projector ||
      max_abs(m.matrix() - m.matrix().adjoint()) <= kConstructTol;

  Matrix result;
  if (hermitian_input) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
    if (solver.info() != Eigen::Success) {
      throw SimError(Guard::NonFiniteResult, "eigendecomposition failed");
    }
    const Eigen::VectorXd& ev = solver.eigenvalues();
    Vector phases(ev.size());
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      phases(k) = std::exp(scale * ev(k));
    }
    result = solver.eigenvectors() * phases.asDiagonal() *
             solver.eigenvectors().adjoint();
  } else {
    Matrix scaled = scale * m.matrix();
    result = scaled.exp();
  }

  OperatorKind kind = OperatorKind::General;
  if (hermitian_input) {
    if (std::abs(scale.real()) < 1e-300) kind = OperatorKind::Unitary;
    else if (std::abs(scale.imag()) < 1e-300) kind = OperatorKind::Hermitian;
  }
  return QOperator(std::move(result), kind);
}

Matrix partial_trace_matrix(const Matrix& m, int dim_first, int dim_second,
                            Subsystem keep) {
  require_same_dim(static_cast<int>(m.rows()), dim_first * dim_second,
                   "partial trace factor dims");
  if (keep == Subsystem::First) {
    Matrix out = Matrix::Zero(dim_first, dim_first);
    for (int i = 0; i < dim_first; ++i) {
      for (int j = 0; j < dim_first; ++j) {
        Complex sum = 0.0;
        for (int k = 0; k < dim_second; ++k) {
          sum += m(i * dim_second + k, j * dim_second + k);
        }
        out(i, j) = sum;
      }
    }
    return out;
  }
  Matrix out = Matrix::Zero(dim_second, dim_second);
  for (int i = 0; i < dim_second; ++i) {
    for (int j = 0; j < dim_second; ++j) {
      Complex sum = 0.0;
      for (int k = 0; k < dim_first; ++k) {
        sum += m(k * dim_second + i, k * dim_second + j);
      }
      out(i, j) = sum;
    }
  }
  return out;
}

DensityOp partial_trace(const DensityOp& rho, int dim_first, int dim_second,
                        Subsystem keep) {
  return DensityOp(
      partial_trace_matrix(rho.matrix(), dim_first, dim_second, keep));
}

Eigensystem eigendecompose_hermitian(const QOperator& m) {
  if (max_abs(m.matrix() - m.matrix().adjoint()) > kConstructTol) {
    throw SimError(Guard::NonHermitian, "eigendecomposition needs hermitian input");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw SimError(Guard::NonFiniteResult, "eigendecomposition failed");
  }
  return Eigensystem{solver.eigenvalues(), solver.eigenvectors()};
}

SpectralProjectors eigenprojectors(const QOperator& a, double gap_tol) {
  Eigensystem eig = eigendecompose_hermitian(a);
  SpectralProjectors out;
  const int d = a.dim();
  int start = 0;
  while (start < d) {
    int end = start + 1;
    while (end < d && eig.eigenvalues(end) - eig.eigenvalues(end - 1) <= gap_tol) {
      ++end;
    }
    Matrix p = Matrix::Zero(d, d);
    double value = 0.0;
    for (int k = start; k < end; ++k) {
      p += eig.eigenvectors.col(k) * eig.eigenvectors.col(k).adjoint();
      value += eig.eigenvalues(k);
    }
    out.eigenvalues.push_back(value / (end - start));
    out.projectors.push_back(std::move(p));
    start = end;
  }
  return out;
}

}  // namespace wvsim
