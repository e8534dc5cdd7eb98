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

#include "wvsim/rng.hpp"

#include <cmath>

namespace wvsim {

double Rng::uniform() {
  // 53 uniform bits, in [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(engine_() % static_cast<uint64_t>(hi - lo + 1));
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double two_pi = 6.283185307179586476925286766559;
  spare_ = mag * std::sin(two_pi * u2);
  have_spare_ = true;
  return mag * std::cos(two_pi * u2);
}

Vector Rng::ginibre_vector(int dim) {
  Vector v(dim);
  for (int k = 0; k < dim; ++k) {
    v(k) = Complex(gaussian(), gaussian());
  }
  return v;
}

QState Rng::random_state(int dim) { return QState(ginibre_vector(dim)); }

QOperator Rng::random_hermitian(int dim) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = Complex(gaussian(), gaussian());
    }
  }
  Matrix h = (g + g.adjoint()) / 2.0;
  return QOperator::hermitian(std::move(h));
}

QOperator Rng::random_unitary(int dim) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = Complex(gaussian(), gaussian());
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the diagonal phases so the distribution is Haar.
  for (int k = 0; k < dim; ++k) {
    Complex d = r(k, k);
    double a = std::abs(d);
    q.col(k) *= (a > 0 ? d / a : Complex(1.0, 0.0));
  }
  return QOperator::unitary(std::move(q));
}

QOperator Rng::random_projector(int dim, int rank) {
  if (rank < 1 || rank > dim) {
    throw SimError(Guard::InvalidArgument, "projector rank out of range");
  }
  QOperator u = random_unitary(dim);
  Matrix p = Matrix::Zero(dim, dim);
  for (int k = 0; k < rank; ++k) {
    p += u.matrix().col(k) * u.matrix().col(k).adjoint();
  }
  return QOperator::projector(std::move(p));
}

DensityOp Rng::random_density(int dim) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = Complex(gaussian(), gaussian());
    }
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityOp(std::move(rho));
}

}  // namespace wvsim
