// Copyright 2026 The qsynth Authors
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

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "qsynth/errors.hpp"

namespace qsynth {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

// Principal value of an angle in (-pi, pi]. Stable for any finite input.
// atan2 can land on the open end of the interval, so fold that case over.
inline double wrap_angle(double a) {
  const double w = std::atan2(std::sin(a), std::cos(a));
  return w == -kPi ? kPi : w;
}

// True when a is 0 mod 2*pi within tol.
inline bool angle_is_zero(double a, double tol = 1e-12) {
  return std::abs(wrap_angle(a)) <= tol;
}

inline double unitarity_defect(const Matrix& m) {
  const Eigen::Index n = m.rows();
  return (m * m.adjoint() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

// Frobenius distance min_phi || A - e^{i phi} B ||. The minimizing phase is
// the argument of tr(B^dag A); aligning it and subtracting entrywise stays
// accurate all the way down to zero, where the expanded closed form would
// lose everything to cancellation.
inline double distance_up_to_phase(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("distance_up_to_phase: shapes differ");
  }
  const Complex overlap = (b.adjoint() * a).trace();
  const double mag = std::abs(overlap);
  // A vanishing overlap makes every phase equally good; unit works then.
  const Complex phase = mag > 0 ? overlap / mag : Complex(1, 0);
  return (a - phase * b).norm();
}

// Square matrix verified unitary on construction. Kept deliberately thin:
// synthesis routines work on the raw Eigen matrix and use this class at the
// API boundary where the guarantee matters.
class Unitary {
 public:
  explicit Unitary(Matrix m, double tol = 1e-12) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
      throw DimensionMismatch("Unitary: matrix is not square");
    }
    const double defect = unitarity_defect(m_);
    if (!(defect <= tol)) {
      throw NotUnitary("Unitary: ||U U^dag - I||_max = " + std::to_string(defect) +
                       " exceeds tolerance " + std::to_string(tol));
    }
  }

  static Unitary identity(Eigen::Index n) { return Unitary(Matrix::Identity(n, n)); }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

// Haar-distributed unitary via QR of a Ginibre matrix with the standard phase
// fix (R diagonal rescaled to unit modulus).
inline Matrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = Complex(gauss(rng), gauss(rng));
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0) ? rjj / mag : Complex(1, 0);
  }
  return q;
}

}  // namespace qsynth
