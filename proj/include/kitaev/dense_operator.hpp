#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "kitaev/params.hpp"

namespace kitaev {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class FermionParity { Even, Odd, Mixed };

/// A labeled operator on the 2^N-dimensional Fock space.
/// Basis ordering: occupation bitstrings with site 1 as the least
/// significant bit.
struct DenseOperator {
  std::string label;
  FermionParity parity = FermionParity::Mixed;
  Matrix data;

  Eigen::Index dim() const { return data.rows(); }

  DenseOperator adjoint(const std::string& new_label = "") const {
    return {new_label.empty() ? label + "^+" : new_label, parity,
            data.adjoint()};
  }
};

/// Hilbert-Schmidt inner product normalized so the identity has unit
/// norm: <A,B> = tr(A^+ B) / 2^N.
inline Complex hs_inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace() / static_cast<double>(a.rows());
}

inline double hs_norm(const Matrix& a) {
  return std::sqrt(std::abs(hs_inner(a, a)));
}

inline Matrix commutator(const Matrix& a, const Matrix& b) {
  return a * b - b * a;
}

inline Matrix anticommutator(const Matrix& a, const Matrix& b) {
  return a * b + b * a;
}

}  // namespace kitaev
