#pragma once

#include <Eigen/Dense>

#include "kitaev/dense_operator.hpp"
#include "kitaev/params.hpp"

namespace kitaev {

/// Coefficients of the quadratic model in the Majorana basis
/// (gamma_1 ... gamma_2N, site-major ordering: 2j-1 odd, 2j even):
///   H0 = sum_{jk} H_jk gamma_j gamma_k   with H antisymmetric,
///   L_mu = sum_j l_{mu j} gamma_j,       M_jk = sum_mu l_{mu j} conj(l_{mu k}).
struct MajoranaQuadraticForm {
  Matrix h_mat;  // 2N x 2N antisymmetric
  Matrix m_mat;  // 2N x 2N Hermitian, positive semidefinite
};

/// Builds (H, M) analytically from the chain parameters. Interaction
/// terms are outside the quadratic model and are ignored; pass
/// `warn_interactions` to have that fact reported on stderr.
MajoranaQuadraticForm majorana_coefficients(const ChainParams& params,
                                            bool warn_interactions = true);

/// The three distinct 2x2 blocks of a nearest-neighbour block-circulant
/// matrix: same-site (d=0) and the two neighbour offsets (d=+1, d=-1).
struct CirculantBlocks {
  Eigen::Matrix2cd b0, b_plus, b_minus;

  /// Symbol A(k) = b0 + b_plus e^{ik} + b_minus e^{-ik}.
  Eigen::Matrix2cd symbol(double k) const;
};

CirculantBlocks hamiltonian_blocks(const ChainParams& params);
CirculantBlocks dissipation_blocks(const ChainParams& params);

}  // namespace kitaev
