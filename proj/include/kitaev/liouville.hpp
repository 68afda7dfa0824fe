#pragma once

#include <vector>

#include "kitaev/dense_operator.hpp"
#include "kitaev/model_core.hpp"
#include "kitaev/params.hpp"

namespace kitaev {

inline constexpr int kSuperoperatorCap = 6;

/// Vectorized Liouvillian under row-major stacking vec(rho)_{i d + j} =
/// rho_ij, so vec(A rho B) = (A kron B^T) vec(rho):
///   L = -i(H kron 1 - 1 kron H^T)
///       + sum_mu [2 L kron conj(L) - (L^+L) kron 1 - 1 kron (L^+L)^T].
struct Superoperator {
  int n_sites;
  Matrix matrix;  // 4^N x 4^N
};

Superoperator build_superoperator(const ChainParams& params,
                                  int cap = kSuperoperatorCap);

Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v);

/// Eigenvalue with biorthonormal right/left eigenoperators:
/// tr(sigma_left^+ rho_right') = delta.
struct SpectralTriple {
  Complex lambda;
  Matrix rho_right;
  Matrix sigma_left;
};

/// Full eigensystem, sorted by (Re lambda, Im lambda); left operators
/// from the inverse of the right eigenvector matrix (biorthonormal by
/// construction, deterministic in degenerate subspaces).
std::vector<SpectralTriple> full_spectrum(const Superoperator& sup);

/// rho(t) on the grid via the eigendecomposition of the superoperator.
/// rho0 must be Hermitian, unit trace and positive semidefinite to
/// 1e-10 unless allow_unphysical is set.
std::vector<Matrix> propagate_density_matrix(const ChainParams& params,
                                             const Matrix& rho0,
                                             const std::vector<double>& t_grid,
                                             bool allow_unphysical = false);

/// Spectral-decomposition trajectory
/// sum_k e^{t lambda_k} tr(obs^+ rho_k) tr(sigma_k^+ rho0);
/// equals tr(obs^+ rho(t)).
Complex observable_trajectory(const std::vector<SpectralTriple>& spectrum,
                              const Matrix& obs, const Matrix& rho0, double t);

}  // namespace kitaev
