#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kitaev/quadratic_form.hpp"

namespace kitaev {

/// Blocks of the 4N x 4N quadratic-form ("shape") matrix of the
/// even-sector Liouvillian over operator-space fermions.
struct ShapeBlocks {
  Matrix l11, l12, l22;

  Eigen::Index size() const { return l11.rows(); }  // = 2N
  /// Assembled [[L11, L12], [0, L22]] matrix.
  Matrix assemble() const;
};

/// L11 = -2iH - M - M^T, L12 = 4M, L22 = 2iH^T + M^T + M.
/// Throws InternalConsistencyError unless L11 = -L22^+.
ShapeBlocks shape_blocks(const MajoranaQuadraticForm& form);

/// The 2N rapidities: eigenvalues of L22, sorted by (Re, Im).
struct RapiditySet {
  std::vector<Complex> betas;
  double max_negative_real = 0.0;  // worst Re < 0 excursion seen (diagnostic)
  double pairing_residual = 0.0;   // conjugate-pair matching error
};

/// Diagonalizes L22 and validates that Re beta >= -1e-10 and that the
/// multiset is closed under complex conjugation.
RapiditySet rapidities(const ShapeBlocks& blocks);

/// lambda_v = -2 sum_i beta_i v_i for an occupation string v of length 2N.
Complex spectrum_from_rapidities(const RapiditySet& rap,
                                 const std::vector<int>& v);

/// Eigenvalue together with the number of excited rapidities in v.
struct AssembledEigenvalue {
  Complex lambda;
  int n_excitations;
};

/// All 2^{2N} Liouvillian eigenvalues; requires 2N <= 24.
std::vector<Complex> enumerate_full(const RapiditySet& rap);
std::vector<AssembledEigenvalue> enumerate_full_labeled(const RapiditySet& rap);

/// All lambda_v with at most `m` excited rapidities.
std::vector<Complex> enumerate_max_excitations(const RapiditySet& rap, int m);
std::vector<AssembledEigenvalue> enumerate_max_excitations_labeled(
    const RapiditySet& rap, int m);

/// All lambda_v with |Re lambda| <= cap, built greedily from the
/// smallest-Re rapidities (sound because Re beta >= 0 makes Re lambda
/// monotone in added excitations).
std::vector<Complex> enumerate_realpart_cap(const RapiditySet& rap,
                                            double cap);
std::vector<AssembledEigenvalue> enumerate_realpart_cap_labeled(
    const RapiditySet& rap, double cap);

/// The 2x2 momentum block of L22 for the translation-invariant chain.
Eigen::Matrix2cd momentum_block_l22(const ChainParams& params, double k);

/// Closed-form eigenvalues of the 2x2 momentum block,
/// tr/2 +- sqrt((tr/2)^2 - det), ordered by (Re, Im).
std::pair<Complex, Complex> rapidity_dispersion_pbc(const ChainParams& params,
                                                    double k);

/// Rapidities of the PBC chain assembled from the Brillouin grid
/// k = 2 pi m / N, m = -N/2+1 .. N/2; equals rapidities() of the full
/// real-space L22 for the quadratic model.
std::vector<Complex> grid_rapidities(const ChainParams& params);

/// Dissipative gap: the smallest Re beta among oscillating (Im != 0)
/// rapidities away from the exactly-protected mode.
double dissipative_gap(const ChainParams& params);

struct GapPoint {
  int n_sites;
  double gap;
};

std::vector<GapPoint> gap_scaling(const ChainParams& params_template,
                                  const std::vector<int>& n_list);

/// Log-log least-squares slope of gap vs N; requires >= 2 points.
double fit_loglog_slope(const std::vector<GapPoint>& points);

/// Classification used for CSV emission: |lambda| < tol -> "zero",
/// |Re lambda| < tol -> "imaginary", else "decaying".
std::string classify_eigenvalue(Complex lambda, double tol = 1e-9);

}  // namespace kitaev
