#pragma once

#include <utility>
#include <vector>

#include "kitaev/dense_operator.hpp"
#include "kitaev/params.hpp"

namespace kitaev {

/// Exact Fock-space construction of the chain operators via the
/// Jordan-Wigner mapping. Intended for N up to `fock_cap` sites.
///
/// Convention note: the quadratic part is built as
///   H = 1/2 sum_i (w c_i^+ c_{i+1} + w^* c_{i+1}^+ c_i
///                  + D c_i c_{i+1} + D^* c_{i+1}^+ c_i^+)
///       + mu sum_i (n_i - 1/2) + interactions,
/// the sign of the quadratic sum being fixed by the requirement that
/// the gapless momentum sits at kappa = arccos(-mu/|w|) and that
/// [H, A_0] = i*Delta*A_0 holds at mu = 0 for purely imaginary Delta.

inline constexpr int kDefaultFockCap = 12;

/// c_1..c_N as dense matrices; throws ResourceError above the cap.
std::vector<DenseOperator> build_fermion_operators(const ChainParams& params,
                                                   int fock_cap = kDefaultFockCap);

/// gamma_1..gamma_2N with gamma_{2j-1} = c_j + c_j^+,
/// gamma_{2j} = i(c_j - c_j^+).
std::vector<DenseOperator> build_majorana_operators(const ChainParams& params,
                                                    int fock_cap = kDefaultFockCap);

/// Full Hamiltonian including interaction terms V * prod gamma_odd.
/// Throws InternalConsistencyError if the result is not Hermitian.
DenseOperator build_hamiltonian(const ChainParams& params,
                                int fock_cap = kDefaultFockCap);

/// Unit-normalized parity string prod_{q=j..k} (1 - 2 n_q); eigenvalues
/// are +-1. The alternative form m_q = 1/2 - n_q differs by a factor
/// 2^{k-j+1} which is absorbed into operator normalizations.
DenseOperator build_parity(const ChainParams& params, int site_j, int site_k,
                           int fock_cap = kDefaultFockCap);

/// A_0 = sum_x e^{i pi x/2} (c_x + c_x^+); requires mod(N,4) = 0.
DenseOperator build_modulated_a0(const ChainParams& params,
                                 int fock_cap = kDefaultFockCap);

/// Result of the non-local construction A = sum_x e^{i pi x/2}(b_x + b_x^+)
/// with b_x = P_{1,x-1} c_x P_{x,N}, rescaled so {A, A^+} = 1.
struct NonlocalSymmetry {
  DenseOperator op;            // normalized A
  double normalization;        // scalar the raw sum was divided by
};

NonlocalSymmetry build_nonlocal_a(const ChainParams& params,
                                  int fock_cap = kDefaultFockCap);

/// Spin-basis image of A: sum_j e^{i pi j/2} sigma^x_j P_{j+1,N},
/// built directly from Pauli strings (no fermion operators involved).
DenseOperator build_semilocal_spin_a(const ChainParams& params,
                                     int fock_cap = kDefaultFockCap);

/// Q = A^+ A (with the normalized A) and the symmetry S = e^{i pi Q}.
/// Q is a projector (A is nilpotent with {A,A^+} = 1), so the pi factor
/// is what gives S the two eigenvalues +-1; without it the exponential
/// has eigenvalues {1, e^i}.
struct ChargeAndSymmetry {
  DenseOperator charge;    // Q, Hermitian
  DenseOperator symmetry;  // S = exp(i pi Q)
};

ChargeAndSymmetry build_charge_q(const ChainParams& params,
                                 int fock_cap = kDefaultFockCap);

/// L_j = sqrt(g) (c_j + delta c_j^+), one per site.
std::vector<DenseOperator> build_jump_operators(const ChainParams& params,
                                                int fock_cap = kDefaultFockCap);

/// Least-squares eigenoperator fit: omega = <A,[H,A]> / <A,A>, and the
/// relative residual ||[H,A] - omega A|| / ||A|| (Hilbert-Schmidt).
struct EigenoperatorFit {
  Complex omega;
  double residual;
};

EigenoperatorFit verify_eigenoperator(const DenseOperator& hamiltonian,
                                      const DenseOperator& candidate);

}  // namespace kitaev
