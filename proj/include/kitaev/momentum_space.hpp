#pragma once

#include <optional>
#include <vector>

#include "kitaev/dense_operator.hpp"
#include "kitaev/model_core.hpp"
#include "kitaev/params.hpp"

namespace kitaev {

/// Quasienergy E_k = sqrt(|Delta sin k|^2 + (|w| cos(k + arg w) + mu)^2).
double dispersion(const ChainParams& params, double k);

/// Bogoliubov mode d(k) = u c(k) + v c^+(-k) lowering H0 by E:
/// [H0, d(k)] = -E d(k). Normalized to |u|^2 + |v|^2 = 1.
struct BogoliubovMode {
  double k;
  Complex u, v;
  double energy;
};

/// At k in {0, pi} the pairing term vanishes and the mode degenerates
/// to a pure particle or hole, chosen by the sign of the band energy.
BogoliubovMode bogoliubov_coefficients(const ChainParams& params, double k);

/// Fock realization d(k) = (1/sqrt N) sum_j e^{-ikj} (u c_j + v c_j^+)
/// for small N; [H0, d(k)] = -E_k d(k).
DenseOperator bogoliubov_mode_operator(const ChainParams& params, double k,
                                       int fock_cap = kDefaultFockCap);

struct KappaSolution {
  bool exists = false;       // requires |mu| < |w| and purely imaginary Delta
  double kappa = 0.0;        // arccos(-mu/|w|) in (0, pi)
  double kappa_mirror = 0.0; // 2 pi - kappa
  bool on_grid = false;      // kappa = 2 pi m / N for integer m
};

KappaSolution solve_kappa(const ChainParams& params);

/// Locates u_k = -v_k by bisection on Re<u+v, phase-aligned> over
/// k in (0, pi); returns nullopt when no root exists.
std::optional<double> solve_kappa_numerically(const ChainParams& params);

/// Coefficient vector of d_kappa = sum_j e^{-i kappa j} gamma_{2j} over
/// the even Majoranas (index j = 1..N), plus the closed-form energy
/// E_kappa = |Delta| sqrt(1 - (mu/|w|)^2).
struct EmergentMode {
  Vector coefficients;
  double energy;
};

EmergentMode emergent_mode_coefficients(const ChainParams& params,
                                        double kappa);

/// Fock-space realizations (small N): d_kappa and A_kappa = P_{1,N} d_kappa.
DenseOperator emergent_mode_operator(const ChainParams& params, double kappa,
                                     int fock_cap = kDefaultFockCap);
DenseOperator dressed_mode_operator(const ChainParams& params, double kappa,
                                    int fock_cap = kDefaultFockCap);

/// max_j ||[L_j, P_{1,N} d_{kappa+eps}]|| / ||d_{kappa+eps}||
/// (Hilbert-Schmidt norms); vanishes at eps = 0 on the grid.
double perturbed_mode_residual(const ChainParams& params, double kappa,
                               double eps, int fock_cap = kDefaultFockCap);

/// First-Brillouin-zone grid k = 2 pi m / N, m = -N/2+1 .. N/2.
std::vector<double> brillouin_grid(int n_sites);

}  // namespace kitaev
