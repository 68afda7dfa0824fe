#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kitaev {

using Complex = std::complex<double>;

/// One beyond-quadratic pairing term: coefficient times a product of
/// odd-sublattice Majorana operators, one per listed site. The site
/// tuple must have even length so the term is bosonic.
struct InteractionTerm {
  Complex coefficient;
  std::vector<int> sites;  // 1-based site indices
};

/// Physical parameters of the driven-dissipative Kitaev chain.
/// Periodic boundary conditions throughout (c_{N+1} = c_1).
struct ChainParams {
  int n_sites = 4;
  Complex hopping{1.0, 0.0};        // w
  Complex pairing{0.0, 1.0};        // Delta
  double chemical_potential = 0.0;  // mu
  double dissipation_rate = 1.0;    // Gamma (= g of the general jump form)
  Complex jump_asymmetry{1.0, 0.0}; // delta in L_j = sqrt(g)(c_j + delta c_j^+)
  std::vector<InteractionTerm> interactions;

  void validate() const {
    if (n_sites < 2) throw std::invalid_argument("n_sites must be >= 2");
    if (dissipation_rate < 0.0)
      throw std::invalid_argument("dissipation_rate must be >= 0");
    for (const auto& term : interactions) {
      if (term.sites.size() % 2 != 0)
        throw std::invalid_argument(
            "interaction site tuple must have even length");
      for (int s : term.sites)
        if (s < 1 || s > n_sites)
          throw std::invalid_argument("interaction site index out of range");
    }
  }

  bool momentum_pi_half_on_grid() const { return n_sites % 4 == 0; }
};

/// Thrown when a construction exceeds the exact-diagonalization cap.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a model identity fails to hold at construction time,
/// signalling a convention mismatch rather than bad user input.
struct InternalConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kitaev
