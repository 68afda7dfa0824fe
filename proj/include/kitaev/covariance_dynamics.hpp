#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kitaev/quadratic_form.hpp"

namespace kitaev {

/// Two-point correlation data F_mn = <c_m c_n>, G_mn = <c_m^+ c_n>.
struct CovarianceState {
  Matrix f;  // antisymmetric
  Matrix g;  // Hermitian
  double t = 0.0;
  bool physical = true;  // Majorana covariance spectrum within [-1, 1]

  int n_sites() const { return static_cast<int>(f.rows()); }
  /// Checks antisymmetry/Hermiticity to 1e-10 and evaluates physicality.
  void validate_structure() const;
};

/// Majorana covariance Sigma_ab = <gamma_a gamma_b> - delta_ab (2N x 2N).
Matrix sigma_from_state(const CovarianceState& state);
CovarianceState state_from_sigma(const Matrix& sigma, double t = 0.0);

/// Linear-affine flow d Sigma/dt = X Sigma + Sigma X^T + Y.
struct FlowGenerator {
  Matrix x, y;
};

FlowGenerator derive_generator(const ChainParams& params);

/// Observables read off the Majorana covariance.
Complex c1c2_from_sigma(const Matrix& sigma);       // <c_1 c_2>
Complex c1dag_c2_from_sigma(const Matrix& sigma);   // <c_1^+ c_2>

struct Trajectory {
  std::vector<double> times;
  std::vector<Complex> c1c2;
  std::vector<Complex> c1dag_c2;
  CovarianceState final_state;
  std::string initial_label;
  std::uint64_t seed = 0;
};

enum class EvolveMethod { Adaptive, Spectral };

/// Integrates the flow from state0 to t_max, sampling every dt_out.
/// Adaptive: embedded Dormand-Prince 5(4), abs tol 1e-10, rel tol 1e-9.
/// Spectral: eigendecomposition of X, exact up to roundoff.
Trajectory integrate(const CovarianceState& state0, const ChainParams& params,
                     double t_max, double dt_out,
                     EvolveMethod method = EvolveMethod::Adaptive);

/// <c_i c_j> = 1 + i for i < j (antisymmetrized, zero diagonal) and
/// <c_i c_i^+> = 0, i.e. G = identity. Deliberately outside the physical
/// covariance bounds; flagged accordingly.
CovarianceState make_uniform_pair_state(int n_sites);

/// Reproducible Gaussian-entry random antisymmetric F / Hermitian G.
CovarianceState make_random_state(int n_sites, std::uint64_t seed);

void save_state(std::ostream& out, const CovarianceState& state);
CovarianceState load_state(std::istream& in);

struct LongTimeStats {
  double mean_abs = 0.0;
  double osc_amplitude = 0.0;  // peak-to-peak / 2 of |value|
  double dominant_freq = 0.0;  // angular frequency of the DFT peak
};

/// Statistics over the trailing `window` fraction of the trajectory.
LongTimeStats long_time_value(const std::vector<double>& times,
                              const std::vector<Complex>& values,
                              double window = 0.25);

/// Single-bin complex amplitude |(1/T) integral v(t) e^{-i freq t} dt|
/// over the trailing window (mean removed), trapezoidal rule. For a
/// signal a e^{i freq t} this returns |a|.
double amplitude_at_frequency(const std::vector<double>& times,
                              const std::vector<Complex>& values, double freq,
                              double window = 0.25);

struct ScalingRow {
  int n_sites;
  LongTimeStats stats;
};

std::vector<ScalingRow> scaling_sweep(const ChainParams& params_template,
                                      const std::vector<int>& n_list,
                                      double t_max, double dt_out);

}  // namespace kitaev
