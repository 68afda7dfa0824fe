#include "kitaev/momentum_space.hpp"

#include <cmath>
#include <numbers>

namespace kitaev {

namespace {

const Complex kI{0.0, 1.0};

double band_energy(const ChainParams& params, double k) {
  return std::abs(params.hopping) * std::cos(k + std::arg(params.hopping)) +
         params.chemical_potential;
}

}  // namespace

double dispersion(const ChainParams& params, double k) {
  const double eps = band_energy(params, k);
  const double pair = std::abs(params.pairing * std::sin(k));
  return std::hypot(pair, eps);
}

BogoliubovMode bogoliubov_coefficients(const ChainParams& params, double k) {
  // Split the band into its symmetric and antisymmetric parts in k; the
  // antisymmetric piece (present only for complex hopping) shifts the
  // quasienergy without entering the mixing angle.
  const double aw = std::abs(params.hopping);
  const double pw = std::arg(params.hopping);
  const double sym = aw * std::cos(pw) * std::cos(k) + params.chemical_potential;
  const double anti = -aw * std::sin(pw) * std::sin(k);
  const Complex pair = params.pairing * std::sin(k);
  const double mix = std::hypot(std::abs(pair), sym);
  const double e = mix + anti;
  if (std::abs(pair) < 1e-14) {
    // pure particle/hole point: the lowering mode is c(k) when the band
    // sits above the chemical potential, c^+(-k) when below
    return sym >= 0 ? BogoliubovMode{k, 1.0, 0.0, e}
                    : BogoliubovMode{k, 0.0, 1.0, e};
  }
  const Complex phase = -kI * pair / std::abs(pair);
  const double weight = std::sqrt((mix + sym) / (2.0 * mix));
  const Complex u = phase * weight;
  const Complex v = (sym - mix) / std::abs(pair) * weight;
  return {k, u, v, e};
}

DenseOperator bogoliubov_mode_operator(const ChainParams& params, double k,
                                       int fock_cap) {
  const BogoliubovMode mode = bogoliubov_coefficients(params, k);
  const auto cs = build_fermion_operators(params, fock_cap);
  Matrix d = Matrix::Zero(cs.front().dim(), cs.front().dim());
  const double norm = 1.0 / std::sqrt(static_cast<double>(params.n_sites));
  for (int j = 1; j <= params.n_sites; ++j) {
    const Complex phase =
        norm * std::exp(-kI * k * static_cast<double>(j));
    d += phase * (mode.u * cs[j - 1].data +
                  mode.v * Matrix(cs[j - 1].data.adjoint()));
  }
  return {"d(k)", FermionParity::Odd, std::move(d)};
}

KappaSolution solve_kappa(const ChainParams& params) {
  KappaSolution sol;
  const double ratio = params.chemical_potential / std::abs(params.hopping);
  if (std::abs(ratio) >= 1.0) return sol;  // outside the topological phase
  // the dark combination u = -v needs purely imaginary pairing (Im > 0);
  // otherwise the balanced point is not annihilated by the jumps
  if (std::abs(params.pairing.real()) > 1e-12 * std::abs(params.pairing) ||
      params.pairing.imag() <= 0.0)
    return sol;
  sol.exists = true;
  sol.kappa = std::acos(-ratio);
  sol.kappa_mirror = 2.0 * std::numbers::pi - sol.kappa;
  const double steps = sol.kappa * params.n_sites / (2.0 * std::numbers::pi);
  sol.on_grid = std::abs(steps - std::round(steps)) < 1e-9;
  return sol;
}

std::optional<double> solve_kappa_numerically(const ChainParams& params) {
  // |u_k| - |v_k| changes sign exactly where the Bogoliubov mode is an
  // equal particle/hole mixture; with purely imaginary Delta that is the
  // u_k = -v_k point.
  auto imbalance = [&](double k) {
    const BogoliubovMode mode = bogoliubov_coefficients(params, k);
    return std::abs(mode.u) - std::abs(mode.v);
  };
  double lo = 1e-9;
  double hi = std::numbers::pi - 1e-9;
  double flo = imbalance(lo);
  if (flo * imbalance(hi) > 0.0) return std::nullopt;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = imbalance(mid);
    if (flo * fmid <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

EmergentMode emergent_mode_coefficients(const ChainParams& params,
                                        double kappa) {
  EmergentMode mode;
  mode.coefficients = Vector::Zero(params.n_sites);
  for (int j = 1; j <= params.n_sites; ++j)
    mode.coefficients(j - 1) = std::exp(-kI * kappa * static_cast<double>(j));
  const double ratio = params.chemical_potential / std::abs(params.hopping);
  mode.energy = std::abs(params.pairing) * std::sqrt(1.0 - ratio * ratio);
  return mode;
}

DenseOperator emergent_mode_operator(const ChainParams& params, double kappa,
                                     int fock_cap) {
  const auto gammas = build_majorana_operators(params, fock_cap);
  const EmergentMode mode = emergent_mode_coefficients(params, kappa);
  Matrix d = Matrix::Zero(gammas.front().dim(), gammas.front().dim());
  for (int j = 0; j < params.n_sites; ++j)
    d += mode.coefficients(j) * gammas[2 * j + 1].data;
  return {"d_kappa", FermionParity::Odd, std::move(d)};
}

DenseOperator dressed_mode_operator(const ChainParams& params, double kappa,
                                    int fock_cap) {
  const DenseOperator d = emergent_mode_operator(params, kappa, fock_cap);
  const DenseOperator p = build_parity(params, 1, params.n_sites, fock_cap);
  return {"A_kappa", FermionParity::Odd, p.data * d.data};
}

double perturbed_mode_residual(const ChainParams& params, double kappa,
                               double eps, int fock_cap) {
  // the detuned mode is the Bogoliubov eigenmode at kappa + eps: away from
  // the root it is no longer an even-Majorana combination, and the jump
  // commutators grow linearly with the particle/hole imbalance u + v
  const DenseOperator d =
      bogoliubov_mode_operator(params, kappa + eps, fock_cap);
  const DenseOperator p =
      build_parity(params, 1, params.n_sites, fock_cap);
  const DenseOperator a{"A_det", FermionParity::Odd, p.data * d.data};
  const double scale = hs_norm(d.data);
  double worst = 0.0;
  for (const auto& jump : build_jump_operators(params, fock_cap))
    worst = std::max(worst, hs_norm(commutator(jump.data, a.data)));
  return worst / scale;
}

std::vector<double> brillouin_grid(int n_sites) {
  std::vector<double> grid;
  grid.reserve(n_sites);
  const int lo = -n_sites / 2 + 1;
  const int hi = lo + n_sites - 1;
  for (int m = lo; m <= hi; ++m)
    grid.push_back(2.0 * std::numbers::pi * m / n_sites);
  return grid;
}

}  // namespace kitaev
