#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <vector>

#include "kitaev/covariance_dynamics.hpp"
#include "kitaev/liouville.hpp"
#include "kitaev/model_core.hpp"

using namespace kitaev;

namespace {

const Complex kI{0.0, 1.0};

ChainParams reference_params(int n) {
  ChainParams p;
  p.n_sites = n;
  p.hopping = {1.0, 0.0};
  p.pairing = {0.0, 1.0};
  p.chemical_potential = 0.0;
  p.dissipation_rate = 1.0;
  return p;
}

/// Two-point data of a density matrix, read off in the Fock basis.
CovarianceState state_from_density_matrix(const ChainParams& params,
                                          const Matrix& rho) {
  const auto cs = build_fermion_operators(params);
  const int n = params.n_sites;
  CovarianceState state;
  state.f = Matrix::Zero(n, n);
  state.g = Matrix::Zero(n, n);
  for (int m = 0; m < n; ++m)
    for (int q = 0; q < n; ++q) {
      state.f(m, q) = (rho * cs[m].data * cs[q].data).trace();
      state.g(m, q) = (rho * cs[m].data.adjoint() * cs[q].data).trace();
    }
  return state_from_sigma(sigma_from_state(state));
}

}  // namespace

TEST_CASE("uniform pair state layout") {
  const CovarianceState s = make_uniform_pair_state(4);
  for (int m = 0; m < 4; ++m)
    for (int q = 0; q < 4; ++q) {
      const Complex expected_f =
          m == q ? Complex{0, 0} : (m < q ? Complex{1, 1} : Complex{-1, -1});
      CHECK(std::abs(s.f(m, q) - expected_f) < 1e-14);
      CHECK(std::abs(s.g(m, q) - (m == q ? 1.0 : 0.0)) < 1e-14);
    }
  CHECK_FALSE(s.physical);  // deliberately outside the covariance bounds
  s.validate_structure();
}

TEST_CASE("covariance <-> Majorana round trip") {
  for (std::uint64_t seed : {7, 8, 9}) {
    const CovarianceState s = make_random_state(5, seed);
    const Matrix sigma = sigma_from_state(s);
    CHECK((sigma - sigma.adjoint()).norm() < 1e-12);
    CHECK((sigma + sigma.transpose()).norm() < 1e-12);
    const CovarianceState back = state_from_sigma(sigma);
    CHECK((back.f - s.f).norm() < 1e-12);
    CHECK((back.g - s.g).norm() < 1e-12);
    CHECK(s.physical);
  }
}

TEST_CASE("random states are reproducible by seed") {
  const CovarianceState a = make_random_state(6, 42);
  const CovarianceState b = make_random_state(6, 42);
  const CovarianceState c = make_random_state(6, 43);
  CHECK((a.f - b.f).norm() == 0.0);
  CHECK((a.g - b.g).norm() == 0.0);
  CHECK((a.f - c.f).norm() > 1e-3);
}

TEST_CASE("save / load round trip is bit-exact") {
  const CovarianceState s = make_random_state(4, 11);
  std::stringstream buffer;
  save_state(buffer, s);
  const CovarianceState back = load_state(buffer);
  CHECK((back.f - s.f).norm() == 0.0);
  CHECK((back.g - s.g).norm() == 0.0);
  CHECK(back.physical == s.physical);
  CHECK(back.t == s.t);
}

TEST_CASE("trajectory matches the precomputed reference values") {
  const ChainParams p = reference_params(4);
  const Trajectory traj =
      integrate(make_uniform_pair_state(4), p, 5.0, 0.5);
  REQUIRE(traj.times.size() == 11);
  const std::vector<std::pair<std::size_t, Complex>> expected{
      {1, {0.096061299667943, 0.318269445265646}},
      {2, {-0.058462717638653, 0.184408339270811}},
      {4, {-0.056308807646727, 0.154172582866946}},
      {10, {0.026537541149907, 0.371905442494533}}};
  for (const auto& [idx, value] : expected)
    CHECK(std::abs(traj.c1c2[idx] - value) < 1e-8);
}

TEST_CASE("adaptive and spectral integrators agree") {
  const ChainParams p = reference_params(6);
  const CovarianceState s0 = make_random_state(6, 3);
  const Trajectory a = integrate(s0, p, 10.0, 1.0, EvolveMethod::Adaptive);
  const Trajectory b = integrate(s0, p, 10.0, 1.0, EvolveMethod::Spectral);
  REQUIRE(a.times.size() == b.times.size());
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    CHECK(std::abs(a.c1c2[i] - b.c1c2[i]) < 1e-8);
    CHECK(std::abs(a.c1dag_c2[i] - b.c1dag_c2[i]) < 1e-8);
  }
  CHECK((sigma_from_state(a.final_state) - sigma_from_state(b.final_state))
            .norm() < 1e-7);
}

TEST_CASE("flow preserves the covariance structure") {
  const ChainParams p = reference_params(5);
  const Trajectory traj =
      integrate(make_random_state(5, 21), p, 8.0, 8.0, EvolveMethod::Spectral);
  traj.final_state.validate_structure();
  CHECK(traj.final_state.physical);
}

TEST_CASE("flow is linear-affine in the initial covariance") {
  const ChainParams p = reference_params(4);
  const CovarianceState a = make_random_state(4, 1);
  const CovarianceState b = make_random_state(4, 2);
  const Matrix sa = sigma_from_state(a);
  const Matrix sb = sigma_from_state(b);
  CovarianceState mid = state_from_sigma(0.5 * sa + 0.5 * sb);
  const Matrix ea = sigma_from_state(
      integrate(a, p, 3.0, 3.0, EvolveMethod::Spectral).final_state);
  const Matrix eb = sigma_from_state(
      integrate(b, p, 3.0, 3.0, EvolveMethod::Spectral).final_state);
  const Matrix em = sigma_from_state(
      integrate(mid, p, 3.0, 3.0, EvolveMethod::Spectral).final_state);
  CHECK((em - 0.5 * ea - 0.5 * eb).norm() < 1e-10);
}

TEST_CASE("agreement with the exact density-matrix oracle") {
  const ChainParams p = reference_params(4);
  std::mt19937_64 rng(2026);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::vector<double> t_grid{0.0, 0.5, 1.0, 2.5, 5.0};
  for (int trial = 0; trial < 3; ++trial) {
    Vector psi(16);
    for (int i = 0; i < 16; ++i) psi(i) = Complex{gauss(rng), gauss(rng)};
    psi.normalize();
    const Matrix rho0 = psi * psi.adjoint();

    const auto rho_t = propagate_density_matrix(p, rho0, t_grid);
    const CovarianceState s0 = state_from_density_matrix(p, rho0);
    CHECK(s0.physical);
    const Trajectory traj = integrate(s0, p, 5.0, 0.5);

    const auto cs = build_fermion_operators(p);
    const Matrix c1c2 = cs[0].data * cs[1].data;
    const Matrix c1dag_c2 = cs[0].data.adjoint() * cs[1].data;
    const std::vector<std::size_t> idx{0, 1, 2, 5, 10};
    for (std::size_t s = 0; s < t_grid.size(); ++s) {
      const Complex exact_pair = (rho_t[s] * c1c2).trace();
      const Complex exact_hop = (rho_t[s] * c1dag_c2).trace();
      CHECK(std::abs(traj.c1c2[idx[s]] - exact_pair) < 1e-8);
      CHECK(std::abs(traj.c1dag_c2[idx[s]] - exact_hop) < 1e-8);
    }
  }
}

TEST_CASE("empty lattice fills toward half occupation under balanced jumps") {
  const ChainParams p = reference_params(4);
  CovarianceState vacuum;
  vacuum.f = Matrix::Zero(4, 4);
  vacuum.g = Matrix::Zero(4, 4);
  const Trajectory traj =
      integrate(vacuum, p, 50.0, 50.0, EvolveMethod::Spectral);
  for (int m = 0; m < 4; ++m)
    CHECK(std::abs(traj.final_state.g(m, m) - 0.5) < 1e-8);
}

TEST_CASE("long-time statistics on synthetic signals") {
  std::vector<double> times;
  std::vector<Complex> osc, flat;
  for (int i = 0; i <= 4000; ++i) {
    const double t = 0.05 * i;
    times.push_back(t);
    osc.push_back(0.3 * std::exp(kI * 2.0 * t));
    flat.push_back({0.7, 0.0});
  }
  const LongTimeStats s_osc = long_time_value(times, osc);
  CHECK(s_osc.mean_abs == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(s_osc.dominant_freq == doctest::Approx(2.0).epsilon(0.01));
  CHECK(amplitude_at_frequency(times, osc, 2.0) ==
        doctest::Approx(0.3).epsilon(0.01));

  const LongTimeStats s_flat = long_time_value(times, flat);
  CHECK(s_flat.mean_abs == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(s_flat.osc_amplitude < 1e-12);
  CHECK(s_flat.dominant_freq == 0.0);
}

TEST_CASE("scaling sweep returns one row per size") {
  const auto rows =
      scaling_sweep(reference_params(4), {4, 8}, 40.0, 0.25);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n_sites == 4);
  CHECK(rows[1].n_sites == 8);
  CHECK(rows[0].stats.mean_abs > rows[1].stats.mean_abs);
}
