#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "kitaev/liouville.hpp"
#include "kitaev/model_core.hpp"
#include "kitaev/momentum_space.hpp"
#include "kitaev/third_quantization.hpp"

using namespace kitaev;

namespace {

ChainParams fig1_params(int n) {
  ChainParams p;
  p.n_sites = n;
  p.hopping = {1.0, 0.0};
  p.pairing = {0.0, 1.0};
  p.chemical_potential = 0.0;
  p.dissipation_rate = 1.0;
  return p;
}

ChainParams random_params(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ChainParams p;
  p.n_sites = 4 + 2 * static_cast<int>(rng() % 3);
  p.hopping = {dist(rng), dist(rng)};
  p.pairing = {dist(rng), dist(rng)};
  p.chemical_potential = dist(rng);
  p.dissipation_rate = 0.2 + std::abs(dist(rng));
  p.jump_asymmetry = {dist(rng), dist(rng)};
  return p;
}

}  // namespace

TEST_CASE("Majorana coefficients reproduce the Fock-space Hamiltonian") {
  const ChainParams p = fig1_params(4);
  const MajoranaQuadraticForm form = majorana_coefficients(p);
  CHECK((form.h_mat + form.h_mat.transpose()).norm() < 1e-12);
  CHECK((form.m_mat - form.m_mat.adjoint()).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(form.m_mat, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);

  // H_jk = tr((gamma_j gamma_k)^+ H) / 2^N / 2 for j != k
  const Matrix h = build_hamiltonian(p).data;
  const auto gammas = build_majorana_operators(p);
  for (int j = 0; j < 8; ++j)
    for (int k = 0; k < 8; ++k) {
      if (j == k) continue;
      const Complex coeff =
          0.5 * hs_inner(Matrix(gammas[j].data * gammas[k].data), h);
      CHECK(std::abs(coeff - form.h_mat(j, k)) < 1e-12);
    }
}

TEST_CASE("dissipation matrix: symmetric jump limit and off cases") {
  ChainParams p = fig1_params(4);
  SUBCASE("delta = 1 keeps only the odd-Majorana entry") {
    const CirculantBlocks m = dissipation_blocks(p);
    Eigen::Matrix2cd expected;
    expected << p.dissipation_rate, 0, 0, 0;
    CHECK((m.b0 - expected).norm() < 1e-14);
    CHECK(m.b_plus.norm() < 1e-14);
    CHECK(m.b_minus.norm() < 1e-14);
  }
  SUBCASE("gamma = 0 gives M = 0") {
    p.dissipation_rate = 0.0;
    CHECK(majorana_coefficients(p).m_mat.norm() == 0.0);
  }
}

TEST_CASE("shape blocks: identities and degenerate limits") {
  const ChainParams p = fig1_params(4);
  const MajoranaQuadraticForm form = majorana_coefficients(p);
  const ShapeBlocks blocks = shape_blocks(form);
  CHECK((blocks.l11 + blocks.l22.adjoint()).norm() < 1e-12);
  CHECK((blocks.l12 - 4.0 * form.m_mat).norm() < 1e-14);

  SUBCASE("H = 0: purely dissipative blocks") {
    MajoranaQuadraticForm no_h = form;
    no_h.h_mat.setZero();
    const ShapeBlocks b = shape_blocks(no_h);
    CHECK((b.l11 + no_h.m_mat + no_h.m_mat.transpose()).norm() < 1e-14);
    CHECK((b.l22 - no_h.m_mat - no_h.m_mat.transpose()).norm() < 1e-14);
  }
  SUBCASE("M = 0: closed system, purely imaginary L22 spectrum") {
    MajoranaQuadraticForm no_m = form;
    no_m.m_mat.setZero();
    Eigen::ComplexEigenSolver<Matrix> es(shape_blocks(no_m).l22, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      CHECK(std::abs(es.eigenvalues()(i).real()) < 1e-12);
  }
}

TEST_CASE("quadruple and conjugate-pair structure, random parameters") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ChainParams p = random_params(seed);
    const ShapeBlocks blocks = shape_blocks(majorana_coefficients(p));
    Eigen::ComplexEigenSolver<Matrix> es(blocks.assemble(), false);
    const auto& xi = es.eigenvalues();
    for (Eigen::Index i = 0; i < xi.size(); ++i) {
      double d_conj = 1e300, d_neg = 1e300, d_negconj = 1e300;
      for (Eigen::Index j = 0; j < xi.size(); ++j) {
        d_conj = std::min(d_conj, std::abs(xi(j) - std::conj(xi(i))));
        d_neg = std::min(d_neg, std::abs(xi(j) + xi(i)));
        d_negconj = std::min(d_negconj, std::abs(xi(j) + std::conj(xi(i))));
      }
      CHECK(d_conj < 1e-10);
      CHECK(d_neg < 1e-10);
      CHECK(d_negconj < 1e-10);
    }
    // L22 eigenvalues in conjugate pairs, validated inside rapidities()
    const RapiditySet rap = rapidities(blocks);
    CHECK(rap.pairing_residual < 1e-10);
    CHECK(rap.max_negative_real > -1e-10);
  }
}

TEST_CASE("reference-point rapidities match the precomputed values") {
  const RapiditySet rap =
      rapidities(shape_blocks(majorana_coefficients(fig1_params(4))));
  const std::vector<Complex> expected{
      {0.0, -0.5},
      {0.0, 0.5},
      {0.133974596215561, 0.0},
      {0.133974596215561, 0.0},
      {1.866025403784438, 0.0},
      {1.866025403784438, 0.0},
      {2.0, -0.5},
      {2.0, 0.5}};
  REQUIRE(rap.betas.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(std::abs(rap.betas[i] - expected[i]) < 1e-12);
}

TEST_CASE("closed-system rapidities are the quasienergies") {
  ChainParams p = fig1_params(8);
  p.dissipation_rate = 0.0;
  const RapiditySet rap =
      rapidities(shape_blocks(majorana_coefficients(p)));
  // lambda_v = -2 sum beta_i v_i, so each beta carries half a quasienergy
  for (Complex beta : rap.betas) {
    CHECK(std::abs(beta.real()) < 1e-12);
    double best = 1e300;
    for (double k : brillouin_grid(p.n_sites))
      best = std::min(best, std::abs(2.0 * std::abs(beta.imag()) -
                                     dispersion(p, k)));
    CHECK(best < 1e-10);
  }
}

TEST_CASE("spectrum assembly from occupation strings") {
  const RapiditySet rap =
      rapidities(shape_blocks(majorana_coefficients(fig1_params(4))));
  CHECK(std::abs(spectrum_from_rapidities(rap, std::vector<int>(8, 0))) ==
        0.0);
  // exciting only the zero-real-part rapidity gives a purely imaginary value
  std::vector<int> v(8, 0);
  v[1] = 1;  // beta = +i/2 in the sorted order
  const Complex lam = spectrum_from_rapidities(rap, v);
  CHECK(std::abs(lam.real()) < 1e-12);
  CHECK(std::abs(lam.imag() + 1.0) < 1e-12);
  CHECK_THROWS_AS(spectrum_from_rapidities(rap, std::vector<int>(7, 0)),
                  std::invalid_argument);
}

TEST_CASE("full enumeration is a subset of the exact spectrum") {
  const ChainParams p = fig1_params(4);
  const RapiditySet rap = rapidities(shape_blocks(majorana_coefficients(p)));
  const std::vector<Complex> assembled = enumerate_full(rap);
  CHECK(assembled.size() == 256);

  Eigen::ComplexEigenSolver<Matrix> es(build_superoperator(p).matrix, false);
  double hausdorff = 0.0;
  for (Complex lam : assembled) {
    double best = 1e300;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
      best = std::min(best, std::abs(lam - es.eigenvalues()(k)));
    hausdorff = std::max(hausdorff, best);
  }
  CHECK(hausdorff < 1e-8);
}

TEST_CASE("restricted enumeration strategies agree with the full set") {
  const RapiditySet rap =
      rapidities(shape_blocks(majorana_coefficients(fig1_params(4))));
  const auto m0 = enumerate_max_excitations(rap, 0);
  REQUIRE(m0.size() == 1);
  CHECK(std::abs(m0[0]) == 0.0);

  auto full = enumerate_full(rap);
  auto sort_key = [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  };
  std::sort(full.begin(), full.end(), sort_key);

  auto capped = enumerate_realpart_cap(rap, 1.0);
  std::vector<Complex> expected;
  for (Complex lam : full)
    if (std::abs(lam.real()) <= 1.0 + 1e-12) expected.push_back(lam);
  std::sort(capped.begin(), capped.end(), sort_key);
  REQUIRE(capped.size() == expected.size());
  for (std::size_t i = 0; i < capped.size(); ++i)
    CHECK(std::abs(capped[i] - expected[i]) < 1e-12);

  auto limited = enumerate_max_excitations(rap, 16);
  std::sort(limited.begin(), limited.end(), sort_key);
  REQUIRE(limited.size() == full.size());
  for (std::size_t i = 0; i < full.size(); ++i)
    CHECK(std::abs(limited[i] - full[i]) < 1e-12);
}

TEST_CASE("momentum-block dispersion matches the numerical k-blocks") {
  const ChainParams p = fig1_params(64);
  for (double k : brillouin_grid(p.n_sites)) {
    const auto [a, b] = rapidity_dispersion_pbc(p, k);
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(momentum_block_l22(p, k),
                                                   false);
    Complex x = es.eigenvalues()(0), y = es.eigenvalues()(1);
    if (x.real() > y.real() ||
        (x.real() == y.real() && x.imag() > y.imag()))
      std::swap(x, y);
    CHECK(std::abs(a - x) < 1e-10);
    CHECK(std::abs(b - y) < 1e-10);
  }
}

TEST_CASE("protected branch at the symmetry momentum") {
  const ChainParams p = fig1_params(8);
  const auto [a, b] =
      rapidity_dispersion_pbc(p, std::numbers::pi / 2.0);
  CHECK(std::min(std::abs(a.real()), std::abs(b.real())) < 1e-12);
}

TEST_CASE("k and -k branches are complex conjugates for real hopping") {
  const ChainParams p = fig1_params(16);
  for (double k : {0.3, 1.1, 2.7}) {
    const auto [ap, bp] = rapidity_dispersion_pbc(p, k);
    const auto [am, bm] = rapidity_dispersion_pbc(p, -k);
    CHECK(std::abs(ap - std::conj(am)) < 1e-12);
    CHECK(std::abs(bp - std::conj(bm)) < 1e-12);
  }
}

TEST_CASE("closed-system dispersion limit") {
  ChainParams p = fig1_params(16);
  p.dissipation_rate = 0.0;
  for (double k : brillouin_grid(p.n_sites)) {
    const auto [a, b] = rapidity_dispersion_pbc(p, k);
    CHECK(std::abs(a.real()) < 1e-12);
    CHECK(std::abs(b.real()) < 1e-12);
    CHECK(std::abs(2.0 * std::abs(a.imag()) - dispersion(p, k)) < 1e-10);
  }
}

TEST_CASE("k-space and real-space rapidities agree") {
  for (std::uint64_t seed : {31, 32}) {
    ChainParams p = random_params(seed);
    p.n_sites = 8;
    const RapiditySet real_space =
        rapidities(shape_blocks(majorana_coefficients(p)));
    std::vector<Complex> k_space = grid_rapidities(p);
    REQUIRE(k_space.size() == real_space.betas.size());
    // compare as multisets: the grid collects branches in momentum order
    double worst = 0.0;
    for (Complex b : real_space.betas) {
      double best = 1e300;
      for (Complex c : k_space) best = std::min(best, std::abs(b - c));
      worst = std::max(worst, best);
    }
    for (Complex c : k_space) {
      double best = 1e300;
      for (Complex b : real_space.betas)
        best = std::min(best, std::abs(b - c));
      worst = std::max(worst, best);
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("gap scaling against precomputed grid values") {
  const std::vector<int> n_list{8, 16, 32, 64, 128};
  const auto points = gap_scaling(fig1_params(4), n_list);
  const std::vector<double> expected{5.639616193966e-02, 1.511919095392e-02,
                                     3.836848033006e-03, 9.626807365323e-04,
                                     2.408854982549e-04};
  REQUIRE(points.size() == expected.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    CHECK(std::abs(points[i].gap - expected[i]) < 1e-10);

  ChainParams closed = fig1_params(4);
  closed.dissipation_rate = 0.0;
  for (const auto& [n, gap] : gap_scaling(closed, n_list)) CHECK(gap == 0.0);

  CHECK(gap_scaling(fig1_params(4), {16}).size() == 1);
  CHECK_THROWS_AS(fit_loglog_slope(gap_scaling(fig1_params(4), {16})),
                  std::invalid_argument);
}

TEST_CASE("eigenvalue classification thresholds") {
  CHECK(classify_eigenvalue({0.0, 0.0}) == "zero");
  CHECK(classify_eigenvalue({0.0, 1.0}) == "imaginary");
  CHECK(classify_eigenvalue({-0.5, 1.0}) == "decaying");
  CHECK(classify_eigenvalue({-0.5e-9, 1.0}) == "imaginary");
}
