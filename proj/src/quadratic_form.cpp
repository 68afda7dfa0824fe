#include "kitaev/quadratic_form.hpp"

#include <cmath>
#include <iostream>

namespace kitaev {

namespace {

const Complex kI{0.0, 1.0};

// Accumulates coef * c_a^{(x)} c_b^{(y)} into the Majorana coefficient
// matrix T (x, y = +1 for an annihilator, -1 for a creator), using
// c^{(x)} = (gamma_odd - i x gamma_even) / 2. Indices a, b are 0-based
// sites; the constant part of the normal ordering drops out of T.
void add_bilinear(Matrix& t, Complex coef, int a, int x, int b, int y) {
  const int oa = 2 * a, ea = 2 * a + 1;
  const int ob = 2 * b, eb = 2 * b + 1;
  t(oa, ob) += coef * 0.25;
  t(oa, eb) += coef * (-0.25 * kI * static_cast<double>(y));
  t(ea, ob) += coef * (-0.25 * kI * static_cast<double>(x));
  t(ea, eb) += coef * (-0.25 * static_cast<double>(x * y));
}

Matrix bilinear_matrix(const ChainParams& params) {
  const int n = params.n_sites;
  Matrix t = Matrix::Zero(2 * n, 2 * n);
  const Complex w = params.hopping;
  const Complex d = params.pairing;
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1) % n;
    add_bilinear(t, 0.5 * w, i, -1, ip, +1);
    add_bilinear(t, 0.5 * std::conj(w), ip, -1, i, +1);
    add_bilinear(t, 0.5 * d, i, +1, ip, +1);
    add_bilinear(t, 0.5 * std::conj(d), ip, -1, i, -1);
    add_bilinear(t, params.chemical_potential, i, -1, i, +1);
  }
  return t;
}

}  // namespace

MajoranaQuadraticForm majorana_coefficients(const ChainParams& params,
                                            bool warn_interactions) {
  params.validate();
  if (!params.interactions.empty() && warn_interactions)
    std::cerr << "majorana_coefficients: interaction terms ignored "
                 "(quadratic model only)\n";
  const int n = params.n_sites;
  const Matrix t = bilinear_matrix(params);
  MajoranaQuadraticForm form;
  form.h_mat = 0.5 * (t - t.transpose());

  form.m_mat = Matrix::Zero(2 * n, 2 * n);
  const double root_g = std::sqrt(params.dissipation_rate);
  const Complex delta = params.jump_asymmetry;
  for (int j = 0; j < n; ++j) {
    // L_j = sqrt(g)(c_j + delta c_j^+) expanded over gamma_{2j-1,2j}
    Vector l = Vector::Zero(2 * n);
    l(2 * j) = root_g * 0.5 * (1.0 + delta);
    l(2 * j + 1) = root_g * 0.5 * kI * (delta - 1.0);
    form.m_mat += l * l.adjoint();
  }

  if ((form.h_mat + form.h_mat.transpose()).norm() > 1e-12)
    throw InternalConsistencyError("Majorana H matrix not antisymmetric");
  if ((form.m_mat - form.m_mat.adjoint()).norm() > 1e-12)
    throw InternalConsistencyError("Majorana M matrix not Hermitian");
  return form;
}

Eigen::Matrix2cd CirculantBlocks::symbol(double k) const {
  return b0 + std::exp(kI * k) * b_plus + std::exp(-kI * k) * b_minus;
}

CirculantBlocks hamiltonian_blocks(const ChainParams& params) {
  // Extract the three nearest-neighbour blocks from a small reference
  // ring; the couplings are translation invariant and only reach d = +-1.
  ChainParams ref = params;
  ref.n_sites = 4;
  ref.interactions.clear();
  const Matrix h = majorana_coefficients(ref, false).h_mat;
  CirculantBlocks blocks;
  blocks.b0 = h.block<2, 2>(0, 0);
  blocks.b_plus = h.block<2, 2>(0, 2);
  blocks.b_minus = h.block<2, 2>(2, 0);
  return blocks;
}

CirculantBlocks dissipation_blocks(const ChainParams& params) {
  ChainParams ref = params;
  ref.n_sites = 4;
  ref.interactions.clear();
  const Matrix m = majorana_coefficients(ref, false).m_mat;
  CirculantBlocks blocks;
  blocks.b0 = m.block<2, 2>(0, 0);
  blocks.b_plus = m.block<2, 2>(0, 2);
  blocks.b_minus = m.block<2, 2>(2, 0);
  return blocks;
}

}  // namespace kitaev
