#include "kitaev/model_core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace kitaev {

namespace {

const Complex kI{0.0, 1.0};

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

Eigen::Matrix2cd annihilator2() {
  // basis (|0>, |1>): c|1> = |0>
  Eigen::Matrix2cd m;
  m << 0, 1, 0, 0;
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Tensor product over sites with site 1 as the least significant bit.
Matrix site_string(const std::vector<Eigen::Matrix2cd>& site_ops) {
  Matrix m = site_ops.front();
  for (std::size_t s = 1; s < site_ops.size(); ++s)
    m = kron(site_ops[s], m);
  return m;
}

void check_cap(const ChainParams& params, int fock_cap) {
  params.validate();
  if (params.n_sites > fock_cap)
    throw ResourceError("Fock-space construction capped at N = " +
                        std::to_string(fock_cap));
}

FermionParity classify_parity(const Matrix& op, const Matrix& total_parity) {
  const double scale = op.norm();
  if (scale == 0.0) return FermionParity::Even;
  const double comm_res = commutator(op, total_parity).norm() / scale;
  const double acomm_res = anticommutator(op, total_parity).norm() / scale;
  if (comm_res < 1e-12) return FermionParity::Even;
  if (acomm_res < 1e-12) return FermionParity::Odd;
  return FermionParity::Mixed;
}

Matrix total_parity_matrix(int n) {
  std::vector<Eigen::Matrix2cd> ops(n, pauli_z());
  return site_string(ops);
}

}  // namespace

std::vector<DenseOperator> build_fermion_operators(const ChainParams& params,
                                                   int fock_cap) {
  check_cap(params, fock_cap);
  const int n = params.n_sites;
  std::vector<DenseOperator> out;
  out.reserve(n);
  for (int j = 1; j <= n; ++j) {
    std::vector<Eigen::Matrix2cd> ops(n, Eigen::Matrix2cd::Identity());
    for (int q = 0; q < j - 1; ++q) ops[q] = pauli_z();
    ops[j - 1] = annihilator2();
    out.push_back({"c_" + std::to_string(j), FermionParity::Odd,
                   site_string(ops)});
  }
  return out;
}

std::vector<DenseOperator> build_majorana_operators(const ChainParams& params,
                                                    int fock_cap) {
  auto cs = build_fermion_operators(params, fock_cap);
  std::vector<DenseOperator> out;
  out.reserve(2 * cs.size());
  for (std::size_t j = 0; j < cs.size(); ++j) {
    const Matrix& c = cs[j].data;
    out.push_back({"gamma_" + std::to_string(2 * j + 1), FermionParity::Odd,
                   c + c.adjoint()});
    out.push_back({"gamma_" + std::to_string(2 * j + 2), FermionParity::Odd,
                   kI * (c - c.adjoint())});
  }
  return out;
}

DenseOperator build_hamiltonian(const ChainParams& params, int fock_cap) {
  check_cap(params, fock_cap);
  const int n = params.n_sites;
  const auto cs = build_fermion_operators(params, fock_cap);
  const Eigen::Index dim = cs.front().dim();
  Matrix h = Matrix::Zero(dim, dim);
  const Complex w = params.hopping;
  const Complex D = params.pairing;
  for (int i = 0; i < n; ++i) {
    const Matrix& ci = cs[i].data;
    const Matrix& cip = cs[(i + 1) % n].data;
    h += 0.5 * (w * ci.adjoint() * cip + std::conj(w) * cip.adjoint() * ci);
    h += 0.5 * (D * ci * cip + std::conj(D) * cip.adjoint() * ci.adjoint());
    h += params.chemical_potential *
         (ci.adjoint() * ci - 0.5 * Matrix::Identity(dim, dim));
  }
  if (!params.interactions.empty()) {
    const auto gammas = build_majorana_operators(params, fock_cap);
    for (const auto& term : params.interactions) {
      Matrix prod = Matrix::Identity(dim, dim);
      for (int site : term.sites) prod = prod * gammas[2 * (site - 1)].data;
      Matrix t = term.coefficient * prod;
      // keep H Hermitian even for complex coefficients
      h += 0.5 * (t + t.adjoint());
    }
  }
  if ((h - h.adjoint()).norm() > 1e-10 * std::max(1.0, h.norm()))
    throw InternalConsistencyError("Hamiltonian came out non-Hermitian");
  DenseOperator out{"H", FermionParity::Even, std::move(h)};
  return out;
}

DenseOperator build_parity(const ChainParams& params, int site_j, int site_k,
                           int fock_cap) {
  check_cap(params, fock_cap);
  const int n = params.n_sites;
  std::vector<Eigen::Matrix2cd> ops(n, Eigen::Matrix2cd::Identity());
  for (int q = site_j; q <= site_k; ++q) ops[q - 1] = pauli_z();
  return {"P_{" + std::to_string(site_j) + "," + std::to_string(site_k) + "}",
          FermionParity::Even, site_string(ops)};
}

DenseOperator build_modulated_a0(const ChainParams& params, int fock_cap) {
  check_cap(params, fock_cap);
  if (params.n_sites % 4 != 0)
    throw std::invalid_argument("A_0 requires mod(N,4) = 0");
  const auto cs = build_fermion_operators(params, fock_cap);
  const Eigen::Index dim = cs.front().dim();
  Matrix a = Matrix::Zero(dim, dim);
  for (int x = 1; x <= params.n_sites; ++x)
    a += std::exp(kI * (M_PI / 2.0) * static_cast<double>(x)) *
         (cs[x - 1].data + cs[x - 1].data.adjoint());
  return {"A_0", FermionParity::Odd, std::move(a)};
}

NonlocalSymmetry build_nonlocal_a(const ChainParams& params, int fock_cap) {
  check_cap(params, fock_cap);
  if (params.n_sites % 4 != 0)
    throw std::invalid_argument("A requires mod(N,4) = 0");
  const int n = params.n_sites;
  const auto cs = build_fermion_operators(params, fock_cap);
  const Eigen::Index dim = cs.front().dim();
  Matrix a = Matrix::Zero(dim, dim);
  for (int x = 1; x <= n; ++x) {
    Matrix left = (x > 1) ? build_parity(params, 1, x - 1, fock_cap).data
                          : Matrix::Identity(dim, dim);
    Matrix right = build_parity(params, x, n, fock_cap).data;
    Matrix b = left * cs[x - 1].data * right;
    a += std::exp(kI * (M_PI / 2.0) * static_cast<double>(x)) *
         (b + b.adjoint());
  }
  // {A, A^+} is a positive multiple of the identity; divide it out.
  Matrix ac = anticommutator(a, a.adjoint());
  const double scalar = ac.trace().real() / static_cast<double>(dim);
  if (scalar <= 0.0 ||
      (ac - scalar * Matrix::Identity(dim, dim)).norm() > 1e-10 * scalar)
    throw InternalConsistencyError("{A, A^+} is not proportional to identity");
  const double scale = std::sqrt(scalar);
  a /= scale;
  return {{"A", FermionParity::Odd, std::move(a)}, scale};
}

DenseOperator build_semilocal_spin_a(const ChainParams& params, int fock_cap) {
  check_cap(params, fock_cap);
  if (params.n_sites % 4 != 0)
    throw std::invalid_argument("A-tilde requires mod(N,4) = 0");
  const int n = params.n_sites;
  Eigen::Matrix2cd sx;
  sx << 0, 1, 1, 0;
  Matrix a;
  for (int j = 1; j <= n; ++j) {
    std::vector<Eigen::Matrix2cd> ops(n, Eigen::Matrix2cd::Identity());
    ops[j - 1] = sx;
    for (int q = j + 1; q <= n; ++q) ops[q - 1] = pauli_z();
    Matrix term = std::exp(kI * (M_PI / 2.0) * static_cast<double>(j)) *
                  site_string(ops);
    a = (j == 1) ? term : Matrix(a + term);
  }
  return {"A_tilde", FermionParity::Odd, std::move(a)};
}

ChargeAndSymmetry build_charge_q(const ChainParams& params, int fock_cap) {
  auto a = build_nonlocal_a(params, fock_cap);
  Matrix q = a.op.data.adjoint() * a.op.data;
  q = 0.5 * (q + Matrix(q.adjoint()));  // clean numerical asymmetry
  Eigen::SelfAdjointEigenSolver<Matrix> es(q);
  Matrix s = es.eigenvectors() *
             (kI * M_PI * es.eigenvalues().array().cast<Complex>())
                 .exp()
                 .matrix()
                 .asDiagonal() *
             es.eigenvectors().adjoint();
  return {{"Q", FermionParity::Even, std::move(q)},
          {"S", FermionParity::Even, std::move(s)}};
}

std::vector<DenseOperator> build_jump_operators(const ChainParams& params,
                                                int fock_cap) {
  check_cap(params, fock_cap);
  const auto cs = build_fermion_operators(params, fock_cap);
  const double root_g = std::sqrt(params.dissipation_rate);
  std::vector<DenseOperator> out;
  out.reserve(cs.size());
  for (std::size_t j = 0; j < cs.size(); ++j) {
    Matrix l = root_g * (cs[j].data +
                         params.jump_asymmetry * cs[j].data.adjoint());
    out.push_back({"L_" + std::to_string(j + 1), FermionParity::Odd,
                   std::move(l)});
  }
  return out;
}

EigenoperatorFit verify_eigenoperator(const DenseOperator& hamiltonian,
                                      const DenseOperator& candidate) {
  const Matrix& a = candidate.data;
  const double norm_a = hs_norm(a);
  if (norm_a == 0.0)
    throw std::invalid_argument("degenerate operator: ||A|| = 0");
  Matrix c = commutator(hamiltonian.data, a);
  const Complex omega = hs_inner(a, c) / hs_inner(a, a);
  const double residual = hs_norm(c - omega * a) / norm_a;
  return {omega, residual};
}

}  // namespace kitaev
