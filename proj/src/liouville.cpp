#include "kitaev/liouville.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace kitaev {

namespace {

const Complex kI{0.0, 1.0};

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct Eigensystem {
  Vector lambda;
  Matrix right;      // columns are right eigenvectors
  Matrix right_inv;  // rows generate the biorthonormal left family
};

Eigensystem decompose(const Matrix& sup) {
  Eigen::ComplexEigenSolver<Matrix> es(sup);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("liouville: eigensolver failed");
  Eigensystem sys;
  sys.lambda = es.eigenvalues();
  sys.right = es.eigenvectors();
  Eigen::FullPivLU<Matrix> lu(sys.right);
  if (!lu.isInvertible())
    throw std::runtime_error(
        "liouville: defective (non-diagonalizable) superoperator; "
        "eigenbasis condition too poor to invert");
  sys.right_inv = lu.inverse();
  return sys;
}

}  // namespace

Superoperator build_superoperator(const ChainParams& params, int cap) {
  params.validate();
  if (params.n_sites > cap)
    throw ResourceError("superoperator construction capped at N = " +
                        std::to_string(cap));
  const Matrix h = build_hamiltonian(params, cap).data;
  const Eigen::Index d = h.rows();
  const Matrix id = Matrix::Identity(d, d);
  Matrix sup = -kI * (kron(h, id) - kron(id, h.transpose()));
  for (const auto& jump : build_jump_operators(params, cap)) {
    const Matrix& l = jump.data;
    const Matrix ldl = l.adjoint() * l;
    sup += 2.0 * kron(l, l.conjugate()) - kron(ldl, id) -
           kron(id, ldl.transpose());
  }
  return {params.n_sites, std::move(sup)};
}

Vector vectorize(const Matrix& rho) {
  Vector v(rho.size());
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j)
      v(i * rho.cols() + j) = rho(i, j);
  return v;
}

Matrix unvectorize(const Vector& v) {
  const auto d = static_cast<Eigen::Index>(
      std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size())
    throw std::invalid_argument("unvectorize: length is not a square");
  Matrix rho(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) rho(i, j) = v(i * d + j);
  return rho;
}

std::vector<SpectralTriple> full_spectrum(const Superoperator& sup) {
  const Eigensystem sys = decompose(sup.matrix);
  const Eigen::Index m = sys.lambda.size();
  std::vector<Eigen::Index> order(m);
  for (Eigen::Index i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (sys.lambda(a).real() != sys.lambda(b).real())
      return sys.lambda(a).real() < sys.lambda(b).real();
    return sys.lambda(a).imag() < sys.lambda(b).imag();
  });
  std::vector<SpectralTriple> out;
  out.reserve(m);
  for (Eigen::Index k : order) {
    SpectralTriple triple;
    triple.lambda = sys.lambda(k);
    triple.rho_right = unvectorize(sys.right.col(k));
    triple.sigma_left = unvectorize(sys.right_inv.row(k).adjoint());
    out.push_back(std::move(triple));
  }
  return out;
}

std::vector<Matrix> propagate_density_matrix(const ChainParams& params,
                                             const Matrix& rho0,
                                             const std::vector<double>& t_grid,
                                             bool allow_unphysical) {
  if (!allow_unphysical) {
    if ((rho0 - rho0.adjoint()).norm() > 1e-10)
      throw std::invalid_argument("propagate: rho0 not Hermitian");
    if (std::abs(rho0.trace() - Complex{1.0}) > 1e-10)
      throw std::invalid_argument("propagate: tr(rho0) != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho0, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw std::invalid_argument("propagate: rho0 not positive semidefinite");
  }
  const Superoperator sup = build_superoperator(params);
  const Eigensystem sys = decompose(sup.matrix);
  const Vector coeffs = sys.right_inv * vectorize(rho0);
  std::vector<Matrix> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    Vector v = Vector::Zero(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
      v += coeffs(k) * std::exp(sys.lambda(k) * t) * sys.right.col(k);
    out.push_back(unvectorize(v));
  }
  return out;
}

Complex observable_trajectory(const std::vector<SpectralTriple>& spectrum,
                              const Matrix& obs, const Matrix& rho0,
                              double t) {
  Complex value = 0.0;
  for (const auto& triple : spectrum)
    value += std::exp(triple.lambda * t) *
             (obs.adjoint() * triple.rho_right).trace() *
             (triple.sigma_left.adjoint() * rho0).trace();
  return value;
}

}  // namespace kitaev
