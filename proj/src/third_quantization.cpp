#include "kitaev/third_quantization.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace kitaev {

namespace {

const Complex kI{0.0, 1.0};

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

Matrix ShapeBlocks::assemble() const {
  const Eigen::Index m = size();
  Matrix full = Matrix::Zero(2 * m, 2 * m);
  full.topLeftCorner(m, m) = l11;
  full.topRightCorner(m, m) = l12;
  full.bottomRightCorner(m, m) = l22;
  return full;
}

ShapeBlocks shape_blocks(const MajoranaQuadraticForm& form) {
  const Matrix& h = form.h_mat;
  const Matrix& m = form.m_mat;
  ShapeBlocks blocks;
  blocks.l11 = -2.0 * kI * h - m - m.transpose();
  blocks.l12 = 4.0 * m;
  blocks.l22 = 2.0 * kI * h.transpose() + m.transpose() + m;
  const double scale = std::max(1.0, blocks.l22.norm());
  if ((blocks.l11 + blocks.l22.adjoint()).norm() > 1e-12 * scale)
    throw InternalConsistencyError("shape blocks violate L11 = -L22^+");
  return blocks;
}

RapiditySet rapidities(const ShapeBlocks& blocks) {
  Eigen::ComplexEigenSolver<Matrix> es(blocks.l22, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("rapidities: eigensolver failed on L22");
  RapiditySet rap;
  rap.betas.assign(es.eigenvalues().data(),
                   es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(rap.betas.begin(), rap.betas.end(), lex_less);

  for (Complex b : rap.betas)
    rap.max_negative_real = std::min(rap.max_negative_real, b.real());
  if (rap.max_negative_real < -1e-10)
    throw std::runtime_error("rapidities: eigenvalue with Re < -1e-10 found");

  // Validate closure under complex conjugation by greedy matching.
  std::vector<bool> used(rap.betas.size(), false);
  for (std::size_t i = 0; i < rap.betas.size(); ++i) {
    double best = 1e300;
    std::size_t best_j = i;
    for (std::size_t j = 0; j < rap.betas.size(); ++j) {
      if (used[j] && j != i) continue;
      const double d = std::abs(rap.betas[j] - std::conj(rap.betas[i]));
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    used[best_j] = true;
    rap.pairing_residual = std::max(rap.pairing_residual, best);
  }
  if (rap.pairing_residual > 1e-8)
    throw std::runtime_error(
        "rapidities: spectrum not closed under conjugation, residual " +
        std::to_string(rap.pairing_residual));
  return rap;
}

Complex spectrum_from_rapidities(const RapiditySet& rap,
                                 const std::vector<int>& v) {
  if (v.size() != rap.betas.size())
    throw std::invalid_argument("occupation string length != 2N");
  Complex lambda = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) lambda -= 2.0 * rap.betas[i];
  return lambda;
}

namespace {

std::vector<Complex> strip_labels(
    const std::vector<AssembledEigenvalue>& labeled) {
  std::vector<Complex> out;
  out.reserve(labeled.size());
  for (const AssembledEigenvalue& e : labeled) out.push_back(e.lambda);
  return out;
}

}  // namespace

std::vector<AssembledEigenvalue> enumerate_full_labeled(
    const RapiditySet& rap) {
  const std::size_t m = rap.betas.size();
  if (m > 24) throw ResourceError("full enumeration requires 2N <= 24");
  std::vector<AssembledEigenvalue> out;
  out.reserve(std::size_t{1} << m);
  out.push_back({0.0, 0});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t sz = out.size();
    const Complex term = -2.0 * rap.betas[i];
    for (std::size_t s = 0; s < sz; ++s)
      out.push_back({out[s].lambda + term, out[s].n_excitations + 1});
  }
  return out;
}

std::vector<Complex> enumerate_full(const RapiditySet& rap) {
  return strip_labels(enumerate_full_labeled(rap));
}

std::vector<AssembledEigenvalue> enumerate_max_excitations_labeled(
    const RapiditySet& rap, int m) {
  // partial sums by excitation count, breadth-first over rapidity index
  std::vector<AssembledEigenvalue> frontier{{Complex{0.0}, 0}};
  std::vector<AssembledEigenvalue> out{{Complex{0.0}, 0}};
  for (std::size_t i = 0; i < rap.betas.size(); ++i) {
    const std::size_t sz = frontier.size();
    const Complex term = -2.0 * rap.betas[i];
    for (std::size_t s = 0; s < sz; ++s) {
      if (frontier[s].n_excitations >= m) continue;
      frontier.push_back(
          {frontier[s].lambda + term, frontier[s].n_excitations + 1});
      out.push_back(frontier.back());
    }
  }
  return out;
}

std::vector<Complex> enumerate_max_excitations(const RapiditySet& rap,
                                               int m) {
  return strip_labels(enumerate_max_excitations_labeled(rap, m));
}

namespace {

void cap_recurse(const std::vector<Complex>& betas, std::size_t idx,
                 Complex acc, int depth, double cap,
                 std::vector<AssembledEigenvalue>& out) {
  out.push_back({acc, depth});
  for (std::size_t i = idx; i < betas.size(); ++i) {
    const Complex next = acc - 2.0 * betas[i];
    // betas sorted by ascending Re and all Re >= 0: once the real part
    // exceeds the cap, every deeper branch does too.
    if (-next.real() > cap) break;
    cap_recurse(betas, i + 1, next, depth + 1, cap, out);
  }
}

}  // namespace

std::vector<AssembledEigenvalue> enumerate_realpart_cap_labeled(
    const RapiditySet& rap, double cap) {
  std::vector<Complex> betas = rap.betas;  // already (Re, Im)-sorted
  for (Complex& b : betas)
    b = Complex{std::max(b.real(), 0.0), b.imag()};
  std::vector<AssembledEigenvalue> out;
  cap_recurse(betas, 0, 0.0, 0, cap, out);
  return out;
}

std::vector<Complex> enumerate_realpart_cap(const RapiditySet& rap,
                                            double cap) {
  return strip_labels(enumerate_realpart_cap_labeled(rap, cap));
}

Eigen::Matrix2cd momentum_block_l22(const ChainParams& params, double k) {
  const CirculantBlocks h = hamiltonian_blocks(params);
  const CirculantBlocks m = dissipation_blocks(params);
  return 2.0 * kI * h.symbol(-k).transpose() + m.symbol(-k).transpose() +
         m.symbol(k);
}

std::pair<Complex, Complex> rapidity_dispersion_pbc(const ChainParams& params,
                                                    double k) {
  const Eigen::Matrix2cd block = momentum_block_l22(params, k);
  const Complex half_tr = 0.5 * block.trace();
  const Complex det = block.determinant();
  const Complex root = std::sqrt(half_tr * half_tr - det);
  Complex a = half_tr + root;
  Complex b = half_tr - root;
  if (!lex_less(a, b)) std::swap(a, b);
  return {a, b};
}

std::vector<Complex> grid_rapidities(const ChainParams& params) {
  params.validate();
  std::vector<Complex> out;
  out.reserve(2 * params.n_sites);
  for (int m = 0; m < params.n_sites; ++m) {
    const double k = 2.0 * std::numbers::pi * m / params.n_sites;
    const auto [a, b] = rapidity_dispersion_pbc(params, k);
    out.push_back(a);
    out.push_back(b);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

double dissipative_gap(const ChainParams& params) {
  double gap = 0.0;
  bool found = false;
  for (Complex b : grid_rapidities(params)) {
    if (std::abs(b.imag()) < 1e-9) continue;  // non-oscillating mode
    if (b.real() < 1e-10) continue;           // exactly protected mode
    if (!found || b.real() < gap) {
      gap = b.real();
      found = true;
    }
  }
  return found ? gap : 0.0;
}

std::vector<GapPoint> gap_scaling(const ChainParams& params_template,
                                  const std::vector<int>& n_list) {
  std::vector<GapPoint> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    ChainParams p = params_template;
    p.n_sites = n;
    out.push_back({n, dissipative_gap(p)});
  }
  return out;
}

double fit_loglog_slope(const std::vector<GapPoint>& points) {
  if (points.size() < 2)
    throw std::invalid_argument("log-log fit needs at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    const double x = std::log(static_cast<double>(p.n_sites));
    const double y = std::log(p.gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string classify_eigenvalue(Complex lambda, double tol) {
  if (std::abs(lambda) < tol) return "zero";
  if (std::abs(lambda.real()) < tol) return "imaginary";
  return "decaying";
}

}  // namespace kitaev
