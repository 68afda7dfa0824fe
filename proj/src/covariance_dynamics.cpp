#include "kitaev/covariance_dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

namespace kitaev {

namespace {

const Complex kI{0.0, 1.0};

double rel_scale(const Matrix& m) { return std::max(1.0, m.norm()); }

}  // namespace

void CovarianceState::validate_structure() const {
  if (f.rows() != f.cols() || g.rows() != g.cols() || f.rows() != g.rows())
    throw std::invalid_argument("covariance blocks must be square, equal size");
  if ((f + f.transpose()).norm() > 1e-10 * rel_scale(f))
    throw std::invalid_argument("F block is not antisymmetric");
  if ((g - g.adjoint()).norm() > 1e-10 * rel_scale(g))
    throw std::invalid_argument("G block is not Hermitian");
}

Matrix sigma_from_state(const CovarianceState& state) {
  const int n = state.n_sites();
  Matrix sigma(2 * n, 2 * n);
  for (int m = 0; m < n; ++m) {
    for (int q = 0; q < n; ++q) {
      const double delta = (m == q) ? 1.0 : 0.0;
      const Complex cc = state.f(m, q);
      const Complex cdcd = std::conj(state.f(q, m));
      const Complex cdc = state.g(m, q);
      const Complex ccd = delta - state.g(q, m);
      sigma(2 * m, 2 * q) = cc + ccd + cdc + cdcd - delta;
      sigma(2 * m, 2 * q + 1) = kI * (cc - ccd + cdc - cdcd);
      sigma(2 * m + 1, 2 * q) = kI * (cc + ccd - cdc - cdcd);
      sigma(2 * m + 1, 2 * q + 1) = -(cc - ccd - cdc + cdcd) - delta;
    }
  }
  return sigma;
}

CovarianceState state_from_sigma(const Matrix& sigma, double t) {
  const int n = static_cast<int>(sigma.rows()) / 2;
  CovarianceState state;
  state.t = t;
  state.f = Matrix(n, n);
  state.g = Matrix(n, n);
  const Matrix two_point = sigma + Matrix::Identity(2 * n, 2 * n);
  for (int m = 0; m < n; ++m) {
    for (int q = 0; q < n; ++q) {
      const Complex oo = two_point(2 * m, 2 * q);
      const Complex oe = two_point(2 * m, 2 * q + 1);
      const Complex eo = two_point(2 * m + 1, 2 * q);
      const Complex ee = two_point(2 * m + 1, 2 * q + 1);
      state.f(m, q) = 0.25 * (oo - kI * oe - kI * eo - ee);
      state.g(m, q) = 0.25 * (oo - kI * oe + kI * eo + ee);
    }
  }
  // physicality: Sigma Hermitian with spectrum inside [-1, 1]
  state.physical = (sigma - sigma.adjoint()).norm() < 1e-8 * rel_scale(sigma);
  if (state.physical) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma,
                                             Eigen::EigenvaluesOnly);
    state.physical = es.eigenvalues().minCoeff() > -1.0 - 1e-8 &&
                     es.eigenvalues().maxCoeff() < 1.0 + 1e-8;
  }
  return state;
}

FlowGenerator derive_generator(const ChainParams& params) {
  const MajoranaQuadraticForm form = majorana_coefficients(params);
  FlowGenerator gen;
  gen.x = -4.0 * kI * form.h_mat - 2.0 * (form.m_mat + form.m_mat.transpose());
  gen.y = 4.0 * (form.m_mat.transpose() - form.m_mat);
  return gen;
}

Complex c1c2_from_sigma(const Matrix& s) {
  return 0.25 * (s(0, 2) - kI * s(0, 3) - kI * s(1, 2) - s(1, 3));
}

Complex c1dag_c2_from_sigma(const Matrix& s) {
  return 0.25 * (s(0, 2) - kI * s(0, 3) + kI * s(1, 2) + s(1, 3));
}

namespace {

Matrix flow_rhs(const FlowGenerator& gen, const Matrix& sigma) {
  return gen.x * sigma + sigma * gen.x.transpose() + gen.y;
}

// Dormand-Prince 5(4) embedded pair.
struct Dp54Step {
  Matrix y5;      // fifth-order solution
  double error;   // scaled error estimate
};

Dp54Step dp54_step(const FlowGenerator& gen, const Matrix& y, double h,
                   double atol, double rtol) {
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const Matrix k1 = flow_rhs(gen, y);
  const Matrix k2 = flow_rhs(gen, y + h * (a21 * k1));
  const Matrix k3 = flow_rhs(gen, y + h * (a31 * k1 + a32 * k2));
  const Matrix k4 = flow_rhs(gen, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const Matrix k5 =
      flow_rhs(gen, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const Matrix k6 = flow_rhs(
      gen, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  Matrix y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const Matrix k7 = flow_rhs(gen, y5);
  const Matrix err_mat =
      h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

  double err = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double scale =
        atol + rtol * std::max(std::abs(y(i)), std::abs(y5(i)));
    err = std::max(err, std::abs(err_mat(i)) / scale);
  }
  return {std::move(y5), err};
}

// Advances sigma from t to t_target with adaptive step control.
void advance_adaptive(const FlowGenerator& gen, Matrix& sigma, double& t,
                      double t_target, double& h, double atol, double rtol) {
  while (t < t_target - 1e-14) {
    h = std::min(h, t_target - t);
    if (h < 1e-14)
      throw std::runtime_error("integrate: step size underflow (stiffness?)");
    const Dp54Step step = dp54_step(gen, sigma, h, atol, rtol);
    if (step.error <= 1.0) {
      t += h;
      sigma = step.y5;
    }
    const double factor =
        0.9 * std::pow(1.0 / std::max(step.error, 1e-10), 0.2);
    h *= std::clamp(factor, 0.2, 5.0);
  }
  t = t_target;
}

struct SpectralPropagator {
  Matrix v, v_inv;
  Vector lambda;
  Matrix w_hom;   // homogeneous part in the eigenbasis
  Matrix w_part;  // particular (stationary) part in the eigenbasis

  Matrix at(double t) const {
    const Eigen::Index m = lambda.size();
    Matrix w(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        w(i, j) = w_part(i, j) +
                  w_hom(i, j) * std::exp((lambda(i) + lambda(j)) * t);
    return v * w * v.transpose();
  }
};

SpectralPropagator make_spectral(const FlowGenerator& gen,
                                 const Matrix& sigma0) {
  Eigen::ComplexEigenSolver<Matrix> es(gen.x);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("integrate: eigensolver failed on the generator");
  SpectralPropagator prop;
  prop.v = es.eigenvectors();
  prop.lambda = es.eigenvalues();
  prop.v_inv = prop.v.inverse();
  const Matrix y_tilde = prop.v_inv * gen.y * prop.v_inv.transpose();
  const Matrix w0 = prop.v_inv * sigma0 * prop.v_inv.transpose();
  const Eigen::Index m = prop.lambda.size();
  prop.w_part = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const Complex rate = prop.lambda(i) + prop.lambda(j);
      if (std::abs(rate) > 1e-10) prop.w_part(i, j) = -y_tilde(i, j) / rate;
    }
  prop.w_hom = w0 - prop.w_part;
  return prop;
}

}  // namespace

Trajectory integrate(const CovarianceState& state0, const ChainParams& params,
                     double t_max, double dt_out, EvolveMethod method) {
  if (t_max <= 0 || dt_out <= 0 || dt_out > t_max)
    throw std::invalid_argument("integrate: need 0 < dt_out <= t_max");
  state0.validate_structure();
  const FlowGenerator gen = derive_generator(params);
  const int n_out = static_cast<int>(std::round(t_max / dt_out));

  Trajectory traj;
  traj.times.reserve(n_out + 1);
  traj.c1c2.reserve(n_out + 1);
  traj.c1dag_c2.reserve(n_out + 1);

  Matrix sigma = sigma_from_state(state0);
  auto record = [&](double t, const Matrix& s) {
    traj.times.push_back(t);
    traj.c1c2.push_back(c1c2_from_sigma(s));
    traj.c1dag_c2.push_back(c1dag_c2_from_sigma(s));
  };

  if (method == EvolveMethod::Adaptive) {
    const double atol = 1e-10, rtol = 1e-9;
    double t = 0.0, h = 1e-3;
    record(0.0, sigma);
    for (int i = 1; i <= n_out; ++i) {
      advance_adaptive(gen, sigma, t, i * dt_out, h, atol, rtol);
      record(t, sigma);
    }
    traj.final_state = state_from_sigma(sigma, t_max);
  } else {
    const SpectralPropagator prop = make_spectral(gen, sigma);
    for (int i = 0; i <= n_out; ++i) {
      sigma = prop.at(i * dt_out);
      record(i * dt_out, sigma);
    }
    traj.final_state = state_from_sigma(sigma, t_max);
  }
  return traj;
}

CovarianceState make_uniform_pair_state(int n_sites) {
  CovarianceState state;
  state.f = Matrix::Zero(n_sites, n_sites);
  state.g = Matrix::Identity(n_sites, n_sites);
  const Complex pair{1.0, 1.0};
  for (int m = 0; m < n_sites; ++m)
    for (int q = m + 1; q < n_sites; ++q) {
      state.f(m, q) = pair;
      state.f(q, m) = -pair;
    }
  // round-trip through the Majorana covariance to evaluate physicality
  return state_from_sigma(sigma_from_state(state));
}

CovarianceState make_random_state(int n_sites, std::uint64_t seed) {
  // Deterministic Box-Muller on top of mt19937_64 so trajectories are
  // reproducible across standard libraries.
  std::mt19937_64 rng(seed);
  auto gauss = [&rng]() {
    const double u1 =
        (static_cast<double>(rng()) + 0.5) / 18446744073709551616.0;
    const double u2 =
        (static_cast<double>(rng()) + 0.5) / 18446744073709551616.0;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  };
  Eigen::MatrixXd k(2 * n_sites, 2 * n_sites);
  for (int i = 0; i < 2 * n_sites; ++i)
    for (int j = 0; j < 2 * n_sites; ++j) k(i, j) = gauss();
  Eigen::MatrixXd anti = 0.5 * (k - k.transpose());
  // Sigma = i K is Hermitian and antisymmetric; rescale the spectrum
  // into (-1, 1) so the state is physical.
  Eigen::SelfAdjointEigenSolver<Matrix> es(kI * anti.cast<Complex>(),
                                           Eigen::EigenvaluesOnly);
  const double radius = std::max(std::abs(es.eigenvalues().minCoeff()),
                                 std::abs(es.eigenvalues().maxCoeff()));
  if (radius > 0.0) anti *= 0.9 / radius;
  return state_from_sigma(kI * anti.cast<Complex>());
}

void save_state(std::ostream& out, const CovarianceState& state) {
  out << "covariance 1 " << state.n_sites() << ' ' << state.physical << ' '
      << std::hexfloat << state.t << '\n';
  auto dump = [&out](const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out << m(i, j).real() << ' ' << m(i, j).imag()
            << (j + 1 == m.cols() ? "" : " ");
      out << '\n';
    }
  };
  dump(state.f);
  dump(state.g);
  out << std::defaultfloat;
}

CovarianceState load_state(std::istream& in) {
  std::string tag;
  int version = 0, n = 0;
  CovarianceState state;
  // hexfloat tokens are not parsed by operator>>; go through strtod
  auto read_double = [&in]() {
    std::string token;
    in >> token;
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (!in || end == token.c_str() || *end != '\0')
      in.setstate(std::ios::failbit);
    return value;
  };
  in >> tag >> version >> n >> state.physical;
  state.t = read_double();
  if (!in || tag != "covariance" || version != 1 || n < 1)
    throw std::runtime_error("load_state: malformed header");
  state.f = Matrix(n, n);
  state.g = Matrix(n, n);
  auto fill = [&read_double](Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double re = read_double();
        const double im = read_double();
        m(i, j) = Complex{re, im};
      }
  };
  fill(state.f);
  fill(state.g);
  if (!in) throw std::runtime_error("load_state: truncated matrix data");
  return state;
}

LongTimeStats long_time_value(const std::vector<double>& times,
                              const std::vector<Complex>& values,
                              double window) {
  if (times.size() != values.size() || times.size() < 4)
    throw std::invalid_argument("long_time_value: need >= 4 samples");
  const double t_end = times.back();
  const double t_start = t_end - window * (t_end - times.front());
  std::size_t first = 0;
  while (first < times.size() && times[first] < t_start - 1e-12) ++first;
  const std::size_t count = times.size() - first;
  if (count < 4)
    throw std::invalid_argument("long_time_value: window too short");

  LongTimeStats stats;
  Complex mean = 0.0;
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = first; i < times.size(); ++i) {
    const double a = std::abs(values[i]);
    stats.mean_abs += a;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
    mean += values[i];
  }
  stats.mean_abs /= static_cast<double>(count);
  mean /= static_cast<double>(count);
  stats.osc_amplitude = 0.5 * (hi - lo);

  // oversampled single-bin scan for the dominant angular frequency
  const double t_window = times.back() - times[first];
  const double dt = t_window / static_cast<double>(count - 1);
  const double nyquist = std::numbers::pi / dt;
  const double df = 2.0 * std::numbers::pi / t_window / 8.0;
  double best_amp = 0.0, best_freq = 0.0;
  for (int sign : {-1, 1}) {
    for (double f = df; f <= nyquist; f += df) {
      Complex bin = 0.0;
      for (std::size_t i = first; i < times.size(); ++i)
        bin += (values[i] - mean) *
               std::exp(-kI * (sign * f) * (times[i] - times[first]));
      const double amp = std::abs(bin) / static_cast<double>(count);
      if (amp > best_amp) {
        best_amp = amp;
        best_freq = f;
      }
    }
  }
  if (best_amp > 1e-12 * std::max(1.0, stats.mean_abs))
    stats.dominant_freq = best_freq;
  return stats;
}

double amplitude_at_frequency(const std::vector<double>& times,
                              const std::vector<Complex>& values, double freq,
                              double window) {
  if (times.size() != values.size() || times.size() < 4)
    throw std::invalid_argument("amplitude_at_frequency: need >= 4 samples");
  const double t_end = times.back();
  const double t_start = t_end - window * (t_end - times.front());
  std::size_t first = 0;
  while (first < times.size() && times[first] < t_start - 1e-12) ++first;
  if (times.size() - first < 4)
    throw std::invalid_argument("amplitude_at_frequency: window too short");

  Complex mean = 0.0;
  for (std::size_t i = first; i < times.size(); ++i) mean += values[i];
  mean /= static_cast<double>(times.size() - first);

  Complex acc = 0.0;
  for (std::size_t i = first; i + 1 < times.size(); ++i) {
    const double h = times[i + 1] - times[i];
    const Complex a =
        (values[i] - mean) * std::exp(-kI * freq * (times[i] - times[first]));
    const Complex b = (values[i + 1] - mean) *
                      std::exp(-kI * freq * (times[i + 1] - times[first]));
    acc += 0.5 * h * (a + b);
  }
  return std::abs(acc) / (times.back() - times[first]);
}

std::vector<ScalingRow> scaling_sweep(const ChainParams& params_template,
                                      const std::vector<int>& n_list,
                                      double t_max, double dt_out) {
  std::vector<ScalingRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    ChainParams p = params_template;
    p.n_sites = n;
    const Trajectory traj = integrate(make_uniform_pair_state(n), p, t_max,
                                      dt_out, EvolveMethod::Spectral);
    rows.push_back({n, long_time_value(traj.times, traj.c1c2)});
  }
  return rows;
}

}  // namespace kitaev
