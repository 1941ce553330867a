#include "wmtele/oracle.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wmtele::oracle {

namespace {

using C = std::complex<double>;

Mat2 dg(double a, double b) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Mat2 sx() {
  Mat2 m = Mat2::Zero();
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

Mat2 sz() { return dg(1.0, -1.0); }

Mat2 measurement(const Config& c, int i) {
  double a = 0.0;
  double b = 0.0;
  if (c.protocol == ProtocolKind::I) {
    a = std::cos(c.axis1 / 2.0);
    b = std::sin(c.axis1 / 2.0);
  } else {
    a = std::sqrt((1.0 + c.axis1) / 2.0);
    b = std::sqrt((1.0 - c.axis1) / 2.0);
  }
  return i == 0 ? dg(a, b) : dg(b, a);
}

Mat2 reversal(const Config& c, int i) {
  if (c.protocol == ProtocolKind::I) return i == 0 ? dg(c.axis2, 1.0) : dg(1.0, c.axis2);
  const double a = std::sqrt((1.0 + c.axis2) / 2.0);
  const double b = std::sqrt((1.0 - c.axis2) / 2.0);
  return i == 0 ? dg(a, b) : dg(b, a);
}

Mat2 kraus(const Config& c, int j) {
  switch (c.channel) {
    case ChannelKind::ADC: {
      if (j == 0) return dg(1.0, std::sqrt(1.0 - c.r));
      Mat2 m = Mat2::Zero();
      m(0, 1) = std::sqrt(c.r);
      return m;
    }
    case ChannelKind::BFC:
      return j == 0 ? Mat2(std::sqrt(1.0 - c.r) * Mat2::Identity()) : Mat2(std::sqrt(c.r) * sx());
    case ChannelKind::PFC:
      return j == 0 ? Mat2(std::sqrt(1.0 - c.r) * Mat2::Identity()) : Mat2(std::sqrt(c.r) * sz());
  }
  throw std::invalid_argument("unknown channel");
}

Mat2 branch(const Config& c, int i, int j) {
  const Mat2 f = i == 0 ? Mat2(Mat2::Identity()) : sx();
  return reversal(c, i) * f * kraus(c, j) * f * measurement(c, i);
}

Eigen::VectorXcd resource() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  v(0) = v(5) = v(10) = v(15) = 0.5;
  return v;
}

// The four Alice outcomes with Bob's correction.
struct Outcome {
  Eigen::VectorXcd eta;
  Mat2 correction;
};

std::array<Outcome, 4> outcomes() {
  std::array<Outcome, 4> out;
  const int groups[2][4] = {{0, 5, 10, 15}, {2, 7, 8, 13}};
  const double signs[2][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}};
  const Mat2 corr[4] = {Mat2::Identity(), sz(), sx(), sz() * sx()};
  for (int k = 0; k < 4; ++k) {
    out[k].eta = Eigen::VectorXcd::Zero(16);
    for (int t = 0; t < 4; ++t) out[k].eta(groups[k / 2][t]) = 0.5 * signs[k % 2][t];
    out[k].correction = corr[k];
  }
  return out;
}

Mat outer_kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Bob's corrected, unnormalized output for each outcome, summed.
Mat2 teleport_sum(const Mat& joint) {
  Mat2 total = Mat2::Zero();
  for (const auto& o : outcomes()) {
    const Mat proj = outer_kron(o.eta * o.eta.adjoint(), Mat::Identity(2, 2));
    const Mat2 bob = reduce_to_last(proj * joint * proj, 5);
    total += o.correction * bob * o.correction.adjoint();
  }
  return total;
}

}  // namespace

std::string Config::describe() const {
  std::ostringstream os;
  os << "protocol " << to_string(protocol) << " (" << axis1 << ", " << axis2 << ") " << to_string(channel)
     << " r=" << r << ' ' << to_string(mode);
  return os.str();
}

Mat lifted(const Mat2& op, int num_qubits, int target) {
  const int dim = 1 << num_qubits;
  const int shift = num_qubits - 1 - target;
  Mat m = Mat::Zero(dim, dim);
  for (int row = 0; row < dim; ++row) {
    for (int col = 0; col < dim; ++col) {
      if ((row & ~(1 << shift)) != (col & ~(1 << shift))) continue;
      m(row, col) = op((row >> shift) & 1, (col >> shift) & 1);
    }
  }
  return m;
}

Mat2 reduce_to_last(const Mat& rho, int num_qubits) {
  const int dim = 1 << num_qubits;
  Mat2 out = Mat2::Zero();
  for (int row = 0; row < dim; ++row) {
    for (int col = 0; col < dim; ++col) {
      if ((row >> 1) == (col >> 1)) out(row & 1, col & 1) += rho(row, col);
    }
  }
  return out;
}

Mat shared_density(const Config& c) {
  const Eigen::VectorXcd psi0 = resource();
  if (c.mode == PipelineMode::PaperLiteral) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(16);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) psi += lifted(branch(c, i, j), 4, 3) * psi0;
    const double n = psi.squaredNorm();
    if (n < 1e-14) throw std::domain_error("oracle: state annihilated");
    psi /= std::sqrt(n);
    return psi * psi.adjoint();
  }
  const Mat rho0 = psi0 * psi0.adjoint();
  Mat rho = Mat::Zero(16, 16);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Mat a = lifted(branch(c, i, j), 4, 3);
      rho += a * rho0 * a.adjoint();
    }
  }
  const double t = rho.trace().real();
  if (t < 1e-14) throw std::domain_error("oracle: state annihilated");
  return rho / t;
}

Mat2 TeleportMap::operator()(const Mat2& rho_in) const {
  Mat2 out = Mat2::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out += rho_in(a, b) * image[a][b];
  return out;
}

TeleportMap teleport_map(const Mat& shared) {
  TeleportMap map;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Mat unit = Mat::Zero(2, 2);
      unit(a, b) = 1.0;
      map.image[a][b] = teleport_sum(outer_kron(unit, shared));
    }
  }
  return map;
}

double direct_fidelity(const Mat& shared, const Vec2& input) {
  const Mat rho_in = input * input.adjoint();
  return (input.adjoint() * teleport_sum(outer_kron(rho_in, shared)) * input)(0, 0).real();
}

double exact_haar_average(const TeleportMap& map) {
  C total = map(Mat2::Identity()).trace();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) total += map.image[a][b](a, b);
  return total.real() / 6.0;
}

McEstimate mc_haar_average(const TeleportMap& map, std::int64_t samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    Vec2 v(C(g(rng), g(rng)), C(g(rng), g(rng)));
    v.normalize();
    const double f = (v.adjoint() * map(v * v.adjoint()) * v)(0, 0).real();
    sum += f;
    sum_sq += f * f;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), samples};
}

Config random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Config c{};
  c.protocol = u(rng) < 0.5 ? ProtocolKind::I : ProtocolKind::II;
  if (c.protocol == ProtocolKind::I) {
    c.axis1 = 0.05 + 0.9 * std::numbers::pi * u(rng);
    c.axis2 = 0.05 + 0.9 * u(rng);
  } else {
    c.axis1 = -0.9 + 1.8 * u(rng);
    c.axis2 = -0.9 + 1.8 * u(rng);
  }
  const double pick = u(rng);
  c.channel = pick < 1.0 / 3 ? ChannelKind::ADC : pick < 2.0 / 3 ? ChannelKind::BFC : ChannelKind::PFC;
  c.r = u(rng);
  c.mode = u(rng) < 0.5 ? PipelineMode::PaperLiteral : PipelineMode::PhysicalMixed;
  return c;
}

}  // namespace wmtele::oracle
