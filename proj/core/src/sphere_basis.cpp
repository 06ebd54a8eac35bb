#include "rotorwp/sphere_basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rotorwp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvSqrtTwoPi = 0.39894228040143267794;  // 1/sqrt(2 pi)

void check_index(int l, int m) {
  if (l < 0 || m < 0 || m > l) {
    throw DomainError("normalized_legendre: invalid index (l=" + std::to_string(l) +
                      ", m=" + std::to_string(m) + ")");
  }
}

void check_argument(double x) {
  if (!(std::abs(x) <= 1.0)) {
    throw DomainError("normalized_legendre: |x| > 1 (x=" + std::to_string(x) + ")");
  }
}

// Seed of the recurrence: fully normalized P_m^m. The sqrt factors are
// accumulated per step so intermediates underflow only where the true value
// does.
double seed_pmm(int m, double x) {
  double pmm = std::sqrt(0.5);  // l = m = 0
  if (m > 0) {
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    for (int k = 1; k <= m; ++k) {
      pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
    }
  }
  return pmm;
}

}  // namespace

double normalized_legendre(int l, int m, double x) {
  check_index(l, m);
  check_argument(x);

  double pmm = seed_pmm(m, x);
  if (l == m) return pmm;

  double pml = std::sqrt(2.0 * m + 3.0) * x * pmm;
  if (l == m + 1) return pml;

  double prev_factor = std::sqrt(2.0 * m + 3.0);
  for (int ll = m + 2; ll <= l; ++ll) {
    const double factor =
        std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll) * ll - static_cast<double>(m) * m));
    const double next = (x * pml - pmm / prev_factor) * factor;
    pmm = pml;
    pml = next;
    prev_factor = factor;
  }
  return pml;
}

void normalized_legendre_column(int m, int l_max, double x, std::span<double> out) {
  check_index(l_max, m);
  check_argument(x);
  if (out.size() != static_cast<std::size_t>(l_max - m + 1)) {
    throw DomainError("normalized_legendre_column: output span has wrong size");
  }

  double pmm = seed_pmm(m, x);
  out[0] = pmm;
  if (l_max == m) return;

  double pml = std::sqrt(2.0 * m + 3.0) * x * pmm;
  out[1] = pml;

  double prev_factor = std::sqrt(2.0 * m + 3.0);
  for (int ll = m + 2; ll <= l_max; ++ll) {
    const double factor =
        std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll) * ll - static_cast<double>(m) * m));
    const double next = (x * pml - pmm / prev_factor) * factor;
    pmm = pml;
    pml = next;
    prev_factor = factor;
    out[ll - m] = pml;
  }
}

std::complex<double> ylm(HarmonicIndex idx, double theta, double phi) {
  const int l = idx.i;
  const int m_abs = std::abs(idx.m);
  if (l < 0 || m_abs > l) {
    throw DomainError("ylm: invalid index (I=" + std::to_string(l) +
                      ", M=" + std::to_string(idx.m) + ")");
  }
  const double p = normalized_legendre(l, m_abs, std::cos(theta));
  const std::complex<double> value =
      p * kInvSqrtTwoPi * std::polar(1.0, m_abs * phi);
  if (idx.m >= 0) return value;
  const double sign = (m_abs % 2 == 0) ? 1.0 : -1.0;
  return sign * std::conj(value);
}

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureGrid QuadratureGrid::build(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) {
    throw ConfigError("QuadratureGrid: node counts must be positive");
  }
  QuadratureGrid grid;
  auto rule = gauss_legendre(n_theta);
  grid.cos_theta_ = std::move(rule.nodes);
  grid.theta_weight_.resize(n_theta);
  grid.theta_.resize(n_theta);
  for (int j = 0; j < n_theta; ++j) {
    grid.theta_[j] = std::acos(grid.cos_theta_[j]);
    grid.theta_weight_[j] = rule.weights[j];
  }
  grid.n_phi_ = n_phi;
  grid.phi_weight_ = kTwoPi / n_phi;
  return grid;
}

double QuadratureGrid::phi(int k) const {
  return kTwoPi * k / n_phi_;
}

double QuadratureGrid::total_weight() const {
  double sum = 0.0;
  for (double w : theta_weight_) sum += w;
  return sum * phi_weight_ * n_phi_;
}

std::vector<QuadratureNode> QuadratureGrid::nodes() const {
  std::vector<QuadratureNode> all;
  all.reserve(static_cast<std::size_t>(n_theta()) * n_phi_);
  for (int j = 0; j < n_theta(); ++j) {
    for (int k = 0; k < n_phi_; ++k) {
      all.push_back({theta_[j], phi(k), theta_weight_[j] * phi_weight_});
    }
  }
  return all;
}

HarmonicCoeffs::HarmonicCoeffs(int l_max) : l_max_(l_max) {
  if (l_max < 0) throw DomainError("HarmonicCoeffs: l_max must be >= 0");
  data_.assign(static_cast<std::size_t>(l_max + 1) * (l_max + 1), {0.0, 0.0});
}

std::complex<double> HarmonicCoeffs::at(int i, int m) const {
  if (i < 0 || std::abs(m) > i) {
    throw DomainError("HarmonicCoeffs: invalid index (I=" + std::to_string(i) +
                      ", M=" + std::to_string(m) + ")");
  }
  if (i > l_max_) return {0.0, 0.0};
  return data_[static_cast<std::size_t>(i) * i + i + m];
}

void HarmonicCoeffs::set(int i, int m, std::complex<double> value) {
  if (i < 0 || i > l_max_ || std::abs(m) > i) {
    throw DomainError("HarmonicCoeffs: invalid index (I=" + std::to_string(i) +
                      ", M=" + std::to_string(m) + ")");
  }
  data_[static_cast<std::size_t>(i) * i + i + m] = value;
}

double HarmonicCoeffs::norm_squared() const {
  double sum = 0.0;
  for (const auto& c : data_) sum += std::norm(c);
  return sum;
}

HarmonicCoeffs project(const std::function<std::complex<double>(double, double)>& f,
                       int l_max, const QuadratureGrid& grid) {
  if (l_max < 0) throw DomainError("project: l_max must be >= 0");
  if (grid.n_theta() < l_max + 1 || grid.n_phi() < 2 * l_max + 1) {
    throw ConfigError("project: grid under-resolved for l_max=" + std::to_string(l_max) +
                      " (need n_theta >= " + std::to_string(l_max + 1) +
                      ", n_phi >= " + std::to_string(2 * l_max + 1) + ")");
  }

  const int n_theta = grid.n_theta();
  const int n_phi = grid.n_phi();
  const int n_m = 2 * l_max + 1;

  // Azimuthal phase table e^{-i M phi_k}, reused across theta rows.
  std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(n_m) * n_phi);
  for (int m = -l_max; m <= l_max; ++m) {
    for (int k = 0; k < n_phi; ++k) {
      twiddle[static_cast<std::size_t>(m + l_max) * n_phi + k] =
          std::polar(1.0, -m * grid.phi(k));
    }
  }

  HarmonicCoeffs coeffs(l_max);
  std::vector<std::complex<double>> row(n_phi);
  std::vector<std::complex<double>> g(n_m);
  std::vector<double> legendre(l_max + 1);

  for (int j = 0; j < n_theta; ++j) {
    const double theta = grid.theta()[j];
    const double x = grid.cos_theta()[j];
    const double w = grid.theta_weight()[j];

    for (int k = 0; k < n_phi; ++k) {
      row[k] = f(theta, grid.phi(k)) * grid.phi_weight();
    }
    for (int m = -l_max; m <= l_max; ++m) {
      std::complex<double> acc{0.0, 0.0};
      const std::complex<double>* t = &twiddle[static_cast<std::size_t>(m + l_max) * n_phi];
      for (int k = 0; k < n_phi; ++k) acc += row[k] * t[k];
      g[m + l_max] = acc;
    }

    for (int m_abs = 0; m_abs <= l_max; ++m_abs) {
      normalized_legendre_column(m_abs, l_max, x,
                                 std::span<double>(legendre.data(), l_max - m_abs + 1));
      for (int i = m_abs; i <= l_max; ++i) {
        const double pw = legendre[i - m_abs] * w * kInvSqrtTwoPi;
        auto& data = coeffs.data();
        const std::size_t base = static_cast<std::size_t>(i) * i + i;
        data[base + m_abs] += pw * g[m_abs + l_max];
        if (m_abs > 0) {
          const double sign = (m_abs % 2 == 0) ? 1.0 : -1.0;
          data[base - m_abs] += sign * pw * g[-m_abs + l_max];
        }
      }
    }
  }
  return coeffs;
}

std::complex<double> synthesize(const HarmonicCoeffs& coeffs, double theta, double phi) {
  const int l_max = coeffs.l_max();
  if (l_max < 0) return {0.0, 0.0};
  const double x = std::cos(theta);
  std::vector<double> legendre(l_max + 1);
  std::complex<double> sum{0.0, 0.0};
  for (int m_abs = 0; m_abs <= l_max; ++m_abs) {
    normalized_legendre_column(m_abs, l_max, x,
                               std::span<double>(legendre.data(), l_max - m_abs + 1));
    std::complex<double> pos{0.0, 0.0};
    std::complex<double> neg{0.0, 0.0};
    const auto& data = coeffs.data();
    for (int i = m_abs; i <= l_max; ++i) {
      const std::size_t base = static_cast<std::size_t>(i) * i + i;
      pos += data[base + m_abs] * legendre[i - m_abs];
      if (m_abs > 0) neg += data[base - m_abs] * legendre[i - m_abs];
    }
    if (m_abs == 0) {
      sum += pos * kInvSqrtTwoPi;
    } else {
      const double sign = (m_abs % 2 == 0) ? 1.0 : -1.0;
      sum += pos * kInvSqrtTwoPi * std::polar(1.0, m_abs * phi);
      sum += neg * kInvSqrtTwoPi * sign * std::polar(1.0, -m_abs * phi);
    }
  }
  return sum;
}

HarmonicCoeffs rotate_z(const HarmonicCoeffs& coeffs, double alpha) {
  const int l_max = coeffs.l_max();
  HarmonicCoeffs out(l_max);
  std::vector<std::complex<double>> phase(2 * l_max + 1);
  for (int m = -l_max; m <= l_max; ++m) {
    phase[m + l_max] = std::polar(1.0, -m * alpha);
  }
  for (int i = 0; i <= l_max; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * i + i;
    for (int m = -i; m <= i; ++m) {
      out.data()[base + m] = coeffs.data()[base + m] * phase[m + l_max];
    }
  }
  return out;
}

}  // namespace rotorwp
