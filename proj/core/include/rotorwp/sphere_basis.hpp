#ifndef ROTORWP_SPHERE_BASIS_HPP
#define ROTORWP_SPHERE_BASIS_HPP

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "rotorwp/errors.hpp"

// Numerically stable spherical-harmonic kernel: fully normalized associated
// Legendre functions, complex Y_l^m in the Condon-Shortley convention with
// e^{i m phi} azimuth, and Gauss-Legendre x uniform-azimuth quadrature for
// projecting functions on the sphere onto the harmonic basis.
//
// All functions here are pure; grids and coefficient tables are immutable
// after construction and safe for concurrent reads.

namespace rotorwp {

/// (I, M) index into the spherical-harmonic basis, |M| <= I.
struct HarmonicIndex {
  int i = 0;
  int m = 0;
};

/// Theta part of Y_l^m, normalized so that Y_l^m = value * e^{i m phi} / sqrt(2 pi),
/// i.e. int_{-1}^{1} value(x)^2 dx = 1. Includes the Condon-Shortley (-1)^m.
/// Upward recurrence in l with the normalization folded in; no overflow for
/// any l (values stay O(sqrt(l))).
double normalized_legendre(int l, int m, double x);

/// Fills out[k] = normalized_legendre(m + k, m, x) for k = 0 .. l_max - m.
/// One recurrence pass; out.size() must be l_max - m + 1.
void normalized_legendre_column(int m, int l_max, double x, std::span<double> out);

/// Complex spherical harmonic, physics convention. Negative m handled via
/// Y_l^{-m} = (-1)^m conj(Y_l^m).
std::complex<double> ylm(HarmonicIndex idx, double theta, double phi);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n);

struct QuadratureNode {
  double theta;
  double phi;
  double weight;
};

/// Product quadrature on the sphere: Gauss-Legendre in cos(theta) times a
/// uniform trapezoidal grid in phi. Exact for polynomials in cos(theta) of
/// degree <= 2 n_theta - 1 times e^{i M phi} with |M| < n_phi; weights sum
/// to 4 pi.
class QuadratureGrid {
 public:
  static QuadratureGrid build(int n_theta, int n_phi);

  int n_theta() const { return static_cast<int>(cos_theta_.size()); }
  int n_phi() const { return n_phi_; }

  const std::vector<double>& cos_theta() const { return cos_theta_; }
  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& theta_weight() const { return theta_weight_; }

  double phi(int k) const;
  double phi_weight() const { return phi_weight_; }

  double total_weight() const;

  /// Materialized (theta, phi, weight) list, row-major over theta then phi.
  std::vector<QuadratureNode> nodes() const;

 private:
  std::vector<double> cos_theta_;
  std::vector<double> theta_;
  std::vector<double> theta_weight_;
  int n_phi_ = 0;
  double phi_weight_ = 0.0;
};

/// Dense coefficient table over (I, M), I <= l_max, stored at index I*I + I + M.
class HarmonicCoeffs {
 public:
  HarmonicCoeffs() = default;
  explicit HarmonicCoeffs(int l_max);

  int l_max() const { return l_max_; }
  std::size_t size() const { return data_.size(); }

  /// Coefficient accessor. Throws DomainError for |m| > i or i < 0;
  /// indices beyond l_max read as zero.
  std::complex<double> at(int i, int m) const;
  void set(int i, int m, std::complex<double> value);

  double norm_squared() const;

  const std::vector<std::complex<double>>& data() const { return data_; }
  std::vector<std::complex<double>>& data() { return data_; }

 private:
  int l_max_ = -1;
  std::vector<std::complex<double>> data_;
};

/// Projects f onto the harmonic basis: b_{IM} = int conj(Y_I^M) f dOmega for
/// all I <= l_max. Requires n_theta >= l_max + 1 and n_phi >= 2 l_max + 1,
/// otherwise refuses with ConfigError (no silent aliasing).
HarmonicCoeffs project(const std::function<std::complex<double>(double, double)>& f,
                       int l_max, const QuadratureGrid& grid);

/// Evaluates sum b_{IM} Y_I^M(theta, phi).
std::complex<double> synthesize(const HarmonicCoeffs& coeffs, double theta, double phi);

/// Rotation about the z axis by alpha: b_{IM} -> b_{IM} e^{-i M alpha}.
HarmonicCoeffs rotate_z(const HarmonicCoeffs& coeffs, double alpha);

}  // namespace rotorwp

#endif  // ROTORWP_SPHERE_BASIS_HPP
