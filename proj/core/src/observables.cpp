#include "rotorwp/observables.hpp"

#include <cmath>
#include <string>

namespace rotorwp {

AngularMomentumStats angular_stats(const WavePacket& wp) {
  const double defect = std::abs(1.0 - wp.norm_squared());
  if (defect > 1e-6) {
    throw ValidationError("angular_stats: packet not normalized (defect " +
                          std::to_string(defect) + ")");
  }

  const int l_max = wp.l_max();
  const auto& data = wp.coeffs.data();

  double mean_lz = 0.0;
  double mean_lz2 = 0.0;
  double pp = 0.0;               // <L_+ L_- + L_- L_+> = 2 <L^2 - L_z^2>
  std::complex<double> lp{};     // <L_+>
  std::complex<double> lp2{};    // <L_+^2>

  for (int i = 0; i <= l_max; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * i + i;
    const double ii = static_cast<double>(i) * (i + 1.0);
    for (int m = -i; m <= i; ++m) {
      const auto c = data[base + m];
      if (c == std::complex<double>{0.0, 0.0}) continue;
      const double w = std::norm(c);
      mean_lz += m * w;
      mean_lz2 += static_cast<double>(m) * m * w;
      pp += 2.0 * (ii - static_cast<double>(m) * m) * w;
      if (m + 1 <= i) {
        lp += std::conj(data[base + m + 1]) * std::sqrt(ii - m * (m + 1.0)) * c;
      }
      if (m + 2 <= i) {
        lp2 += std::conj(data[base + m + 2]) *
               std::sqrt(ii - (m + 1.0) * (m + 2.0)) * std::sqrt(ii - m * (m + 1.0)) * c;
      }
    }
  }

  const double mean_lx = lp.real();
  const double mean_ly = lp.imag();
  const double mean_lx2 = 0.25 * (2.0 * lp2.real() + pp);
  const double mean_ly2 = 0.25 * (pp - 2.0 * lp2.real());

  AngularMomentumStats stats;
  stats.mean_lz = mean_lz;
  stats.var_lx = mean_lx2 - mean_lx * mean_lx;
  stats.var_ly = mean_ly2 - mean_ly * mean_ly;
  stats.var_lz = mean_lz2 - mean_lz * mean_lz;
  stats.uncertainty_product = stats.var_lx * stats.var_ly;
  stats.min_uncertainty_rhs = 0.25 * mean_lz * mean_lz;
  return stats;
}

EtaEstimates eta_relations(const WavePacket& wp) {
  const auto stats = angular_stats(wp);
  if (stats.var_ly < 1e-12) {
    throw DomainError("eta_relations: var(L_y) ~ 0, estimators undefined");
  }
  EtaEstimates est;
  est.eta_from_lz = stats.mean_lz / (2.0 * stats.var_ly);
  const double ratio = std::sqrt(std::max(0.0, stats.var_lx) / stats.var_ly);
  est.eta_from_ratio = est.eta_from_lz < 0.0 ? -ratio : ratio;
  return est;
}

}  // namespace rotorwp
