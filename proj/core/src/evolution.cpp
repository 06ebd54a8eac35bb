#include "rotorwp/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rotorwp {

namespace detail {

std::complex<double> unit_phase(double energy, double time) {
  // Two-product split of e*t, then Cody-Waite reduction with a double-double
  // 2 pi. Keeps the absolute phase error near machine epsilon even when the
  // raw product is ~1e6 radians.
  constexpr double kTwoPiHi = 6.283185307179586232;
  constexpr double kTwoPiLo = 2.4492935982947064e-16;
  const double p_hi = energy * time;
  const double p_lo = std::fma(energy, time, -p_hi);
  const double r = std::remainder(p_hi, kTwoPiHi);
  const double k = std::round((p_hi - r) / kTwoPiHi);
  const double phase = (r - k * kTwoPiLo) + p_lo;
  return {std::cos(phase), -std::sin(phase)};
}

}  // namespace detail

SpectrumModel SpectrumModel::ideal_rotor(double rotational_constant) {
  if (!(rotational_constant > 0.0)) {
    throw ValidationError("SpectrumModel: rotational constant must be positive");
  }
  SpectrumModel s;
  s.ideal_ = true;
  s.b_ = rotational_constant;
  return s;
}

SpectrumModel SpectrumModel::tabulated(std::vector<std::pair<int, double>> levels) {
  if (levels.empty()) throw ValidationError("SpectrumModel: empty level table");
  for (std::size_t k = 1; k < levels.size(); ++k) {
    if (levels[k].first <= levels[k - 1].first) {
      throw ValidationError("SpectrumModel: level I values must be strictly increasing (I=" +
                            std::to_string(levels[k].first) + ")");
    }
    if (levels[k].second < levels[k - 1].second) {
      throw ValidationError("SpectrumModel: energies must be non-decreasing (at I=" +
                            std::to_string(levels[k].first) + ")");
    }
  }
  SpectrumModel s;
  s.ideal_ = false;
  s.levels_ = std::move(levels);
  return s;
}

double SpectrumModel::rotational_constant() const {
  if (!ideal_) throw DataError("SpectrumModel: tabulated spectrum has no rotational constant");
  return b_;
}

bool SpectrumModel::has_level(int i) const {
  if (ideal_) return true;
  return std::binary_search(levels_.begin(), levels_.end(), std::make_pair(i, 0.0),
                            [](const auto& a, const auto& b) { return a.first < b.first; });
}

double SpectrumModel::energy(int i) const {
  if (ideal_) return b_ * i * (i + 1.0);
  const auto it = std::lower_bound(levels_.begin(), levels_.end(), i,
                                   [](const auto& lv, int key) { return lv.first < key; });
  if (it == levels_.end() || it->first != i) {
    throw DataError("SpectrumModel: no tabulated level at I=" + std::to_string(i));
  }
  return it->second;
}

TimeScales timescales(const SpectrumModel& spectrum, double i_bar) {
  if (!(i_bar >= 1.0)) {
    throw ValidationError("timescales: i_bar must be >= 1 (got " + std::to_string(i_bar) + ")");
  }
  constexpr double kTwoPi = 6.283185307179586;
  if (spectrum.is_ideal()) {
    const double b = spectrum.rotational_constant();
    return {kTwoPi / (b * (2.0 * i_bar + 1.0)), kTwoPi / b, i_bar};
  }

  const auto& levels = spectrum.levels();
  if (levels.size() < 3) {
    throw DataError("timescales: need at least three tabulated levels");
  }
  // Tabulated point nearest i_bar that has both neighbors, symmetric spacing.
  std::size_t best = 1;
  double best_dist = std::abs(levels[1].first - i_bar);
  for (std::size_t k = 2; k + 1 < levels.size(); ++k) {
    const double dist = std::abs(levels[k].first - i_bar);
    if (dist < best_dist) {
      best = k;
      best_dist = dist;
    }
  }
  const int h_lo = levels[best].first - levels[best - 1].first;
  const int h_hi = levels[best + 1].first - levels[best].first;
  if (h_lo != h_hi) {
    throw DataError("timescales: uneven level spacing around I=" +
                    std::to_string(levels[best].first));
  }
  const double h = h_lo;
  const double e_minus = levels[best - 1].second;
  const double e_0 = levels[best].second;
  const double e_plus = levels[best + 1].second;
  const double first = (e_plus - e_minus) / (2.0 * h);
  const double second = (e_plus - 2.0 * e_0 + e_minus) / (2.0 * h * h);
  if (first == 0.0) throw DataError("timescales: vanishing level spacing (E' = 0)");
  if (second == 0.0) throw DataError("timescales: spectrum locally linear (E'' = 0)");
  return {kTwoPi / std::abs(first), kTwoPi / std::abs(second),
          static_cast<double>(levels[best].first)};
}

WavePacket propagate(const WavePacket& wp, const SpectrumModel& spectrum, double t) {
  const int l_max = wp.l_max();

  if (!spectrum.is_ideal()) {
    std::string missing;
    for (int i = 0; i <= l_max; ++i) {
      const std::size_t base = static_cast<std::size_t>(i) * i + i;
      bool carries = false;
      for (int m = -i; m <= i && !carries; ++m) {
        carries = wp.coeffs.data()[base + m] != std::complex<double>{0.0, 0.0};
      }
      if (carries && !spectrum.has_level(i)) {
        missing += (missing.empty() ? "" : ", ") + std::to_string(i);
      }
    }
    if (!missing.empty()) {
      throw DataError("propagate: spectrum does not cover I = {" + missing + "}");
    }
  }

  WavePacket out = wp;
  for (int i = 0; i <= l_max; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * i + i;
    bool carries = false;
    for (int m = -i; m <= i && !carries; ++m) {
      carries = wp.coeffs.data()[base + m] != std::complex<double>{0.0, 0.0};
    }
    if (!carries) continue;
    const std::complex<double> phase = detail::unit_phase(spectrum.energy(i), t);
    for (int m = -i; m <= i; ++m) {
      out.coeffs.data()[base + m] = wp.coeffs.data()[base + m] * phase;
    }
  }
  return out;
}

std::complex<double> autocorrelation(const WavePacket& wp_a, const WavePacket& wp_b) {
  const int l_common = std::min(wp_a.l_max(), wp_b.l_max());
  std::complex<double> sum{0.0, 0.0};
  for (int i = 0; i <= l_common; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * i + i;
    for (int m = -i; m <= i; ++m) {
      sum += std::conj(wp_a.coeffs.data()[base + m]) * wp_b.coeffs.data()[base + m];
    }
  }
  return sum;
}

}  // namespace rotorwp
