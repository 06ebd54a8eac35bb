#include "rotorwp/revival.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace rotorwp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNoiseFloor = 1e-6;
// Scan maxima below this fraction of the global maximum are interference
// ripple between features, not features.
constexpr double kRelativeFloor = 0.1;

// |sum_M g_M e^{i M alpha}| for the packed grid of same-M overlap sums.
double overlap_modulus(const std::vector<std::complex<double>>& g, int l_max, double alpha) {
  std::complex<double> sum{0.0, 0.0};
  for (int m = -l_max; m <= l_max; ++m) {
    sum += g[m + l_max] * std::polar(1.0, m * alpha);
  }
  return std::abs(sum);
}

// Golden-section refinement of a bracketed maximum.
double refine_maximum(const std::vector<std::complex<double>>& g, int l_max, double lo,
                      double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = overlap_modulus(g, l_max, c);
  double fd = overlap_modulus(g, l_max, d);
  while (b - a > 1e-12) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = overlap_modulus(g, l_max, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = overlap_modulus(g, l_max, d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void validate(const FractionalTime& ft) {
  if (ft.m < 1 || ft.n < 1) {
    throw ValidationError("FractionalTime: m and n must be positive");
  }
  if (ft.m > ft.n) {
    throw ValidationError("FractionalTime: m/n must lie in (0, 1]");
  }
  if (std::gcd(ft.m, ft.n) != 1) {
    throw ValidationError("FractionalTime: m and n must be mutually prime (m=" +
                          std::to_string(ft.m) + ", n=" + std::to_string(ft.n) + ")");
  }
}

int clone_count(int n) {
  if (n < 1) throw ValidationError("clone_count: n must be >= 1");
  return (n % 2 == 0) ? n / 2 : n;
}

RevivalDecomposition gauss_coefficients(const FractionalTime& ft) {
  validate(ft);
  const int n = ft.n;
  const int l = (n % 4 == 0) ? n / 2 : n;

  // Quadratic phase sequence over one period, with the exponent reduced in
  // exact integer arithmetic.
  std::vector<std::complex<double>> seq(l);
  for (int k = 0; k < l; ++k) {
    const std::int64_t num = (static_cast<std::int64_t>(k) * k % n) * ft.m % n;
    seq[k] = std::polar(1.0, -kTwoPi * static_cast<double>(num) / n);
  }

  RevivalDecomposition dec;
  dec.l = l;
  dec.predicted_clones = clone_count(n);
  dec.a.resize(l);
  for (int s = 0; s < l; ++s) {
    std::complex<double> acc{0.0, 0.0};
    for (int k = 0; k < l; ++k) {
      const std::int64_t num = static_cast<std::int64_t>(k) * s % l;
      acc += seq[k] * std::polar(1.0, kTwoPi * static_cast<double>(num) / l);
    }
    dec.a[s] = acc / static_cast<double>(l);
  }
  return dec;
}

DetectionResult detect_features(const WavePacket& wp_t, const WavePacket& wp_0,
                                const FractionalTime& ft, double clone_threshold,
                                int n_scan) {
  validate(ft);
  if (std::abs(1.0 - wp_0.norm_squared()) > 1e-6 ||
      std::abs(1.0 - wp_t.norm_squared()) > 1e-6) {
    throw ValidationError("detect_features: packets must be normalized");
  }
  if (n_scan == 0) {
    n_scan = std::max({256, 8 * ft.n, 4 * wp_0.l_max() + 16});
  } else if (n_scan < 8 * ft.n) {
    throw ValidationError("detect_features: n_scan must be >= 8 n");
  }

  const int l_max = std::min(wp_0.l_max(), wp_t.l_max());
  std::vector<std::complex<double>> g(2 * l_max + 1, {0.0, 0.0});
  for (int i = 0; i <= l_max; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * i + i;
    for (int m = -i; m <= i; ++m) {
      g[m + l_max] += std::conj(wp_0.coeffs.data()[base + m]) * wp_t.coeffs.data()[base + m];
    }
  }

  std::vector<double> scan(n_scan);
  double global_max = 0.0;
  double global_min = std::numeric_limits<double>::max();
  for (int k = 0; k < n_scan; ++k) {
    scan[k] = overlap_modulus(g, l_max, kTwoPi * k / n_scan);
    global_max = std::max(global_max, scan[k]);
    global_min = std::min(global_min, scan[k]);
  }

  DetectionResult result;
  if (global_max < kNoiseFloor || (global_max - global_min) < 1e-9 * global_max) {
    result.degenerate = true;
    return result;
  }

  const double floor = std::max(kNoiseFloor, kRelativeFloor * global_max);
  const double q = clone_count(ft.n);
  const double step = kTwoPi / n_scan;

  for (int k = 0; k < n_scan; ++k) {
    const double prev = scan[(k + n_scan - 1) % n_scan];
    const double next = scan[(k + 1) % n_scan];
    if (scan[k] < prev || scan[k] < next || scan[k] < floor) continue;
    if (scan[k] == prev && scan[(k + n_scan - 2) % n_scan] >= prev) continue;  // plateau dedup

    const double center = step * k;
    const double alpha = refine_maximum(g, l_max, center - step, center + step);
    const double raw = overlap_modulus(g, l_max, alpha);

    DetectedFeature feature;
    feature.azimuth = std::fmod(alpha + kTwoPi, kTwoPi);
    feature.raw_overlap = raw;
    feature.fidelity = std::min(1.0, std::sqrt(q) * raw);
    feature.kind = feature.fidelity >= clone_threshold ? FeatureKind::clone : FeatureKind::mutant;
    result.features.push_back(feature);
  }

  // Refinement can pull neighboring scan maxima onto one peak; keep one.
  std::sort(result.features.begin(), result.features.end(),
            [](const auto& a, const auto& b) { return a.azimuth < b.azimuth; });
  std::vector<DetectedFeature> unique;
  for (const auto& f : result.features) {
    if (!unique.empty()) {
      double gap = std::abs(f.azimuth - unique.back().azimuth);
      gap = std::min(gap, kTwoPi - gap);
      if (gap < 2.0 * step) {
        if (f.raw_overlap > unique.back().raw_overlap) unique.back() = f;
        continue;
      }
    }
    unique.push_back(f);
  }
  if (unique.size() > 1) {
    double gap = unique.front().azimuth + kTwoPi - unique.back().azimuth;
    if (gap < 2.0 * step) {
      if (unique.back().raw_overlap > unique.front().raw_overlap) {
        unique.front() = unique.back();
      }
      unique.pop_back();
    }
  }
  result.features = std::move(unique);
  return result;
}

}  // namespace rotorwp
