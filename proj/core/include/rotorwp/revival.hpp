#ifndef ROTORWP_REVIVAL_HPP
#define ROTORWP_REVIVAL_HPP

#include <complex>
#include <vector>

#include "rotorwp/wavepacket.hpp"

// Fractional-revival analysis. At t = (m/n) t_rev the quadratic phase
// exp(-2 pi i k^2 m/n) is periodic in k with period l (l = n/2 when 4 | n,
// l = n otherwise) and therefore decomposes into l plane-wave terms
// sum_s a_s exp(-2 pi i k s / l): the evolved packet becomes a superposition
// of l displaced copies of the initial one. For circular states every copy
// is an exact rotated clone; otherwise the copies are shape-distorted
// mutants, except that a copy landing on the initial position is a clone.

namespace rotorwp {

/// Reduced fraction m/n in (0, 1].
struct FractionalTime {
  int m = 1;
  int n = 1;
};

/// Validates gcd(m, n) = 1 and 0 < m/n <= 1; throws ValidationError.
void validate(const FractionalTime& ft);

/// q = n/2 for even n, q = n for odd n.
int clone_count(int n);

struct RevivalDecomposition {
  int l = 0;                                  // number of Gauss-sum terms
  std::vector<std::complex<double>> a;        // coefficients a_s, s = 0 .. l-1
  int predicted_clones = 0;                   // q
};

/// Coefficients a_s with exp(-2 pi i k^2 m/n) = sum_s a_s exp(-2 pi i k s/l)
/// for every integer k, by discrete Fourier inversion of the quadratic phase
/// sequence over one period. Parseval gives sum |a_s|^2 = 1 exactly.
RevivalDecomposition gauss_coefficients(const FractionalTime& ft);

enum class FeatureKind { clone, mutant };

struct DetectedFeature {
  double azimuth = 0.0;     // position of the overlap maximum, in [0, 2 pi)
  double fidelity = 0.0;    // overlap modulus normalized to the 1/sqrt(q) clone amplitude
  FeatureKind kind = FeatureKind::mutant;
  double raw_overlap = 0.0; // unnormalized |<R_z(azimuth) wp_0 | wp_t>|
};

struct DetectionResult {
  std::vector<DetectedFeature> features;
  bool degenerate = false;  // scan carried no usable azimuthal structure
};

/// Scans azimuthal rotations of wp_0 against wp_t over n_scan angles, refines
/// each local maximum of the overlap modulus, and classifies features by
/// clone_threshold. Fidelity is sqrt(q) times the raw overlap so that an
/// exact clone in an equal-weight q-fold superposition scores 1 (clamped).
/// n_scan = 0 picks a resolution from the packet content; explicit values
/// must satisfy n_scan >= 8 n. If every scan point falls below the 1e-6
/// noise floor, or the scan is azimuthally flat, the result is flagged
/// degenerate with no features.
DetectionResult detect_features(const WavePacket& wp_t, const WavePacket& wp_0,
                                const FractionalTime& ft, double clone_threshold = 0.99,
                                int n_scan = 0);

}  // namespace rotorwp

#endif  // ROTORWP_REVIVAL_HPP
