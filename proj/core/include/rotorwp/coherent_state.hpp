#ifndef ROTORWP_COHERENT_STATE_HPP
#define ROTORWP_COHERENT_STATE_HPP

#include <complex>

#include "rotorwp/wavepacket.hpp"

// Angular-momentum coherent states on the sphere:
//
//   Psi_{N,eta}(theta, phi) = sqrt(N / (2 pi sinh 2N)) exp[N sin(theta) (cos(phi) + i eta sin(phi))]
//
// N > 0 sets the size (and the mean angular momentum), eta in [-1, 1] the
// ellipticity: eta = +-1 gives circular states orbiting the equator (only
// M = +-I components), eta = 0 the linear state, an axially symmetric cap
// whose natural expansion has only M = 0 components.
//
// The eta = 0 state as written above is symmetric about the x axis, not z.
// Expansions are therefore done in the state's canonical orientation: for
// eta != 0 that is the frame of the formula itself, for eta = 0 the symmetry
// axis is aligned with z (exponent N cos(theta)), which is what makes the
// M = 0 structure explicit and matches the cylindrically symmetric packets
// produced by backscattering Coulomb excitation.

namespace rotorwp {

struct CoherentStateParams {
  double n = 1.0;    // size parameter N
  double eta = 0.0;  // ellipticity in [-1, 1]
};

/// Throws ValidationError unless N > 0 and |eta| <= 1.
void validate(const CoherentStateParams& params);

/// Closed-form amplitude, exactly as defined above (x-axis orientation at eta = 0).
std::complex<double> evaluate_cs(const CoherentStateParams& params, double theta, double phi);

/// Amplitude in the canonical orientation used by expand_cs: identical to
/// evaluate_cs for eta != 0; for eta = 0 the symmetry axis is rotated onto z.
std::complex<double> canonical_cs_amplitude(const CoherentStateParams& params, double theta,
                                            double phi);

/// Expands the coherent state into Y_I^M up to l_max by quadrature projection.
/// Verifies the truncated norm defect is below tol, else throws TruncationError
/// with the achieved defect. With renormalize the coefficients are scaled to
/// unit norm; norm_defect still records the pre-scaling defect.
WavePacket expand_cs(const CoherentStateParams& params, int l_max, double tol,
                     bool renormalize = false);

/// Smallest l_max whose truncation defect is below tol (doubling search plus
/// bisection). Throws ResourceError if that exceeds kMaxExpansionOrder.
int suggest_lmax(const CoherentStateParams& params, double tol);

inline constexpr int kMaxExpansionOrder = 400;

}  // namespace rotorwp

#endif  // ROTORWP_COHERENT_STATE_HPP
