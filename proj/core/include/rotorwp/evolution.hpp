#ifndef ROTORWP_EVOLUTION_HPP
#define ROTORWP_EVOLUTION_HPP

#include <utility>
#include <vector>

#include "rotorwp/wavepacket.hpp"

// Spectral propagation: b_IM(t) = b_IM(0) exp(-i E_I t), hbar = 1. Energies
// come from an ideal-rotor law E_I = B I(I+1) or from a tabulated band.
// Physical-unit conversion happens at the ingestion boundary only.

namespace rotorwp {

class SpectrumModel {
 public:
  static SpectrumModel ideal_rotor(double rotational_constant);
  /// Tabulated levels (I, E_I); I strictly increasing, E non-decreasing.
  static SpectrumModel tabulated(std::vector<std::pair<int, double>> levels);

  bool is_ideal() const { return ideal_; }
  double rotational_constant() const;
  const std::vector<std::pair<int, double>>& levels() const { return levels_; }

  bool has_level(int i) const;
  /// Energy at level I; throws DataError when a tabulated level is missing.
  double energy(int i) const;

 private:
  SpectrumModel() = default;
  bool ideal_ = true;
  double b_ = 1.0;
  std::vector<std::pair<int, double>> levels_;
};

/// Classical period and revival time from the local Taylor expansion
/// E(I) ~ E + E'(I - Ibar) + E''(I - Ibar)^2: t_cl = 2 pi / |E'|,
/// t_rev = 2 pi / |E''| with E'' the quadratic coefficient (half the second
/// derivative), so the ideal rotor gives E'' = B and t_rev = 2 pi / B.
struct TimeScales {
  double t_cl = 0.0;
  double t_rev = 0.0;
  double i_bar = 0.0;
};

/// For tabulated spectra the differences are taken at the tabulated point
/// nearest i_bar using the table's own step h (h = 1 reproduces the plain
/// central differences; even-I rotational bands have h = 2):
///   E'  = (E_{I+h} - E_{I-h}) / (2h),  E'' = (E_{I+h} - 2 E_I + E_{I-h}) / (2 h^2).
TimeScales timescales(const SpectrumModel& spectrum, double i_bar);

/// Coefficient-wise phase rotation; norm exactly preserved, phases depend on
/// I only. Throws DataError listing missing levels if the spectrum does not
/// cover every I carried by the packet.
WavePacket propagate(const WavePacket& wp, const SpectrumModel& spectrum, double t);

/// <a|b> = sum conj(a_IM) b_IM; packets of different l_max are zero-padded.
std::complex<double> autocorrelation(const WavePacket& wp_a, const WavePacket& wp_b);

namespace detail {
/// exp(-i e t) with the phase reduced mod 2 pi in extended precision, so the
/// group law survives large |e t| at the 1e-13 level.
std::complex<double> unit_phase(double energy, double time);
}  // namespace detail

}  // namespace rotorwp

#endif  // ROTORWP_EVOLUTION_HPP
