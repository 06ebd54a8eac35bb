#ifndef ROTORWP_WAVEPACKET_HPP
#define ROTORWP_WAVEPACKET_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rotorwp/sphere_basis.hpp"

namespace rotorwp {

/// Truncated spherical-harmonic expansion of a state at one instant.
/// norm_defect records 1 - sum |b_IM|^2 at construction time; it is kept
/// even when the packet is renormalized so truncation error stays visible.
struct WavePacket {
  HarmonicCoeffs coeffs;
  double norm_defect = 0.0;
  double tol = 0.0;

  int l_max() const { return coeffs.l_max(); }
  std::complex<double> coefficient(int i, int m) const { return coeffs.at(i, m); }
  double norm_squared() const { return coeffs.norm_squared(); }
};

/// Mean total angular momentum index <I> = sum_I I sum_M |b_IM|^2.
double mean_level_index(const WavePacket& wp);

/// JSON interchange format: {l_max, tol, norm_defect, coeffs: [[I, M, re, im], ...]}.
/// Only structurally nonzero coefficients are listed, ordered by I then M.
std::string to_json_string(const WavePacket& wp);
WavePacket wavepacket_from_json(const std::string& text);

void save_wavepacket(const WavePacket& wp, const std::filesystem::path& path);
WavePacket load_wavepacket(const std::filesystem::path& path);

}  // namespace rotorwp

#endif  // ROTORWP_WAVEPACKET_HPP
