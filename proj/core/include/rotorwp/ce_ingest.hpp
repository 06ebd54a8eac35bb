#ifndef ROTORWP_CE_INGEST_HPP
#define ROTORWP_CE_INGEST_HPP

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "rotorwp/evolution.hpp"
#include "rotorwp/wavepacket.hpp"

// File ingestion for experimental rotational bands and Coulomb-excitation
// amplitude tables, plus a Gaussian surrogate generator for the latter.
//
// Formats are plain text, one record per line, '#' starts a comment:
//   levels:     I E_keV                (I even, increasing; ground state 0 0)
//   amplitudes: I M re im              (4 columns)
//               I re im                (3 columns, M defaults to 0)
//               I re                   (2 columns, M = 0, imaginary part 0)
// A comment of the form "# label: <text>" names the data set.

namespace rotorwp {

/// hbar in keV * s; converts tabulated keV energies to phase rates (1/s).
inline constexpr double kHbarKevSeconds = 6.582119569e-19;

struct LevelScheme {
  std::string nucleus_label;
  std::vector<std::pair<int, double>> levels_kev;
  std::string source_note;
};

LevelScheme load_levels(const std::filesystem::path& path);
void save_levels(const LevelScheme& scheme, const std::filesystem::path& path);

/// Spectrum in natural units (hbar = 1, energies in 1/s, times in seconds).
SpectrumModel to_spectrum(const LevelScheme& scheme);

enum class AmplitudeProvenance { file, surrogate };

struct AmplitudeEntry {
  int i = 0;
  int m = 0;
  std::complex<double> amplitude;
};

struct AmplitudeSet {
  std::vector<AmplitudeEntry> entries;   // normalized: sum |amplitude|^2 = 1
  AmplitudeProvenance provenance = AmplitudeProvenance::file;
  double raw_norm_squared = 1.0;         // before normalize-on-load
  std::vector<std::string> warnings;
};

/// Normalizes on load; warns when the raw norm defect exceeds 1e-3 or odd-I
/// entries appear. All-zero tables are rejected with ValidationError.
AmplitudeSet load_amplitudes(const std::filesystem::path& path);
void save_amplitudes(const AmplitudeSet& set, const std::filesystem::path& path);

/// Real Gaussian weights c_I ~ exp(-(I - i_bar)^2 / (2 sigma^2)), M = 0,
/// normalized; even I only by default (ground-band convention).
AmplitudeSet surrogate_amplitudes(double i_bar, double sigma, int i_max,
                                  bool even_only = true);

/// Lossless conversion onto the coefficient table consumed by evolution
/// and carpet.
WavePacket to_wavepacket(const AmplitudeSet& set);

/// Weighted mean of I over |amplitude|^2.
double mean_level_index(const AmplitudeSet& set);

}  // namespace rotorwp

#endif  // ROTORWP_CE_INGEST_HPP
