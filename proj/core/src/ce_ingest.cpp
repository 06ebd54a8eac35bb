#include "rotorwp/ce_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rotorwp {

namespace {

struct ParsedLine {
  int number = 0;
  std::vector<double> fields;
};

// Strips comments, collects "# label:" metadata, splits numeric fields.
std::vector<ParsedLine> read_table(const std::filesystem::path& path, std::string* label,
                                   std::string* note) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<ParsedLine> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string text = raw;
    if (const auto hash = text.find('#'); hash != std::string::npos) {
      std::string comment = text.substr(hash + 1);
      if (const auto tag = comment.find("label:"); tag != std::string::npos && label) {
        std::string value = comment.substr(tag + 6);
        const auto begin = value.find_first_not_of(" \t");
        if (begin != std::string::npos) *label = value.substr(begin);
      } else if (note && !comment.empty()) {
        if (!note->empty()) *note += " ";
        const auto begin = comment.find_first_not_of(" \t");
        if (begin != std::string::npos) *note += comment.substr(begin);
      }
      text = text.substr(0, hash);
    }
    std::istringstream fields(text);
    ParsedLine line;
    line.number = number;
    double value = 0.0;
    while (fields >> value) line.fields.push_back(value);
    if (!fields.eof()) {
      throw ValidationError(path.string() + ":" + std::to_string(number) +
                            ": unparseable field");
    }
    if (!line.fields.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

int to_int(double value, const std::filesystem::path& path, int line) {
  const double rounded = std::round(value);
  if (std::abs(value - rounded) > 1e-9) {
    throw ValidationError(path.string() + ":" + std::to_string(line) +
                          ": expected an integer, got " + std::to_string(value));
  }
  return static_cast<int>(rounded);
}

void write_shortest(std::ostream& out, double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.write(buf, res.ptr - buf);
}

}  // namespace

LevelScheme load_levels(const std::filesystem::path& path) {
  LevelScheme scheme;
  const auto lines = read_table(path, &scheme.nucleus_label, &scheme.source_note);
  if (lines.empty()) throw ValidationError(path.string() + ": no level records");
  if (scheme.nucleus_label.empty()) scheme.nucleus_label = path.stem().string();

  for (const auto& line : lines) {
    if (line.fields.size() != 2) {
      throw ValidationError(path.string() + ":" + std::to_string(line.number) +
                            ": level records need exactly 'I E_keV'");
    }
    const int i = to_int(line.fields[0], path, line.number);
    const double e = line.fields[1];
    if (i < 0 || i % 2 != 0) {
      throw ValidationError(path.string() + ":" + std::to_string(line.number) +
                            ": level I must be an even non-negative integer (I=" +
                            std::to_string(i) + ")");
    }
    if (!scheme.levels_kev.empty()) {
      if (i <= scheme.levels_kev.back().first) {
        throw ValidationError(path.string() + ":" + std::to_string(line.number) +
                              ": level I values must be strictly increasing");
      }
      if (e < scheme.levels_kev.back().second) {
        throw ValidationError(path.string() + ":" + std::to_string(line.number) +
                              ": level energies must be non-decreasing");
      }
    }
    scheme.levels_kev.emplace_back(i, e);
  }
  if (scheme.levels_kev.front() != std::pair<int, double>(0, 0.0)) {
    throw ValidationError(path.string() + ": ground state (I=0, E=0) missing");
  }
  return scheme;
}

void save_levels(const LevelScheme& scheme, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  if (!scheme.nucleus_label.empty()) out << "# label: " << scheme.nucleus_label << "\n";
  if (!scheme.source_note.empty()) out << "# " << scheme.source_note << "\n";
  for (const auto& [i, e] : scheme.levels_kev) {
    out << i << ' ';
    write_shortest(out, e);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

SpectrumModel to_spectrum(const LevelScheme& scheme) {
  std::vector<std::pair<int, double>> levels;
  levels.reserve(scheme.levels_kev.size());
  for (const auto& [i, e_kev] : scheme.levels_kev) {
    levels.emplace_back(i, e_kev / kHbarKevSeconds);
  }
  return SpectrumModel::tabulated(std::move(levels));
}

AmplitudeSet load_amplitudes(const std::filesystem::path& path) {
  AmplitudeSet set;
  set.provenance = AmplitudeProvenance::file;
  std::string label;
  const auto lines = read_table(path, &label, nullptr);
  if (lines.empty()) throw ValidationError(path.string() + ": no amplitude records");

  bool has_odd = false;
  for (const auto& line : lines) {
    AmplitudeEntry entry;
    switch (line.fields.size()) {
      case 2:
        entry.i = to_int(line.fields[0], path, line.number);
        entry.amplitude = {line.fields[1], 0.0};
        break;
      case 3:
        entry.i = to_int(line.fields[0], path, line.number);
        entry.amplitude = {line.fields[1], line.fields[2]};
        break;
      case 4:
        entry.i = to_int(line.fields[0], path, line.number);
        entry.m = to_int(line.fields[1], path, line.number);
        entry.amplitude = {line.fields[2], line.fields[3]};
        break;
      default:
        throw ValidationError(path.string() + ":" + std::to_string(line.number) +
                              ": amplitude records need 2, 3 or 4 fields");
    }
    if (entry.i < 0 || std::abs(entry.m) > entry.i) {
      throw ValidationError(path.string() + ":" + std::to_string(line.number) +
                            ": invalid (I, M) = (" + std::to_string(entry.i) + ", " +
                            std::to_string(entry.m) + ")");
    }
    if (entry.i % 2 != 0) has_odd = true;
    set.entries.push_back(entry);
  }
  if (has_odd) {
    set.warnings.push_back("amplitude table contains odd-I entries");
  }

  double norm = 0.0;
  for (const auto& e : set.entries) norm += std::norm(e.amplitude);
  set.raw_norm_squared = norm;
  if (!(norm > 0.0)) {
    throw ValidationError(path.string() + ": amplitudes are all zero, cannot normalize");
  }
  if (std::abs(1.0 - norm) > 1e-3) {
    set.warnings.push_back("amplitude norm defect " + std::to_string(std::abs(1.0 - norm)) +
                           " exceeded 1e-3; renormalized");
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& e : set.entries) e.amplitude *= scale;
  return set;
}

void save_amplitudes(const AmplitudeSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (const auto& e : set.entries) {
    out << e.i << ' ' << e.m << ' ';
    write_shortest(out, e.amplitude.real());
    out << ' ';
    write_shortest(out, e.amplitude.imag());
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

AmplitudeSet surrogate_amplitudes(double i_bar, double sigma, int i_max, bool even_only) {
  if (!(sigma > 0.0)) throw ValidationError("surrogate_amplitudes: sigma must be positive");
  if (!(i_max >= i_bar)) {
    throw ValidationError("surrogate_amplitudes: i_max must be >= i_bar");
  }

  AmplitudeSet set;
  set.provenance = AmplitudeProvenance::surrogate;
  const int step = even_only ? 2 : 1;
  double norm = 0.0;
  for (int i = 0; i <= i_max; i += step) {
    const double d = (i - i_bar) / sigma;
    const double c = std::exp(-0.5 * d * d);
    if (c > 0.0) {
      set.entries.push_back({i, 0, {c, 0.0}});
      norm += c * c;
    }
  }
  if (!(norm > 0.0)) {
    throw ValidationError("surrogate_amplitudes: all weights vanished after truncation");
  }
  set.raw_norm_squared = norm;
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& e : set.entries) e.amplitude *= scale;
  return set;
}

WavePacket to_wavepacket(const AmplitudeSet& set) {
  int l_max = 0;
  for (const auto& e : set.entries) l_max = std::max(l_max, e.i);
  WavePacket wp;
  wp.coeffs = HarmonicCoeffs(l_max);
  for (const auto& e : set.entries) {
    wp.coeffs.set(e.i, e.m, wp.coeffs.at(e.i, e.m) + e.amplitude);
  }
  wp.norm_defect = 1.0 - wp.coeffs.norm_squared();
  wp.tol = 0.0;
  return wp;
}

double mean_level_index(const AmplitudeSet& set) {
  double mean = 0.0;
  for (const auto& e : set.entries) mean += e.i * std::norm(e.amplitude);
  return mean;
}

}  // namespace rotorwp
