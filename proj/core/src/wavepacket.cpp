#include "rotorwp/wavepacket.hpp"

#include <fstream>
#include <json.hpp>

namespace rotorwp {

double mean_level_index(const WavePacket& wp) {
  double mean = 0.0;
  const auto& data = wp.coeffs.data();
  for (int i = 0; i <= wp.l_max(); ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * i + i;
    for (int m = -i; m <= i; ++m) {
      mean += i * std::norm(data[base + m]);
    }
  }
  return mean;
}

std::string to_json_string(const WavePacket& wp) {
  nlohmann::json doc;
  doc["l_max"] = wp.l_max();
  doc["tol"] = wp.tol;
  doc["norm_defect"] = wp.norm_defect;
  nlohmann::json coeffs = nlohmann::json::array();
  for (int i = 0; i <= wp.l_max(); ++i) {
    for (int m = -i; m <= i; ++m) {
      const auto c = wp.coeffs.at(i, m);
      if (c == std::complex<double>{0.0, 0.0}) continue;
      coeffs.push_back({i, m, c.real(), c.imag()});
    }
  }
  doc["coeffs"] = std::move(coeffs);
  return doc.dump(2);
}

WavePacket wavepacket_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("wavepacket JSON parse failed: ") + e.what());
  }
  if (!doc.contains("l_max") || !doc.contains("coeffs")) {
    throw ValidationError("wavepacket JSON missing l_max or coeffs");
  }
  WavePacket wp;
  wp.coeffs = HarmonicCoeffs(doc["l_max"].get<int>());
  wp.tol = doc.value("tol", 0.0);
  wp.norm_defect = doc.value("norm_defect", 0.0);
  for (const auto& entry : doc["coeffs"]) {
    if (!entry.is_array() || entry.size() != 4) {
      throw ValidationError("wavepacket JSON coeffs entries must be [I, M, re, im]");
    }
    const int i = entry[0].get<int>();
    const int m = entry[1].get<int>();
    wp.coeffs.set(i, m, {entry[2].get<double>(), entry[3].get<double>()});
  }
  return wp;
}

void save_wavepacket(const WavePacket& wp, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << to_json_string(wp) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

WavePacket load_wavepacket(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return wavepacket_from_json(text);
}

}  // namespace rotorwp
