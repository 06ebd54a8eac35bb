#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "rotorwp/ce_ingest.hpp"
#include "rotorwp/evolution.hpp"

using namespace rotorwp;

namespace {

namespace fs = std::filesystem;

fs::path write_file(const std::string& name, const std::string& contents) {
  const auto dir = fs::temp_directory_path() / "rotorwp_ingest_tests";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << contents;
  return path;
}

const fs::path kU238Levels = fs::path(ROTORWP_TEST_DATA_DIR) / "u238_gsb_levels.dat";

}  // namespace

TEST_SUITE("ce_ingest") {

TEST_CASE("load_levels parses a small band") {
  const auto path = write_file("band.dat",
                               "# label: test band\n"
                               "0 0.0\n"
                               "2 44.9\n"
                               "4 148.4\n");
  const auto scheme = load_levels(path);
  CHECK(scheme.nucleus_label == "test band");
  REQUIRE(scheme.levels_kev.size() == 3u);
  CHECK(scheme.levels_kev[1] == std::pair<int, double>{2, 44.9});
  CHECK(scheme.levels_kev[2] == std::pair<int, double>{4, 148.4});
}

TEST_CASE("load_levels rejects invalid tables") {
  CHECK_THROWS_AS(load_levels(write_file("empty.dat", "# nothing here\n")), ValidationError);
  CHECK_THROWS_AS(load_levels(write_file("decreasing.dat", "0 0\n2 50\n4 40\n")),
                  ValidationError);
  CHECK_THROWS_AS(load_levels(write_file("no_ground.dat", "2 44.9\n4 148.4\n")),
                  ValidationError);
  CHECK_THROWS_AS(load_levels(write_file("odd.dat", "0 0\n1 10\n")), ValidationError);
  CHECK_THROWS_AS(load_levels(write_file("bad_field.dat", "0 0\n2 44.9 extra junk\n")),
                  ValidationError);
  CHECK_THROWS_AS(load_levels("/nonexistent_zzz/levels.dat"), IoError);

  // parse errors carry the line number
  try {
    load_levels(write_file("lineno.dat", "0 0\n2 abc\n"));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("level scheme round-trips through save and load") {
  const auto scheme = load_levels(kU238Levels);
  const auto copy_path = write_file("u238_copy.dat", "");
  save_levels(scheme, copy_path);
  const auto back = load_levels(copy_path);
  CHECK(back.nucleus_label == scheme.nucleus_label);
  REQUIRE(back.levels_kev == scheme.levels_kev);
}

TEST_CASE("u238 band converts to a usable spectrum in seconds") {
  const auto scheme = load_levels(kU238Levels);
  const auto spectrum = to_spectrum(scheme);
  CHECK(spectrum.energy(2) == doctest::Approx(44.92 / kHbarKevSeconds).epsilon(1e-12));

  const auto scales = timescales(spectrum, 10.0);
  CHECK(scales.t_rev > 1e-20);
  CHECK(scales.t_rev < 1e-18);
  CHECK(scales.t_cl > 1e-21);
  CHECK(scales.t_cl < 1e-19);
  CHECK(scales.t_cl < scales.t_rev);
}

TEST_CASE("load_amplitudes normalizes and keeps ratios") {
  const auto path = write_file("amps2.dat", "0 0.6\n2 0.8\n");
  const auto set = load_amplitudes(path);
  REQUIRE(set.entries.size() == 2u);
  CHECK(std::norm(set.entries[0].amplitude) + std::norm(set.entries[1].amplitude) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(set.entries[1].amplitude.real() / set.entries[0].amplitude.real() ==
        doctest::Approx(0.8 / 0.6).epsilon(1e-14));
  CHECK(set.entries[0].m == 0);
  CHECK(set.provenance == AmplitudeProvenance::file);
}

TEST_CASE("column formats: 2, 3 and 4 fields") {
  const auto set3 = load_amplitudes(write_file("amps3.dat", "0 0.6 0.1\n2 0.7 -0.2\n"));
  CHECK(set3.entries[0].m == 0);
  CHECK(set3.entries[1].amplitude.imag() < 0.0);

  const auto set4 = load_amplitudes(write_file("amps4.dat", "2 1 0.5 0.0\n3 -2 0.5 0.5\n"));
  CHECK(set4.entries[0].m == 1);
  CHECK(set4.entries[1].m == -2);

  CHECK_THROWS_AS(load_amplitudes(write_file("amps5.dat", "1 2 3 4 5\n")), ValidationError);
  CHECK_THROWS_AS(load_amplitudes(write_file("badm.dat", "1 2 0.5 0.0\n")), ValidationError);
}

TEST_CASE("odd-I amplitudes warn but load; zero tables are rejected") {
  const auto odd = load_amplitudes(write_file("odd_amps.dat", "0 0.5\n1 0.5\n2 0.5\n"));
  bool warned = false;
  for (const auto& w : odd.warnings) warned |= w.find("odd-I") != std::string::npos;
  CHECK(warned);

  CHECK_THROWS_AS(load_amplitudes(write_file("zero.dat", "0 0\n2 0\n")), ValidationError);

  const auto skewed = load_amplitudes(write_file("skewed.dat", "0 3.0\n2 4.0\n"));
  bool norm_warning = false;
  for (const auto& w : skewed.warnings) norm_warning |= w.find("norm defect") != std::string::npos;
  CHECK(norm_warning);
  CHECK(skewed.raw_norm_squared == doctest::Approx(25.0).epsilon(1e-14));
}

TEST_CASE("amplitudes round-trip through save and load to 1e-12") {
  const auto set = surrogate_amplitudes(9.0, 2.5, 24, true);
  const auto path = write_file("surrogate_copy.dat", "");
  save_amplitudes(set, path);
  const auto back = load_amplitudes(path);
  REQUIRE(back.entries.size() == set.entries.size());
  for (std::size_t k = 0; k < set.entries.size(); ++k) {
    CHECK(back.entries[k].i == set.entries[k].i);
    CHECK(back.entries[k].m == set.entries[k].m);
    CHECK(std::abs(back.entries[k].amplitude - set.entries[k].amplitude) < 1e-12);
  }
}

TEST_CASE("surrogate weights peak at i_bar with unit norm") {
  const auto set = surrogate_amplitudes(10.0, 3.0, 40, true);
  double norm = 0.0;
  double best_weight = -1.0;
  int best_i = -1;
  for (const auto& e : set.entries) {
    CHECK(e.m == 0);
    CHECK(e.i % 2 == 0);
    norm += std::norm(e.amplitude);
    if (std::norm(e.amplitude) > best_weight) {
      best_weight = std::norm(e.amplitude);
      best_i = e.i;
    }
  }
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(best_i == 10);
  CHECK(std::abs(mean_level_index(set) - 10.0) < 0.5);
  CHECK(set.provenance == AmplitudeProvenance::surrogate);

  // symmetric falloff around the peak
  const auto weight_at = [&](int i) {
    for (const auto& e : set.entries) {
      if (e.i == i) return std::norm(e.amplitude);
    }
    return 0.0;
  };
  CHECK(weight_at(8) == doctest::Approx(weight_at(12)).epsilon(1e-12));
  CHECK(weight_at(6) == doctest::Approx(weight_at(14)).epsilon(1e-12));
}

TEST_CASE("surrogate includes odd I on request and validates inputs") {
  const auto all = surrogate_amplitudes(7.0, 2.0, 15, false);
  bool has_odd = false;
  for (const auto& e : all.entries) has_odd |= (e.i % 2 == 1);
  CHECK(has_odd);

  CHECK_THROWS_AS(surrogate_amplitudes(10.0, 0.0, 40, true), ValidationError);
  CHECK_THROWS_AS(surrogate_amplitudes(10.0, 3.0, 5, true), ValidationError);
  // a needle between even grid points underflows every weight
  CHECK_THROWS_AS(surrogate_amplitudes(3999.0, 0.001, 4000, true), ValidationError);
}

TEST_CASE("amplitude sets convert losslessly to wave packets") {
  const auto set = surrogate_amplitudes(10.0, 3.0, 40, true);
  const auto wp = to_wavepacket(set);
  CHECK(wp.l_max() == 40);
  CHECK(std::abs(wp.norm_squared() - 1.0) < 1e-14);
  for (const auto& e : set.entries) {
    CHECK(wp.coefficient(e.i, e.m) == e.amplitude);
  }
  CHECK(mean_level_index(wp) == doctest::Approx(mean_level_index(set)).epsilon(1e-14));

  // the packet is consumable by the evolution kernel
  std::vector<std::pair<int, double>> levels;
  for (int i = 0; i <= 40; i += 2) levels.emplace_back(i, static_cast<double>(i) * (i + 1));
  CHECK_NOTHROW(propagate(wp, SpectrumModel::tabulated(levels), 0.5));
}

}  // TEST_SUITE
