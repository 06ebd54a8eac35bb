#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "rotorwp/carpet.hpp"
#include "rotorwp/ce_ingest.hpp"
#include "rotorwp/coherent_state.hpp"

using namespace rotorwp;
using std::numbers::pi;

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "rotorwp_carpet_tests";
  fs::create_directories(dir);
  return dir / name;
}

WavePacket ground_state() {
  WavePacket wp;
  wp.coeffs = HarmonicCoeffs(0);
  wp.coeffs.set(0, 0, {1.0, 0.0});
  return wp;
}

}  // namespace

TEST_SUITE("carpet") {

TEST_CASE("pure Y00 gives the time-independent sin(theta)/2 profile") {
  const auto grid = carpet(ground_state(), SpectrumModel::ideal_rotor(1.0), 41, 0.0, 3.0, 5);
  REQUIRE(grid.theta_nodes.size() == 41u);
  REQUIRE(grid.time_nodes.size() == 5u);
  for (std::size_t i = 0; i < grid.theta_nodes.size(); ++i) {
    for (std::size_t j = 0; j < grid.time_nodes.size(); ++j) {
      CHECK(std::abs(grid.at(i, j) - 0.5 * std::sin(grid.theta_nodes[i])) < 1e-14);
    }
  }
  for (double norm : grid.normalization) {
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("linear coherent state: the t_rev column equals the initial column") {
  const auto wp = expand_cs({12.0, 0.0}, 40, 1e-9);
  const auto spectrum = SpectrumModel::ideal_rotor(1.0);
  const double t_rev = 2.0 * pi;
  const auto grid = carpet(wp, spectrum, 101, 0.0, t_rev, 9);
  const std::size_t last = grid.time_nodes.size() - 1;
  for (std::size_t i = 0; i < grid.theta_nodes.size(); ++i) {
    CHECK(std::abs(grid.at(i, 0) - grid.at(i, last)) < 1e-10);
  }
}

TEST_CASE("per-column normalization holds to 1e-6 for evolving packets") {
  const auto wp = expand_cs({10.0, 0.45}, 36, 1e-9);
  const auto grid = carpet(wp, SpectrumModel::ideal_rotor(1.0), 61, 0.0, 2.0, 7);
  for (double norm : grid.normalization) {
    CHECK(std::abs(norm - 1.0) < 1e-6);
  }
  for (double rho : grid.density) CHECK(rho >= 0.0);
}

TEST_CASE("symmetric-packet shortcut agrees with the general marginal") {
  // for an M = 0 packet, rho(theta, t) must equal 2 pi sin(theta) |Psi(theta, 0, t)|^2
  const auto wp = expand_cs({8.0, 0.0}, 32, 1e-9);
  const auto spectrum = SpectrumModel::ideal_rotor(1.0);
  const double t = 0.83;
  const auto grid = carpet(wp, spectrum, 33, t, t + 1.0, 2);
  const auto wp_t = propagate(wp, spectrum, t);
  for (std::size_t i = 0; i < grid.theta_nodes.size(); ++i) {
    const double theta = grid.theta_nodes[i];
    const double direct =
        2.0 * pi * std::sin(theta) * std::norm(synthesize(wp_t.coeffs, theta, 0.0));
    CHECK(std::abs(grid.at(i, 0) - direct) < 1e-10);
  }
}

TEST_CASE("doubling the plot resolution does not move the column integrals") {
  const auto wp = expand_cs({6.0, 0.3}, 24, 1e-8);
  const auto spectrum = SpectrumModel::ideal_rotor(1.0);
  const auto coarse = carpet(wp, spectrum, 60, 0.0, 1.0, 3);
  const auto fine = carpet(wp, spectrum, 120, 0.0, 1.0, 3);
  for (std::size_t j = 0; j < coarse.normalization.size(); ++j) {
    CHECK(std::abs(coarse.normalization[j] - fine.normalization[j]) < 1e-8);
  }
}

TEST_CASE("column parallelism does not change the grid") {
  const auto wp = expand_cs({7.0, 0.6}, 28, 1e-8);
  const auto spectrum = SpectrumModel::ideal_rotor(1.0);
  const auto serial = carpet(wp, spectrum, 41, 0.0, 4.0, 17, 1);
  const auto parallel = carpet(wp, spectrum, 41, 0.0, 4.0, 17, 4);
  REQUIRE(serial.density.size() == parallel.density.size());
  for (std::size_t k = 0; k < serial.density.size(); ++k) {
    CHECK(serial.density[k] == parallel.density[k]);
  }
}

TEST_CASE("configuration guards") {
  const auto wp = ground_state();
  const auto spectrum = SpectrumModel::ideal_rotor(1.0);
  CHECK_THROWS_AS(carpet(wp, spectrum, 1, 0.0, 1.0, 4), ConfigError);
  CHECK_THROWS_AS(carpet(wp, spectrum, 4, 0.0, 1.0, 1), ConfigError);
  CHECK_THROWS_AS(carpet(wp, spectrum, 100000, 0.0, 1.0, 200), ConfigError);

  WavePacket bad;
  bad.coeffs = HarmonicCoeffs(1);
  bad.coeffs.set(1, 0, {0.3, 0.0});
  CHECK_THROWS_AS(carpet(bad, spectrum, 10, 0.0, 1.0, 3), ValidationError);
}

TEST_CASE("csv export round-trips a small grid exactly") {
  CarpetGrid grid;
  grid.theta_nodes = {0.25, 0.75};
  grid.time_nodes = {0.0, 0.5};
  grid.density = {0.125, 0.25, 0.375, 0.5};
  grid.normalization = {1.0, 1.0};

  const auto path = temp_file("roundtrip.csv");
  carpet_export(grid, path);
  const auto back = carpet_import(path);
  REQUIRE(back.theta_nodes == grid.theta_nodes);
  REQUIRE(back.time_nodes == grid.time_nodes);
  REQUIRE(back.density == grid.density);
}

TEST_CASE("re-imported production carpet keeps its column normalization") {
  const auto wp = expand_cs({9.0, 0.0}, 34, 1e-9);
  const auto grid = carpet(wp, SpectrumModel::ideal_rotor(1.0), 401, 0.0, 2.0, 5);
  const auto path = temp_file("norm_check.csv");
  carpet_export(grid, path);
  const auto back = carpet_import(path);

  // integrate the re-imported columns with the trapezoid rule on theta
  const double h = back.theta_nodes[1] - back.theta_nodes[0];
  for (std::size_t j = 0; j < back.time_nodes.size(); ++j) {
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < back.theta_nodes.size(); ++i) {
      integral += 0.5 * h * (back.at(i, j) + back.at(i + 1, j));
    }
    CHECK(std::abs(integral - 1.0) < 1e-4);           // trapezoid-limited
    CHECK(std::abs(grid.normalization[j] - 1.0) < 1e-6);  // exact Gauss integral
  }
}

TEST_CASE("export refuses empty grids and bad paths") {
  CarpetGrid empty;
  CHECK_THROWS_AS(carpet_export(empty, temp_file("never.csv")), ValidationError);

  CarpetGrid grid;
  grid.theta_nodes = {0.5};
  grid.time_nodes = {0.0};
  grid.density = {1.0};
  CHECK_THROWS_AS(carpet_export(grid, "/nonexistent_dir_zzz/file.csv"), IoError);
  CHECK_THROWS_AS(carpet_import("/nonexistent_dir_zzz/file.csv"), IoError);
}

}  // TEST_SUITE
