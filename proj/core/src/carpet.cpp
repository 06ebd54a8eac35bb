#include "rotorwp/carpet.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>

namespace rotorwp {

namespace {

// (I, M) pairs carrying coefficient mass, grouped by M for the synthesis sums.
struct ActiveGroup {
  int m = 0;
  std::vector<int> i_values;
  std::vector<std::size_t> flat_indices;
};

std::vector<ActiveGroup> active_groups(const WavePacket& wp) {
  std::vector<ActiveGroup> groups;
  const int l_max = wp.l_max();
  for (int m = -l_max; m <= l_max; ++m) {
    ActiveGroup group;
    group.m = m;
    for (int i = std::abs(m); i <= l_max; ++i) {
      const std::size_t flat = static_cast<std::size_t>(i) * i + i + m;
      if (wp.coeffs.data()[flat] != std::complex<double>{0.0, 0.0}) {
        group.i_values.push_back(i);
        group.flat_indices.push_back(flat);
      }
    }
    if (!group.i_values.empty()) groups.push_back(std::move(group));
  }
  return groups;
}

// Legendre values for every active (I, M) pair at every node of `x`,
// laid out as table[pair][node] in group order.
std::vector<double> legendre_table(const std::vector<ActiveGroup>& groups, int l_max,
                                   const std::vector<double>& x) {
  std::size_t n_pairs = 0;
  for (const auto& g : groups) n_pairs += g.i_values.size();
  if (n_pairs * x.size() > 200'000'000) {
    throw ResourceError("carpet: Legendre table too large (" + std::to_string(n_pairs) +
                        " pairs x " + std::to_string(x.size()) + " nodes)");
  }

  std::vector<double> table(n_pairs * x.size());
  std::vector<double> column(l_max + 1);
  for (std::size_t j = 0; j < x.size(); ++j) {
    std::size_t row = 0;
    for (const auto& g : groups) {
      const int m_abs = std::abs(g.m);
      normalized_legendre_column(m_abs, l_max, x[j],
                                 std::span<double>(column.data(), l_max - m_abs + 1));
      // Y_I^{-m} theta part equals (-1)^m times the m part; the sign squares
      // away in |.|^2 but is kept so synthesized amplitudes stay exact.
      const double sign = (g.m < 0 && m_abs % 2 == 1) ? -1.0 : 1.0;
      for (std::size_t p = 0; p < g.i_values.size(); ++p) {
        table[(row + p) * x.size() + j] = sign * column[g.i_values[p] - m_abs];
      }
      row += g.i_values.size();
    }
  }
  return table;
}

double density_at(const std::vector<ActiveGroup>& groups, const std::vector<double>& table,
                  const std::vector<std::complex<double>>& coeffs, std::size_t n_nodes,
                  std::size_t node) {
  double sum = 0.0;
  std::size_t row = 0;
  for (const auto& g : groups) {
    std::complex<double> amp{0.0, 0.0};
    for (std::size_t p = 0; p < g.i_values.size(); ++p) {
      amp += coeffs[g.flat_indices[p]] * table[(row + p) * n_nodes + node];
    }
    sum += std::norm(amp);
    row += g.i_values.size();
  }
  return sum;
}

void format_value(std::string& out, double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  out.append(buf, res.ptr);
}

}  // namespace

CarpetGrid carpet(const WavePacket& wp0, const SpectrumModel& spectrum, int theta_count,
                  double t_start, double t_end, int t_count, int n_threads) {
  if (theta_count < 2 || t_count < 2) {
    throw ConfigError("carpet: theta_count and t_count must be >= 2");
  }
  if (static_cast<std::size_t>(theta_count) * t_count > kMaxCarpetCells) {
    throw ConfigError("carpet: grid size " + std::to_string(theta_count) + " x " +
                      std::to_string(t_count) + " exceeds the cell cap");
  }
  if (std::abs(1.0 - wp0.norm_squared()) > 1e-6) {
    throw ValidationError("carpet: initial packet not normalized");
  }
  if (n_threads < 1) n_threads = 1;

  const int l_max = wp0.l_max();
  const auto groups = active_groups(wp0);

  CarpetGrid grid;
  grid.theta_nodes.resize(theta_count);
  std::vector<double> x_plot(theta_count);
  for (int i = 0; i < theta_count; ++i) {
    grid.theta_nodes[i] = std::numbers::pi * i / (theta_count - 1);
    x_plot[i] = std::cos(grid.theta_nodes[i]);
  }
  grid.time_nodes.resize(t_count);
  for (int j = 0; j < t_count; ++j) {
    grid.time_nodes[j] = t_start + (t_end - t_start) * j / (t_count - 1);
  }
  grid.density.assign(static_cast<std::size_t>(theta_count) * t_count, 0.0);
  grid.normalization.assign(t_count, 0.0);

  const auto plot_table = legendre_table(groups, l_max, x_plot);

  // Normalization on a Gauss rule in x = cos(theta): the integrand is a
  // polynomial of degree <= 2 l_max there, so the rule is exact.
  const auto gauss = gauss_legendre(l_max + 1);
  const auto gauss_table = legendre_table(groups, l_max, gauss.nodes);

  // Column worker; columns own disjoint output slots.
  std::atomic<int> next{0};
  const auto work = [&]() {
    for (int j = next.fetch_add(1); j < t_count; j = next.fetch_add(1)) {
      const WavePacket wp_t = propagate(wp0, spectrum, grid.time_nodes[j]);
      const auto& coeffs = wp_t.coeffs.data();
      for (int i = 0; i < theta_count; ++i) {
        const double rho = std::sin(grid.theta_nodes[i]) *
                           density_at(groups, plot_table, coeffs, theta_count, i);
        grid.density[static_cast<std::size_t>(i) * t_count + j] = std::max(0.0, rho);
      }
      double norm = 0.0;
      for (std::size_t gnode = 0; gnode < gauss.nodes.size(); ++gnode) {
        norm += gauss.weights[gnode] *
                density_at(groups, gauss_table, coeffs, gauss.nodes.size(), gnode);
      }
      grid.normalization[j] = norm;
    }
  };

  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return grid;
}

void carpet_export(const CarpetGrid& grid, const std::filesystem::path& path) {
  if (grid.theta_nodes.empty() || grid.time_nodes.empty() || grid.density.empty()) {
    throw ValidationError("carpet_export: refusing to write an empty grid");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("carpet_export: cannot open " + path.string());

  std::string line = "theta";
  for (double t : grid.time_nodes) {
    line.push_back(',');
    format_value(line, t);
  }
  line.push_back('\n');
  out << line;

  for (std::size_t i = 0; i < grid.theta_nodes.size(); ++i) {
    line.clear();
    format_value(line, grid.theta_nodes[i]);
    for (std::size_t j = 0; j < grid.time_nodes.size(); ++j) {
      line.push_back(',');
      format_value(line, grid.at(i, j));
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw IoError("carpet_export: write failed for " + path.string());
}

CarpetGrid carpet_import(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("carpet_import: cannot open " + path.string());

  CarpetGrid grid;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("carpet_import: empty file");
  {
    std::stringstream header(line);
    std::string cell;
    if (!std::getline(header, cell, ',') || cell != "theta") {
      throw ValidationError("carpet_import: missing 'theta' header in " + path.string());
    }
    while (std::getline(header, cell, ',')) {
      grid.time_nodes.push_back(std::stod(cell));
    }
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    grid.theta_nodes.push_back(std::stod(cell));
    std::size_t count = 0;
    while (std::getline(row, cell, ',')) {
      grid.density.push_back(std::stod(cell));
      ++count;
    }
    if (count != grid.time_nodes.size()) {
      throw ValidationError("carpet_import: ragged row in " + path.string());
    }
  }
  return grid;
}

}  // namespace rotorwp
