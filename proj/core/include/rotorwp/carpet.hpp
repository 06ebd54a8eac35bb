#ifndef ROTORWP_CARPET_HPP
#define ROTORWP_CARPET_HPP

#include <filesystem>
#include <vector>

#include "rotorwp/evolution.hpp"

// Quantum-carpet grids: the marginal polar density of an evolving packet,
//
//   rho(theta, t) = sin(theta) int_0^{2 pi} |Psi(theta, phi, t)|^2 dphi
//                 = sin(theta) sum_M |sum_I b_IM(t) P_IM(cos theta)|^2,
//
// which reduces to 2 pi sin(theta) |Psi(theta, t)|^2 for cylindrically
// symmetric (M = 0 only) packets. Each column integrates to 1 over theta.

namespace rotorwp {

struct CarpetGrid {
  std::vector<double> theta_nodes;     // uniform, inclusive of 0 and pi
  std::vector<double> time_nodes;      // uniform, inclusive of both ends
  std::vector<double> density;         // row-major [theta][time], >= 0
  std::vector<double> normalization;   // per-column integral of rho over theta

  double at(std::size_t theta_index, std::size_t time_index) const {
    return density[theta_index * time_nodes.size() + time_index];
  }
};

inline constexpr std::size_t kMaxCarpetCells = 10'000'000;

/// Time columns are independent work units; n_threads > 1 computes them
/// concurrently with per-column ownership, and the result does not depend
/// on the worker count. Column normalizations are evaluated on a Gauss
/// quadrature in cos(theta), exact for the band-limited density.
CarpetGrid carpet(const WavePacket& wp0, const SpectrumModel& spectrum, int theta_count,
                  double t_start, double t_end, int t_count, int n_threads = 1);

/// CSV layout: header "theta" followed by the time values; each further row
/// is a theta node followed by the density across times. Locale-independent,
/// 9 significant digits.
void carpet_export(const CarpetGrid& grid, const std::filesystem::path& path);
CarpetGrid carpet_import(const std::filesystem::path& path);

}  // namespace rotorwp

#endif  // ROTORWP_CARPET_HPP
