#include "rotorwp/coherent_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rotorwp {

namespace {

double norm_prefactor(double n) {
  return std::sqrt(n / (2.0 * std::numbers::pi * std::sinh(2.0 * n)));
}

// Smallest order beyond which the state carries no coefficient mass above
// `floor`. Uses the circular-state weights w_I = (2N)^{2I+1} / ((2I+1)! sinh 2N),
// whose tail bounds the linear and elliptic cases as well; iterated in logs.
int bandwidth(double n, double log_floor) {
  const double x = 2.0 * n;
  double log_w = std::log(x) - std::log(std::sinh(x));  // I = 0 term
  int i = 0;
  while (log_w > log_floor || i < 4) {
    ++i;
    log_w += 2.0 * std::log(x) - std::log(2.0 * i) - std::log(2.0 * i + 1.0);
    if (i > 4 * kMaxExpansionOrder) break;
  }
  return i;
}

// Coefficients and defect without the tolerance check; shared by expand_cs
// and suggest_lmax. The grid is sized from the state's own bandwidth so the
// computed coefficients are accurate regardless of the truncation order.
WavePacket expand_unchecked(const CoherentStateParams& params, int l_max, double tol) {
  const int band = std::max(l_max, bandwidth(params.n, std::log(1e-30)));
  const auto grid = QuadratureGrid::build(band + 1, 2 * band + 1);
  const auto f = [&params](double theta, double phi) {
    return canonical_cs_amplitude(params, theta, phi);
  };
  WavePacket wp;
  wp.coeffs = project(f, l_max, grid);
  wp.tol = tol;
  wp.norm_defect = 1.0 - wp.coeffs.norm_squared();
  return wp;
}

}  // namespace

void validate(const CoherentStateParams& params) {
  if (!(params.n > 0.0)) {
    throw ValidationError("coherent state: N must be positive (N=" + std::to_string(params.n) + ")");
  }
  if (!(std::abs(params.eta) <= 1.0)) {
    throw ValidationError("coherent state: eta outside [-1, 1] (eta=" + std::to_string(params.eta) +
                          ")");
  }
}

std::complex<double> evaluate_cs(const CoherentStateParams& params, double theta, double phi) {
  validate(params);
  const double s = params.n * std::sin(theta);
  const double re = s * std::cos(phi);
  const double im = params.eta * s * std::sin(phi);
  return norm_prefactor(params.n) * std::exp(re) * std::polar(1.0, im);
}

std::complex<double> canonical_cs_amplitude(const CoherentStateParams& params, double theta,
                                            double phi) {
  validate(params);
  if (params.eta == 0.0) {
    return {norm_prefactor(params.n) * std::exp(params.n * std::cos(theta)), 0.0};
  }
  return evaluate_cs(params, theta, phi);
}

WavePacket expand_cs(const CoherentStateParams& params, int l_max, double tol,
                     bool renormalize) {
  validate(params);
  if (l_max < 0) throw DomainError("expand_cs: l_max must be >= 0");
  if (!(tol > 0.0)) throw ValidationError("expand_cs: tol must be positive");

  WavePacket wp = expand_unchecked(params, l_max, tol);
  if (!(wp.norm_defect < tol)) {
    throw TruncationError("expand_cs: tolerance " + std::to_string(tol) +
                              " unreachable at l_max=" + std::to_string(l_max) +
                              " (achieved defect " + std::to_string(wp.norm_defect) + ")",
                          wp.norm_defect);
  }
  if (renormalize) {
    const double scale = 1.0 / std::sqrt(wp.coeffs.norm_squared());
    for (auto& c : wp.coeffs.data()) c *= scale;
  }
  return wp;
}

int suggest_lmax(const CoherentStateParams& params, double tol) {
  validate(params);
  if (!(tol > 0.0)) throw ValidationError("suggest_lmax: tol must be positive");

  const auto defect_at = [&](int l) {
    return expand_unchecked(params, l, tol).norm_defect;
  };

  int lo = 0;
  int hi = 8;
  while (!(defect_at(hi) < tol)) {
    lo = hi;
    if (hi >= kMaxExpansionOrder) {
      throw ResourceError("suggest_lmax: tolerance " + std::to_string(tol) +
                          " not reachable within l_max <= " +
                          std::to_string(kMaxExpansionOrder));
    }
    hi = std::min(2 * hi, kMaxExpansionOrder);
  }
  // Defect is non-increasing in l_max; bisect for the smallest passing order.
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (defect_at(mid) < tol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace rotorwp
