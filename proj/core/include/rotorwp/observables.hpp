#ifndef ROTORWP_OBSERVABLES_HPP
#define ROTORWP_OBSERVABLES_HPP

#include "rotorwp/wavepacket.hpp"

// Angular-momentum moments on the (I, M) basis via exact ladder-operator
// matrix elements: L_z|IM> = M|IM>, L_pm|IM> = sqrt(I(I+1) - M(M+-1))|I,M+-1>.
// All sums are sparse in the coefficient table, O(number of coefficients).

namespace rotorwp {

struct AngularMomentumStats {
  double mean_lz = 0.0;
  double var_lx = 0.0;
  double var_ly = 0.0;
  double var_lz = 0.0;
  double uncertainty_product = 0.0;   // var_lx * var_ly
  double min_uncertainty_rhs = 0.0;   // (1/4) mean_lz^2
};

/// Throws ValidationError when the packet norm defect exceeds 1e-6.
AngularMomentumStats angular_stats(const WavePacket& wp);

struct EtaEstimates {
  double eta_from_lz = 0.0;     // <L_z> / (2 var(L_y))
  double eta_from_ratio = 0.0;  // sign(eta_from_lz) sqrt(var(L_x) / var(L_y))
};

/// Both ellipticity estimators; exact identities for the coherent-state
/// family. Throws DomainError when var(L_y) degenerates to zero.
EtaEstimates eta_relations(const WavePacket& wp);

}  // namespace rotorwp

#endif  // ROTORWP_OBSERVABLES_HPP
