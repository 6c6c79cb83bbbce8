#pragma once

#include <cstddef>
#include <vector>

#include "rdpc/prob.hpp"

namespace rdpc::upgrade {

/// A decoder viewed as a channel from flattened (message, common
/// randomness) pairs to the working alphabet, together with the joint law
/// of the pairs and the target output law.
struct UpgradeInput {
  Distribution target;   ///< law the reconstruction must match exactly
  Channel decoder;       ///< rows indexed by flattened (i, j) pairs
  Distribution weights;  ///< joint law of the (i, j) pairs
};

/// Result of the decoder transformation. `upgraded` mixes back to `target`
/// exactly; the bookkeeping fields certify how little each row moved.
struct UpgradeOutput {
  Channel upgraded;               ///< adjusted decoder rows
  std::vector<std::size_t> plus_set;  ///< symbols where the mixture overshoots
  std::vector<double> theta;      ///< per-symbol keep ratio, aligned with plus_set
  std::vector<double> phi;        ///< per-row leaked mass, one per (i, j) pair
  Distribution residual;          ///< where leaked mass is redeposited
  double tv_before;               ///< d_TV(target, induced marginal)
};

/// Certificate that the row-wise maximal couplings realize the global
/// total-variation identity.
struct CouplingCertificate {
  double mismatch_probability;  ///< Pr(Y != Y~) under per-row maximal couplings
  double tv_before;             ///< d_TV(target, induced marginal)
};

/// Mixture marginal PW(y) = sum_r weights(r) W(y|r).
Distribution induced_marginal(const UpgradeInput& input);

/// Builds the alternate decoder: rows are scaled down on overshoot symbols
/// by theta_y and the leaked mass phi_r is redeposited along the residual
/// distribution. The weighted mixture of the new rows equals the target
/// exactly. A decoder that already matches is returned unchanged.
UpgradeOutput upgrade(const UpgradeInput& input);

/// Couples each original row with its upgraded row maximally and checks
/// the weighted mismatch probability equals tv_before.
CouplingCertificate coupling_certificate(const UpgradeInput& input, const UpgradeOutput& output);

/// Upper bound max(d) * tv_before on the distortion increase caused by the
/// upgrade, valid for bounded distortion on finite alphabets.
double distortion_delta_bound(const UpgradeInput& input, const UpgradeOutput& output,
                              const DistortionMeasure& d);

}  // namespace rdpc::upgrade
