#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "rdpc/prob.hpp"

namespace rdpc::region {

/// Tuning of the multi-start search behind min_rate and check_membership.
/// Defaults are the validated configuration; results are deterministic
/// functions of the options.
struct SearchOptions {
  int starts = 24;               ///< random restarts beyond the structured seeds
  std::uint64_t seed = 1;        ///< seed of the restart stream
  int max_iterations = 4000;     ///< simplex-search iteration cap per start
  double constraint_tol = 1e-9;  ///< admissible realism gap / distortion excess
  double objective_tol = 1e-10;  ///< candidates this close tie-break lexicographically
  double membership_tol = 1e-6;  ///< rate slack accepted by check_membership
  double coarse_step = 0.02;     ///< grid resolution of the oracle-derived seed
};

/// A point (R, R_c, Delta) to test against the achievable region, with the
/// source, the distortion measure, and the auxiliary cardinality to search.
struct RegionQuery {
  double rate = 0.0;
  double common_rate = 0.0;  ///< may be +infinity
  double distortion = 0.0;
  Distribution source;
  DistortionMeasure d;
  std::size_t aux_size = 0;
};

/// What a candidate triple actually achieves, recomputed from its joint
/// law rather than taken from optimizer state.
struct AchievedPoint {
  double info_xu = 0.0;      ///< I(X;U) in bits
  double info_yu = 0.0;      ///< I(Y;U) in bits
  double distortion = 0.0;   ///< E[d(X,Y)]
  double realism_gap = 0.0;  ///< d_TV(law(Y), source)
};

/// Feasible triple exhibiting one achievable point.
struct RegionWitness {
  TripleJoint triple;
  AchievedPoint achieved;
};

struct MinRateResult {
  bool feasible = false;
  double min_rate = std::numeric_limits<double>::infinity();
  std::size_t aux_size = 0;  ///< searched family; the value is an upper bound at this size
  std::optional<RegionWitness> witness;
};

/// Minimum of max(I(X;U), I(Y;U) - R_c) over pairs (P(u|x), P(y|u)) with
/// E[d(X,Y)] <= delta and law(Y) equal to the source, searched at the given
/// auxiliary cardinality. Heuristic: the value is an upper bound on the
/// true boundary. A delta below the searched family's reach yields
/// feasible = false, which is a report, not a proof of infeasibility.
MinRateResult min_rate(double delta, double common_rate, const Distribution& source,
                       const DistortionMeasure& d, std::size_t aux_size,
                       const SearchOptions& options = {});

/// Returns a witness when the searched family reaches the queried point
/// within membership_tol. Absence of a witness is not a proof of
/// non-membership; the search budget and aux_size bound what was tried.
std::optional<RegionWitness> check_membership(const RegionQuery& query,
                                              const SearchOptions& options = {});

/// One (delta, common_rate) target of a batched oracle sweep.
struct OracleQuery {
  double distortion = 0.0;
  double common_rate = 0.0;  ///< may be +infinity
};

/// Exhaustive grid search for binary alphabets, aux_size <= 3: the P(u|x)
/// rows and all but the last P(y|u) row range over the step-grid and the
/// last row is eliminated by the realism constraint. Returns the best
/// feasible objective per query, +infinity where no grid point is
/// feasible. Throws CapacityError when the grid is too large.
std::vector<double> brute_force_oracle(const Distribution& source, const DistortionMeasure& d,
                                       std::size_t aux_size, double step,
                                       std::span<const OracleQuery> queries);
double brute_force_oracle(double delta, double common_rate, const Distribution& source,
                          const DistortionMeasure& d, std::size_t aux_size, double step);

/// Searches P(y|x) alone for the least I(X;Y) under the same distortion
/// and realism constraints: the U = Y reduction, a cross-check for
/// min_rate at infinite common_rate with aux_size >= |Y|.
double min_rate_direct(double delta, const Distribution& source, const DistortionMeasure& d,
                       const SearchOptions& options = {});

/// Classical rate-distortion function of the source (no realism
/// constraint), by Blahut-Arimoto iterations with a bisected slope.
/// Lower-bounds min_rate at every common_rate. Returns 0 beyond the
/// zero-rate distortion, +infinity below the minimum attainable one.
double classical_rd(const Distribution& source, const DistortionMeasure& d, double delta);

}  // namespace rdpc::region
