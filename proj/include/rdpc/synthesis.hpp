#pragma once

#include <cstdint>
#include <vector>

#include "rdpc/prob.hpp"
#include "rdpc/rng.hpp"

namespace rdpc::synthesis {

/// Configuration of one finite-blocklength run of the random-codebook
/// achievability scheme.
struct SimConfig {
  /// Distortion defaults to Hamming on the working alphabets.
  explicit SimConfig(TripleJoint triple_law);
  SimConfig(TripleJoint triple_law, DistortionMeasure distortion_measure);

  int blocklength = 1;          ///< n
  double rate = 0.0;            ///< R, bits per symbol
  double common_rate = 0.0;     ///< R_c, bits per symbol (finite)
  double slack = 0.01;          ///< epsilon; codebook sizes use R+eps, R_c+eps
  TripleJoint triple;           ///< source law and the two synthesis channels
  DistortionMeasure distortion; ///< per-letter distortion table
  std::uint64_t seed = 0;       ///< master seed; all streams derive from it
  std::int64_t mc_samples = 10000;   ///< end-to-end Monte Carlo passes
  std::size_t outcome_cap = kDefaultOutcomeCap;  ///< exact-enumeration cap
  std::size_t codebook_cap = std::size_t{1} << 28;  ///< cap on M*K*n symbols

  /// floor(2^(n (R + eps))), the number of messages.
  std::int64_t num_messages() const;
  /// floor(2^(n (R_c + eps))), the number of common-randomness indices.
  std::int64_t num_common() const;
};

/// Table of auxiliary sequences u^n(i, j), messages by common-randomness
/// indices, each entry an n-sequence over the auxiliary alphabet.
class Codebook {
 public:
  Codebook(std::int64_t num_messages, std::int64_t num_common, int blocklength,
           std::size_t aux_alphabet, std::vector<int> symbols);

  std::int64_t num_messages() const { return num_messages_; }
  std::int64_t num_common() const { return num_common_; }
  int blocklength() const { return blocklength_; }
  std::size_t aux_alphabet() const { return aux_alphabet_; }

  int symbol(std::int64_t i, std::int64_t j, int t) const {
    return symbols_[(static_cast<std::size_t>(i) * static_cast<std::size_t>(num_common_) +
                     static_cast<std::size_t>(j)) * static_cast<std::size_t>(blocklength_) +
                    static_cast<std::size_t>(t)];
  }

 private:
  std::int64_t num_messages_, num_common_;
  int blocklength_;
  std::size_t aux_alphabet_;
  std::vector<int> symbols_;
};

/// One blocklength of a sweep.
struct TracePoint {
  int blocklength = 0;
  double tv_gap = 0.0;       ///< median over replicates
  double tv_ci = 0.0;        ///< confidence radius (0 in exact mode)
  double distortion = 0.0;   ///< mean over replicates
};

/// Realism and distortion measurements of one simulated code.
struct SimReport {
  double tv_gap = 0.0;             ///< d_TV(P^n, induced output law)
  double tv_ci = 0.0;              ///< Monte Carlo confidence radius; 0 when exact
  bool tv_exact = true;            ///< whether tv_gap was enumerated exactly
  double distortion = 0.0;         ///< empirical mean of (1/n) sum d(X_t, Y_t)
  double distortion_stderr = 0.0;  ///< standard error of the mean
  std::int64_t num_messages = 0;
  std::int64_t num_common = 0;
  std::uint64_t seed = 0;
  std::vector<TracePoint> trace;   ///< filled by sweep()
};

/// Draws the codebook entries i.i.d. from the auxiliary marginal of
/// cfg.triple. Deterministic given cfg.seed.
Codebook sample_codebook(const SimConfig& cfg);

/// Posterior over messages used by the likelihood encoder: proportional to
/// the product of reverse-channel likelihoods of x^n under codeword (i, j).
/// Falls back to uniform when every likelihood underflows to zero.
Distribution likelihood_encoder(const SimConfig& cfg, const Codebook& codebook,
                                const std::vector<int>& source_sequence, std::int64_t j);

/// Passes codeword (i, j) through the memoryless synthesis channel.
std::vector<int> decode(const SimConfig& cfg, const Codebook& codebook, std::int64_t i,
                        std::int64_t j, RngStream& stream);

/// Exact mixture pmf over reconstruction sequences:
/// (1 / (M K)) sum_{i,j} prod_t P(y_t | u_t(i,j)).
Distribution exact_output_law(const SimConfig& cfg, const Codebook& codebook);

/// Runs one simulated code: realism gap (exact when enumerable, Monte
/// Carlo otherwise) plus end-to-end empirical distortion.
SimReport run(const SimConfig& cfg);

/// Runs `run` per blocklength with derived sub-seeds; `replicates`
/// codebook draws per blocklength are aggregated by median (tv_gap) and
/// mean (distortion).
std::vector<TracePoint> sweep(const SimConfig& cfg, const std::vector<int>& blocklengths,
                              int replicates = 1);

}  // namespace rdpc::synthesis
