#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rdpc/matrix.hpp"

namespace rdpc {

/// Absolute tolerance for all probability validity checks.
inline constexpr double kProbTolerance = 1e-12;

/// Sum drift below this is silently renormalized at construction;
/// anything larger is rejected.
inline constexpr double kRenormalizeDrift = 1e-9;

/// Default cap on the number of outcomes of a product extension.
inline constexpr std::size_t kDefaultOutcomeCap = std::size_t{1} << 24;

/// Thrown when an operation would exceed a configured memory cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probability mass function over a finite alphabet {0, ..., k-1}.
/// Immutable after construction. Entries are nonnegative and sum to 1
/// within kProbTolerance; drift below kRenormalizeDrift is renormalized
/// once at construction, larger drift is rejected.
class Distribution {
 public:
  explicit Distribution(std::vector<double> mass);

  static Distribution uniform(std::size_t alphabet_size);
  static Distribution point_mass(std::size_t alphabet_size, std::size_t atom);

  std::size_t size() const { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }
  const std::vector<double>& mass() const { return mass_; }

  /// Shannon entropy in bits, with 0 log 0 = 0.
  double entropy_bits() const;

 private:
  std::vector<double> mass_;
};

/// Row-stochastic conditional probability table: one Distribution over
/// outputs per input symbol.
class Channel {
 public:
  Channel(std::size_t input_size, std::size_t output_size, std::vector<double> row_major);
  explicit Channel(const std::vector<std::vector<double>>& rows);

  static Channel identity(std::size_t alphabet_size);

  std::size_t input_size() const { return input_size_; }
  std::size_t output_size() const { return output_size_; }

  double at(std::size_t input, std::size_t output) const {
    return table_(input, output);
  }
  std::span<const double> row(std::size_t input) const {
    return {table_.data().data() + input * output_size_, output_size_};
  }
  Distribution row_distribution(std::size_t input) const;

  /// Output marginal induced by an input distribution.
  Distribution apply(const Distribution& input) const;

  const Matrix& table() const { return table_; }

 private:
  std::size_t input_size_, output_size_;
  Matrix table_;
};

/// Chains two channels: symbols pass through `first`, then `second`.
Channel compose(const Channel& first, const Channel& second);

/// Nonnegative distortion table indexed by (source symbol, reconstruction
/// symbol).
class DistortionMeasure {
 public:
  explicit DistortionMeasure(Matrix table);
  explicit DistortionMeasure(const std::vector<std::vector<double>>& rows);

  static DistortionMeasure hamming(std::size_t alphabet_size);

  std::size_t source_size() const { return table_.rows(); }
  std::size_t reconstruction_size() const { return table_.cols(); }
  double at(std::size_t x, std::size_t y) const { return table_(x, y); }
  double max_entry() const { return max_entry_; }
  const Matrix& table() const { return table_; }

 private:
  Matrix table_;
  double max_entry_;
};

/// Joint pmf over a pair of alphabets whose marginals match two given
/// distributions within kProbTolerance.
class Coupling {
 public:
  Coupling(Matrix joint, const Distribution& first, const Distribution& second);

  const Matrix& joint() const { return joint_; }
  Distribution first_marginal() const;
  Distribution second_marginal() const;

  /// Pr(first != second). Requires a square coupling (common alphabet).
  double mismatch_probability() const;

 private:
  Matrix joint_;
};

/// Joint law of (X, U, Y) stored in factored form P(x) P(u|x) P(y|u);
/// the Markov chain X - U - Y holds structurally.
class TripleJoint {
 public:
  TripleJoint(Distribution source, Channel forward, Channel synthesis);

  const Distribution& source() const { return source_; }
  const Channel& forward() const { return forward_; }
  const Channel& synthesis() const { return synthesis_; }

  Distribution u_marginal() const;
  Distribution y_marginal() const;

  Matrix joint_xu() const;
  Matrix joint_uy() const;
  Matrix joint_xy() const;

  /// Reverse channel P(x|u) by Bayes. Rows for zero-mass u symbols are
  /// uniform; they carry no probability and are never sampled.
  Channel reverse_forward() const;

 private:
  Distribution source_;
  Channel forward_;
  Channel synthesis_;
};

/// Total variation distance; for finite alphabets this equals half the
/// L1 distance between the mass vectors.
double tv_distance(const Distribution& p, const Distribution& q);

/// Standard maximal coupling: min(p, q) on the diagonal, residuals
/// distributed proportionally off-diagonal. Mismatch probability equals
/// tv_distance(p, q).
Coupling maximal_coupling(const Distribution& p, const Distribution& q);

/// Mutual information in bits of a bivariate joint pmf, with the
/// 0 log 0 = 0 convention.
double mutual_information(const Matrix& joint);

/// Expected distortion sum p(x,y) d(x,y) of a joint pmf.
double expected_distortion(const Matrix& joint, const DistortionMeasure& d);

/// n-fold i.i.d. product pmf over sequences, indexed big-endian:
/// index = sum_t x_t * k^(n-1-t). Throws CapacityError if k^n exceeds
/// the outcome cap.
Distribution product_extension(const Distribution& p, int n,
                               std::size_t outcome_cap = kDefaultOutcomeCap);

/// Big-endian sequence <-> index helpers matching product_extension.
std::size_t sequence_to_index(std::span<const int> sequence, std::size_t alphabet_size);
std::vector<int> index_to_sequence(std::size_t index, std::size_t alphabet_size, int n);

}  // namespace rdpc
