#include "rdpc/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rdpc {

namespace {

void check_same_alphabet(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("distributions have mismatched alphabet sizes");
  }
}

}  // namespace

Distribution::Distribution(std::vector<double> mass) : mass_(std::move(mass)) {
  if (mass_.empty()) throw std::invalid_argument("Distribution: empty mass vector");
  double sum = 0.0;
  for (double& v : mass_) {
    if (!std::isfinite(v)) throw std::invalid_argument("Distribution: non-finite entry");
    if (v < -kProbTolerance) throw std::invalid_argument("Distribution: negative entry");
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) >= kRenormalizeDrift) {
    throw std::invalid_argument("Distribution: mass does not sum to 1");
  }
  if (sum != 1.0) {
    for (double& v : mass_) v /= sum;
  }
}

Distribution Distribution::uniform(std::size_t alphabet_size) {
  if (alphabet_size == 0) throw std::invalid_argument("Distribution: empty alphabet");
  return Distribution(std::vector<double>(alphabet_size, 1.0 / static_cast<double>(alphabet_size)));
}

Distribution Distribution::point_mass(std::size_t alphabet_size, std::size_t atom) {
  if (atom >= alphabet_size) throw std::invalid_argument("Distribution: atom out of range");
  std::vector<double> mass(alphabet_size, 0.0);
  mass[atom] = 1.0;
  return Distribution(std::move(mass));
}

double Distribution::entropy_bits() const {
  double h = 0.0;
  for (double v : mass_) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

Channel::Channel(std::size_t input_size, std::size_t output_size, std::vector<double> row_major)
    : input_size_(input_size), output_size_(output_size),
      table_(input_size, output_size, std::move(row_major)) {
  if (input_size_ == 0 || output_size_ == 0) {
    throw std::invalid_argument("Channel: empty alphabet");
  }
  for (std::size_t i = 0; i < input_size_; ++i) {
    std::vector<double> row(table_.data().begin() + i * output_size_,
                            table_.data().begin() + (i + 1) * output_size_);
    Distribution validated(std::move(row));
    for (std::size_t j = 0; j < output_size_; ++j) table_(i, j) = validated[j];
  }
}

Channel::Channel(const std::vector<std::vector<double>>& rows)
    : Channel(rows.size(), rows.empty() ? 0 : rows.front().size(), [&rows] {
        std::vector<double> flat;
        for (const auto& r : rows) {
          if (r.size() != rows.front().size()) {
            throw std::invalid_argument("Channel: ragged rows");
          }
          flat.insert(flat.end(), r.begin(), r.end());
        }
        return flat;
      }()) {}

Channel Channel::identity(std::size_t alphabet_size) {
  std::vector<double> flat(alphabet_size * alphabet_size, 0.0);
  for (std::size_t i = 0; i < alphabet_size; ++i) flat[i * alphabet_size + i] = 1.0;
  return Channel(alphabet_size, alphabet_size, std::move(flat));
}

Distribution Channel::row_distribution(std::size_t input) const {
  auto r = row(input);
  return Distribution(std::vector<double>(r.begin(), r.end()));
}

Distribution Channel::apply(const Distribution& input) const {
  if (input.size() != input_size_) {
    throw std::invalid_argument("Channel::apply: alphabet mismatch");
  }
  std::vector<double> out(output_size_, 0.0);
  for (std::size_t i = 0; i < input_size_; ++i) {
    const double w = input[i];
    if (w == 0.0) continue;
    for (std::size_t j = 0; j < output_size_; ++j) out[j] += w * table_(i, j);
  }
  return Distribution(std::move(out));
}

Channel compose(const Channel& first, const Channel& second) {
  if (first.output_size() != second.input_size()) {
    throw std::invalid_argument("compose: alphabet mismatch");
  }
  std::vector<double> flat(first.input_size() * second.output_size(), 0.0);
  for (std::size_t i = 0; i < first.input_size(); ++i) {
    for (std::size_t m = 0; m < first.output_size(); ++m) {
      const double w = first.at(i, m);
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < second.output_size(); ++j) {
        flat[i * second.output_size() + j] += w * second.at(m, j);
      }
    }
  }
  return Channel(first.input_size(), second.output_size(), std::move(flat));
}

DistortionMeasure::DistortionMeasure(Matrix table) : table_(std::move(table)), max_entry_(0.0) {
  if (table_.rows() == 0 || table_.cols() == 0) {
    throw std::invalid_argument("DistortionMeasure: empty table");
  }
  for (double v : table_.data()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("DistortionMeasure: entries must be finite and nonnegative");
    }
    max_entry_ = std::max(max_entry_, v);
  }
}

DistortionMeasure::DistortionMeasure(const std::vector<std::vector<double>>& rows)
    : DistortionMeasure([&rows] {
        if (rows.empty()) throw std::invalid_argument("DistortionMeasure: empty table");
        Matrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].size() != rows.front().size()) {
            throw std::invalid_argument("DistortionMeasure: ragged rows");
          }
          for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
        }
        return m;
      }()) {}

DistortionMeasure DistortionMeasure::hamming(std::size_t alphabet_size) {
  Matrix m(alphabet_size, alphabet_size, 1.0);
  for (std::size_t i = 0; i < alphabet_size; ++i) m(i, i) = 0.0;
  return DistortionMeasure(std::move(m));
}

Coupling::Coupling(Matrix joint, const Distribution& first, const Distribution& second)
    : joint_(std::move(joint)) {
  if (joint_.rows() != first.size() || joint_.cols() != second.size()) {
    throw std::invalid_argument("Coupling: shape does not match the coupled distributions");
  }
  double sum = 0.0;
  for (double v : joint_.data()) {
    if (v < -kProbTolerance) throw std::invalid_argument("Coupling: negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbTolerance * static_cast<double>(joint_.data().size() + 1)) {
    throw std::invalid_argument("Coupling: joint does not sum to 1");
  }
  for (std::size_t i = 0; i < joint_.rows(); ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < joint_.cols(); ++j) row_sum += joint_(i, j);
    if (std::abs(row_sum - first[i]) > kProbTolerance) {
      throw std::invalid_argument("Coupling: first marginal mismatch");
    }
  }
  for (std::size_t j = 0; j < joint_.cols(); ++j) {
    double col_sum = 0.0;
    for (std::size_t i = 0; i < joint_.rows(); ++i) col_sum += joint_(i, j);
    if (std::abs(col_sum - second[j]) > kProbTolerance) {
      throw std::invalid_argument("Coupling: second marginal mismatch");
    }
  }
}

Distribution Coupling::first_marginal() const {
  std::vector<double> m(joint_.rows(), 0.0);
  for (std::size_t i = 0; i < joint_.rows(); ++i)
    for (std::size_t j = 0; j < joint_.cols(); ++j) m[i] += joint_(i, j);
  return Distribution(std::move(m));
}

Distribution Coupling::second_marginal() const {
  std::vector<double> m(joint_.cols(), 0.0);
  for (std::size_t i = 0; i < joint_.rows(); ++i)
    for (std::size_t j = 0; j < joint_.cols(); ++j) m[j] += joint_(i, j);
  return Distribution(std::move(m));
}

double Coupling::mismatch_probability() const {
  if (joint_.rows() != joint_.cols()) {
    throw std::invalid_argument("Coupling::mismatch_probability: requires a common alphabet");
  }
  double diag = 0.0;
  for (std::size_t i = 0; i < joint_.rows(); ++i) diag += joint_(i, i);
  return std::max(0.0, 1.0 - diag);
}

TripleJoint::TripleJoint(Distribution source, Channel forward, Channel synthesis)
    : source_(std::move(source)), forward_(std::move(forward)), synthesis_(std::move(synthesis)) {
  if (forward_.input_size() != source_.size()) {
    throw std::invalid_argument("TripleJoint: forward channel input does not match source");
  }
  if (synthesis_.input_size() != forward_.output_size()) {
    throw std::invalid_argument("TripleJoint: synthesis channel input does not match forward output");
  }
}

Distribution TripleJoint::u_marginal() const { return forward_.apply(source_); }

Distribution TripleJoint::y_marginal() const { return synthesis_.apply(u_marginal()); }

Matrix TripleJoint::joint_xu() const {
  Matrix m(source_.size(), forward_.output_size());
  for (std::size_t x = 0; x < source_.size(); ++x)
    for (std::size_t u = 0; u < forward_.output_size(); ++u)
      m(x, u) = source_[x] * forward_.at(x, u);
  return m;
}

Matrix TripleJoint::joint_uy() const {
  const Distribution pu = u_marginal();
  Matrix m(pu.size(), synthesis_.output_size());
  for (std::size_t u = 0; u < pu.size(); ++u)
    for (std::size_t y = 0; y < synthesis_.output_size(); ++y)
      m(u, y) = pu[u] * synthesis_.at(u, y);
  return m;
}

Matrix TripleJoint::joint_xy() const {
  Matrix m(source_.size(), synthesis_.output_size());
  for (std::size_t x = 0; x < source_.size(); ++x) {
    for (std::size_t u = 0; u < forward_.output_size(); ++u) {
      const double w = source_[x] * forward_.at(x, u);
      if (w == 0.0) continue;
      for (std::size_t y = 0; y < synthesis_.output_size(); ++y) {
        m(x, y) += w * synthesis_.at(u, y);
      }
    }
  }
  return m;
}

Channel TripleJoint::reverse_forward() const {
  const Distribution pu = u_marginal();
  const std::size_t nx = source_.size(), nu = pu.size();
  std::vector<double> flat(nu * nx, 0.0);
  for (std::size_t u = 0; u < nu; ++u) {
    if (pu[u] > 0.0) {
      for (std::size_t x = 0; x < nx; ++x) {
        flat[u * nx + x] = source_[x] * forward_.at(x, u) / pu[u];
      }
    } else {
      for (std::size_t x = 0; x < nx; ++x) flat[u * nx + x] = 1.0 / static_cast<double>(nx);
    }
  }
  return Channel(nu, nx, std::move(flat));
}

double tv_distance(const Distribution& p, const Distribution& q) {
  check_same_alphabet(p, q);
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
  return 0.5 * l1;
}

Coupling maximal_coupling(const Distribution& p, const Distribution& q) {
  check_same_alphabet(p, q);
  const std::size_t k = p.size();
  Matrix joint(k, k);
  double overlap = 0.0;
  std::vector<double> residual_p(k), residual_q(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double m = std::min(p[i], q[i]);
    joint(i, i) = m;
    overlap += m;
    residual_p[i] = p[i] - m;
    residual_q[i] = q[i] - m;
  }
  const double tv = 1.0 - overlap;
  if (tv > 0.0) {
    for (std::size_t i = 0; i < k; ++i) {
      if (residual_p[i] == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (residual_q[j] == 0.0) continue;
        joint(i, j) += residual_p[i] * residual_q[j] / tv;
      }
    }
  }
  return Coupling(std::move(joint), p, q);
}

double mutual_information(const Matrix& joint) {
  if (joint.rows() == 0 || joint.cols() == 0) {
    throw std::invalid_argument("mutual_information: empty joint");
  }
  double sum = 0.0;
  for (double v : joint.data()) {
    if (!std::isfinite(v) || v < -kProbTolerance) {
      throw std::invalid_argument("mutual_information: invalid joint pmf");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) >= kRenormalizeDrift) {
    throw std::invalid_argument("mutual_information: joint does not sum to 1");
  }
  std::vector<double> pa(joint.rows(), 0.0), pb(joint.cols(), 0.0);
  for (std::size_t i = 0; i < joint.rows(); ++i) {
    for (std::size_t j = 0; j < joint.cols(); ++j) {
      pa[i] += joint(i, j);
      pb[j] += joint(i, j);
    }
  }
  double info = 0.0;
  for (std::size_t i = 0; i < joint.rows(); ++i) {
    for (std::size_t j = 0; j < joint.cols(); ++j) {
      const double v = joint(i, j);
      if (v > 0.0) info += v * std::log2(v / (pa[i] * pb[j]));
    }
  }
  return std::max(0.0, info);
}

double expected_distortion(const Matrix& joint, const DistortionMeasure& d) {
  if (joint.rows() != d.source_size() || joint.cols() != d.reconstruction_size()) {
    throw std::invalid_argument("expected_distortion: shape mismatch");
  }
  double e = 0.0;
  for (std::size_t x = 0; x < joint.rows(); ++x)
    for (std::size_t y = 0; y < joint.cols(); ++y) e += joint(x, y) * d.at(x, y);
  return e;
}

Distribution product_extension(const Distribution& p, int n, std::size_t outcome_cap) {
  if (n < 1) throw std::invalid_argument("product_extension: n must be positive");
  const std::size_t k = p.size();
  std::size_t outcomes = 1;
  for (int t = 0; t < n; ++t) {
    if (outcomes > outcome_cap / k) {
      throw CapacityError("product_extension: outcome count exceeds memory cap");
    }
    outcomes *= k;
  }
  std::vector<double> mass{1.0};
  for (int t = 0; t < n; ++t) {
    std::vector<double> next(mass.size() * k);
    for (std::size_t prefix = 0; prefix < mass.size(); ++prefix) {
      for (std::size_t sym = 0; sym < k; ++sym) {
        next[prefix * k + sym] = mass[prefix] * p[sym];
      }
    }
    mass = std::move(next);
  }
  return Distribution(std::move(mass));
}

std::size_t sequence_to_index(std::span<const int> sequence, std::size_t alphabet_size) {
  std::size_t index = 0;
  for (int sym : sequence) {
    if (sym < 0 || static_cast<std::size_t>(sym) >= alphabet_size) {
      throw std::invalid_argument("sequence_to_index: symbol out of range");
    }
    index = index * alphabet_size + static_cast<std::size_t>(sym);
  }
  return index;
}

std::vector<int> index_to_sequence(std::size_t index, std::size_t alphabet_size, int n) {
  std::vector<int> seq(static_cast<std::size_t>(n));
  for (int t = n - 1; t >= 0; --t) {
    seq[static_cast<std::size_t>(t)] = static_cast<int>(index % alphabet_size);
    index /= alphabet_size;
  }
  if (index != 0) throw std::invalid_argument("index_to_sequence: index out of range");
  return seq;
}

}  // namespace rdpc
