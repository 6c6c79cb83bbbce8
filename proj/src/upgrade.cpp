#include "rdpc/upgrade.hpp"

#include <cmath>
#include <stdexcept>

namespace rdpc::upgrade {

namespace {

void check_input(const UpgradeInput& input) {
  if (input.decoder.output_size() != input.target.size()) {
    throw std::invalid_argument("upgrade: decoder output alphabet does not match target");
  }
  if (input.decoder.input_size() != input.weights.size()) {
    throw std::invalid_argument("upgrade: weights do not match decoder row count");
  }
}

}  // namespace

Distribution induced_marginal(const UpgradeInput& input) {
  check_input(input);
  std::vector<double> pw(input.target.size(), 0.0);
  for (std::size_t r = 0; r < input.weights.size(); ++r) {
    const double w = input.weights[r];
    if (w == 0.0) continue;
    for (std::size_t y = 0; y < pw.size(); ++y) pw[y] += w * input.decoder.at(r, y);
  }
  return Distribution(std::move(pw));
}

UpgradeOutput upgrade(const UpgradeInput& input) {
  check_input(input);
  const Distribution pw = induced_marginal(input);
  const std::size_t alphabet = input.target.size();
  const std::size_t rows = input.decoder.input_size();

  std::vector<std::size_t> plus_set;
  std::vector<double> theta;
  std::vector<double> deficit(alphabet, 0.0);
  double deficit_total = 0.0;
  for (std::size_t y = 0; y < alphabet; ++y) {
    if (pw[y] > input.target[y]) {
      plus_set.push_back(y);
      theta.push_back(input.target[y] / pw[y]);
    } else {
      deficit[y] = input.target[y] - pw[y];
      deficit_total += deficit[y];
    }
  }

  const double tv_before = tv_distance(input.target, pw);

  if (plus_set.empty() || deficit_total <= 0.0) {
    // Already matching; nothing to redistribute.
    return UpgradeOutput{input.decoder, {}, {}, std::vector<double>(rows, 0.0),
                         input.target, tv_before};
  }

  for (double& v : deficit) v /= deficit_total;
  Distribution residual(std::move(deficit));

  std::vector<double> phi(rows, 0.0);
  std::vector<double> upgraded(rows * alphabet, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double leak = 0.0;
    for (std::size_t p = 0; p < plus_set.size(); ++p) {
      leak += (1.0 - theta[p]) * input.decoder.at(r, plus_set[p]);
    }
    phi[r] = leak;
    for (std::size_t y = 0; y < alphabet; ++y) {
      upgraded[r * alphabet + y] = input.decoder.at(r, y) + leak * residual[y];
    }
    for (std::size_t p = 0; p < plus_set.size(); ++p) {
      const std::size_t y = plus_set[p];
      upgraded[r * alphabet + y] = theta[p] * input.decoder.at(r, y);
    }
  }

  return UpgradeOutput{Channel(rows, alphabet, std::move(upgraded)),
                       std::move(plus_set), std::move(theta), std::move(phi),
                       std::move(residual), tv_before};
}

CouplingCertificate coupling_certificate(const UpgradeInput& input, const UpgradeOutput& output) {
  check_input(input);
  if (output.upgraded.input_size() != input.decoder.input_size() ||
      output.upgraded.output_size() != input.decoder.output_size()) {
    throw std::invalid_argument("coupling_certificate: output does not match input shapes");
  }
  double mismatch = 0.0;
  for (std::size_t r = 0; r < input.weights.size(); ++r) {
    const double w = input.weights[r];
    if (w == 0.0) continue;
    const Coupling c =
        maximal_coupling(input.decoder.row_distribution(r), output.upgraded.row_distribution(r));
    mismatch += w * c.mismatch_probability();
  }
  const double tv_before = tv_distance(input.target, induced_marginal(input));
  if (std::abs(mismatch - tv_before) > 1e-12) {
    throw std::logic_error("coupling_certificate: mismatch probability differs from tv distance");
  }
  return CouplingCertificate{mismatch, tv_before};
}

double distortion_delta_bound(const UpgradeInput& input, const UpgradeOutput& output,
                              const DistortionMeasure& d) {
  check_input(input);
  return d.max_entry() * output.tv_before;
}

}  // namespace rdpc::upgrade
