#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "rdpc/prob.hpp"
#include "rdpc/rng.hpp"
#include "rdpc/upgrade.hpp"

using namespace rdpc;
using rdpc::upgrade::UpgradeInput;


namespace {

Distribution random_distribution(RngStream& stream, std::size_t k, bool allow_zeros) {
  std::vector<double> mass(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double v = stream.next_double();
    if (allow_zeros && stream.next_double() < 0.3) v = 0.0;
    mass[i] = v;
    total += v;
  }
  if (total == 0.0) {
    mass[0] = 1.0;
    total = 1.0;
  }
  for (auto& v : mass) v /= total;
  return Distribution(mass);
}

UpgradeInput random_instance(RngStream& stream) {
  const std::size_t alphabet = 2 + stream.next_index(7);
  const std::size_t pairs = 1 + stream.next_index(16);
  std::vector<std::vector<double>> rows(pairs);
  for (auto& row : rows) row = random_distribution(stream, alphabet, true).mass();
  return UpgradeInput{random_distribution(stream, alphabet, true),
                      Channel(rows),
                      random_distribution(stream, pairs, true)};
}

Distribution mixture(const Channel& decoder, const Distribution& weights) {
  std::vector<double> mass(decoder.output_size(), 0.0);
  for (std::size_t r = 0; r < decoder.input_size(); ++r)
    for (std::size_t y = 0; y < decoder.output_size(); ++y)
      mass[y] += weights[r] * decoder.at(r, y);
  return Distribution(mass);
}

}  // namespace

TEST_CASE("hand-worked two-symbol example") {
  // PW = [0.7, 0.3] against target [0.5, 0.5]: symbol 0 overshoots,
  // theta_0 = 5/7, every row leaks (1 - 5/7) W(0|r), residual is all on
  // symbol 1.
  UpgradeInput input{Distribution({0.5, 0.5}),
                     Channel({{1.0, 0.0}, {0.4, 0.6}}),
                     Distribution({0.5, 0.5})};
  const auto out = upgrade::upgrade(input);

  CHECK(out.tv_before == doctest::Approx(0.2).epsilon(1e-15));
  REQUIRE(out.plus_set.size() == 1);
  CHECK(out.plus_set[0] == 0);
  REQUIRE(out.theta.size() == 1);
  CHECK(out.theta[0] == doctest::Approx(5.0 / 7.0).epsilon(1e-14));
  REQUIRE(out.phi.size() == 2);
  CHECK(out.phi[0] == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
  CHECK(out.phi[1] == doctest::Approx(0.4 * 2.0 / 7.0).epsilon(1e-14));
  CHECK(out.residual.mass() == std::vector<double>{0.0, 1.0});

  CHECK(out.upgraded.at(0, 0) == doctest::Approx(5.0 / 7.0).epsilon(1e-14));
  CHECK(out.upgraded.at(0, 1) == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
  CHECK(out.upgraded.at(1, 0) == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
  CHECK(out.upgraded.at(1, 1) == doctest::Approx(5.0 / 7.0).epsilon(1e-14));

  // Weighted leak accounts for the whole tv gap.
  CHECK(0.5 * out.phi[0] + 0.5 * out.phi[1] == doctest::Approx(0.2).epsilon(1e-14));

  const auto cert = upgrade::coupling_certificate(input, out);
  CHECK(cert.mismatch_probability == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(cert.tv_before == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("matching decoder is returned unchanged") {
  UpgradeInput input{Distribution({0.6, 0.4}),
                     Channel({{0.6, 0.4}, {0.6, 0.4}}),
                     Distribution({0.25, 0.75})};
  const auto out = upgrade::upgrade(input);
  CHECK(out.tv_before == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(out.plus_set.empty());
  for (double leak : out.phi) CHECK(leak == doctest::Approx(0.0).epsilon(1e-15));
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t y = 0; y < 2; ++y)
      CHECK(out.upgraded.at(r, y) == doctest::Approx(input.decoder.at(r, y)).epsilon(1e-15));
}

TEST_CASE("upgrade is idempotent") {
  RngStream stream(21, StreamPurpose::kSearch, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto input = random_instance(stream);
    const auto out = upgrade::upgrade(input);
    UpgradeInput again{input.target, out.upgraded, input.weights};
    const auto fixed = upgrade::upgrade(again);
    CHECK(fixed.tv_before == doctest::Approx(0.0).epsilon(1e-12));
    for (std::size_t r = 0; r < input.decoder.input_size(); ++r)
      for (std::size_t y = 0; y < input.decoder.output_size(); ++y)
        CHECK(fixed.upgraded.at(r, y) ==
              doctest::Approx(out.upgraded.at(r, y)).epsilon(1e-11));
  }
}

TEST_CASE("random instances satisfy the exactness contract") {
  RngStream stream(22, StreamPurpose::kSearch, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto input = random_instance(stream);
    const auto out = upgrade::upgrade(input);
    const auto pw = upgrade::induced_marginal(input);
    CHECK(out.tv_before == doctest::Approx(tv_distance(input.target, pw)).epsilon(1e-13));

    // Mixture of upgraded rows reproduces the target exactly.
    const auto mixed = mixture(out.upgraded, input.weights);
    for (std::size_t y = 0; y < input.target.size(); ++y)
      CHECK(std::abs(mixed[y] - input.target[y]) <= 1e-12);

    // Rows stay stochastic.
    for (std::size_t r = 0; r < out.upgraded.input_size(); ++r) {
      double total = 0.0;
      for (std::size_t y = 0; y < out.upgraded.output_size(); ++y) {
        CHECK(out.upgraded.at(r, y) >= -1e-15);
        total += out.upgraded.at(r, y);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Each row moves by exactly its leaked mass.
    for (std::size_t r = 0; r < out.upgraded.input_size(); ++r) {
      CHECK(out.phi[r] >= -1e-15);
      CHECK(out.phi[r] <= 1.0 + 1e-15);
      CHECK(tv_distance(input.decoder.row_distribution(r),
                        out.upgraded.row_distribution(r)) ==
            doctest::Approx(out.phi[r]).epsilon(1e-11));
    }

    // Weighted leak telescopes to the global tv gap.
    double weighted_leak = 0.0;
    for (std::size_t r = 0; r < out.phi.size(); ++r)
      weighted_leak += input.weights[r] * out.phi[r];
    CHECK(weighted_leak == doctest::Approx(out.tv_before).epsilon(1e-11));

    // Per-row maximal couplings certify the same number.
    const auto cert = upgrade::coupling_certificate(input, out);
    CHECK(cert.mismatch_probability == doctest::Approx(out.tv_before).epsilon(1e-11));
  }
}

TEST_CASE("distortion increase bound") {
  RngStream stream(23, StreamPurpose::kSearch, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto input = random_instance(stream);
    const auto out = upgrade::upgrade(input);
    const std::size_t alphabet = input.target.size();
    std::vector<std::vector<double>> d_rows(alphabet, std::vector<double>(alphabet));
    for (auto& row : d_rows)
      for (auto& v : row) v = 3.0 * stream.next_double();
    DistortionMeasure d(d_rows);
    const double bound = upgrade::distortion_delta_bound(input, out, d);
    CHECK(bound == doctest::Approx(d.max_entry() * out.tv_before).epsilon(1e-13));

    // The bound dominates the worst-case change in expected distortion for
    // any source coupling: check against the row-wise worst case.
    double worst = 0.0;
    for (std::size_t r = 0; r < out.phi.size(); ++r)
      worst = std::max(worst, input.weights[r] * out.phi[r] * d.max_entry());
    CHECK(bound >= worst - 1e-13);
  }
}

TEST_CASE("point-mass target forces every row to the point") {
  UpgradeInput input{Distribution({0.0, 1.0}),
                     Channel({{0.9, 0.1}, {0.2, 0.8}}),
                     Distribution({0.5, 0.5})};
  const auto out = upgrade::upgrade(input);
  for (std::size_t r = 0; r < 2; ++r) {
    CHECK(out.upgraded.at(r, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(out.upgraded.at(r, 1) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(out.tv_before == doctest::Approx(0.55).epsilon(1e-14));
}

TEST_CASE("zero-weight rows do not disturb the mixture") {
  UpgradeInput input{Distribution({0.5, 0.5}),
                     Channel({{1.0, 0.0}, {0.3, 0.7}, {0.5, 0.5}}),
                     Distribution({0.8, 0.0, 0.2})};
  const auto out = upgrade::upgrade(input);
  const auto mixed = mixture(out.upgraded, input.weights);
  CHECK(mixed[0] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(mixed[1] == doctest::Approx(0.5).epsilon(1e-13));
  // Zero-weight row still comes back as a valid distribution.
  double total = 0.0;
  for (std::size_t y = 0; y < 2; ++y) {
    CHECK(out.upgraded.at(1, y) >= -1e-15);
    total += out.upgraded.at(1, y);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}
