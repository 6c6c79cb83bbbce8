#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "rdpc/prob.hpp"
#include "rdpc/region.hpp"
#include "rdpc/synthesis.hpp"
#include "rdpc/upgrade.hpp"

namespace rdpc::json_io {

using nlohmann::json;

/// Schema violation; the message names the offending JSON path, e.g.
/// "$.triple.source.mass[2]: expected a number".
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scalar rates: a JSON number, or the string "inf" for an unbounded
// common-randomness budget.
double parse_rate(const json& value, const std::string& path);
json rate_to_json(double value);

// Schema {"alphabet": k, "mass": [...]}.
Distribution parse_distribution(const json& value, const std::string& path);
json to_json(const Distribution& p);

// Schema {"rows": [[...], ...]}; rows must be stochastic.
Channel parse_channel(const json& value, const std::string& path);
json to_json(const Channel& w);

// Schema {"rows": [[...], ...]}; entries nonnegative, not necessarily
// stochastic.
DistortionMeasure parse_distortion(const json& value, const std::string& path);
json to_json(const DistortionMeasure& d);

// Schema {"source": distribution, "forward": channel, "synthesis": channel}.
TripleJoint parse_triple(const json& value, const std::string& path);
json to_json(const TripleJoint& triple);

// SimConfig fields: triple (required), rate, common_rate (finite),
// blocklength, slack, seed, mc_samples, distortion (optional table).
synthesis::SimConfig parse_sim_config(const json& value, const std::string& path);
json to_json(const synthesis::SimReport& report);
json to_json(const std::vector<synthesis::TracePoint>& trace);

// RegionQuery fields: source, distortion_measure, distortion, common_rate,
// aux_size; "rate" is optional (present for membership queries). When
// absent the returned query carries rate = 0.
region::RegionQuery parse_region_query(const json& value, const std::string& path);
json to_json(const region::RegionWitness& witness);
json to_json(const region::MinRateResult& result);

// UpgradeInput fields: target, decoder, weights.
upgrade::UpgradeInput parse_upgrade_input(const json& value, const std::string& path);
json upgrade_report(const upgrade::UpgradeOutput& output,
                    const upgrade::CouplingCertificate& certificate);

}  // namespace rdpc::json_io
