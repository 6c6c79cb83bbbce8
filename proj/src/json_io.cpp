#include "rdpc/json_io.hpp"

#include <cmath>
#include <limits>

namespace rdpc::json_io {

namespace {

const json& require_field(const json& value, const char* key, const std::string& path) {
  if (!value.is_object()) throw ParseError(path + ": expected an object");
  const auto it = value.find(key);
  if (it == value.end()) throw ParseError(path + ": missing field \"" + key + "\"");
  return *it;
}

double require_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ParseError(path + ": expected a number");
  return value.get<double>();
}

std::int64_t require_integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ParseError(path + ": expected an integer");
  return value.get<std::int64_t>();
}

std::vector<double> require_number_array(const json& value, const std::string& path) {
  if (!value.is_array()) throw ParseError(path + ": expected an array");
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(require_number(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<double>> require_rows(const json& value, const std::string& path) {
  const json& rows = require_field(value, "rows", path);
  if (!rows.is_array() || rows.empty()) {
    throw ParseError(path + ".rows: expected a non-empty array of rows");
  }
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.push_back(require_number_array(rows[i], path + ".rows[" + std::to_string(i) + "]"));
    if (out.back().size() != out.front().size()) {
      throw ParseError(path + ".rows[" + std::to_string(i) + "]: ragged row");
    }
  }
  return out;
}

}  // namespace

double parse_rate(const json& value, const std::string& path) {
  if (value.is_string()) {
    if (value.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw ParseError(path + ": expected a number or \"inf\"");
  }
  const double rate = require_number(value, path);
  if (std::isnan(rate) || rate < 0.0) throw ParseError(path + ": rate must be nonnegative");
  return rate;
}

json rate_to_json(double value) {
  if (std::isinf(value)) return json("inf");
  return json(value);
}

Distribution parse_distribution(const json& value, const std::string& path) {
  const std::int64_t alphabet = require_integer(require_field(value, "alphabet", path),
                                                path + ".alphabet");
  std::vector<double> mass = require_number_array(require_field(value, "mass", path),
                                                  path + ".mass");
  if (alphabet <= 0 || static_cast<std::size_t>(alphabet) != mass.size()) {
    throw ParseError(path + ".mass: length must equal alphabet");
  }
  try {
    return Distribution(std::move(mass));
  } catch (const std::exception& e) {
    throw ParseError(path + ".mass: " + e.what());
  }
}

json to_json(const Distribution& p) {
  return json{{"alphabet", p.size()}, {"mass", p.mass()}};
}

Channel parse_channel(const json& value, const std::string& path) {
  try {
    return Channel(require_rows(value, path));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(path + ".rows: " + e.what());
  }
}

json to_json(const Channel& w) {
  std::vector<std::vector<double>> rows(w.input_size());
  for (std::size_t r = 0; r < w.input_size(); ++r) {
    rows[r].assign(w.row(r).begin(), w.row(r).end());
  }
  return json{{"rows", rows}};
}

DistortionMeasure parse_distortion(const json& value, const std::string& path) {
  try {
    return DistortionMeasure(require_rows(value, path));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(path + ".rows: " + e.what());
  }
}

json to_json(const DistortionMeasure& d) {
  std::vector<std::vector<double>> rows(d.source_size());
  for (std::size_t r = 0; r < d.source_size(); ++r) {
    rows[r].resize(d.reconstruction_size());
    for (std::size_t c = 0; c < d.reconstruction_size(); ++c) rows[r][c] = d.at(r, c);
  }
  return json{{"rows", rows}};
}

TripleJoint parse_triple(const json& value, const std::string& path) {
  Distribution source = parse_distribution(require_field(value, "source", path),
                                           path + ".source");
  Channel forward = parse_channel(require_field(value, "forward", path), path + ".forward");
  Channel synthesis = parse_channel(require_field(value, "synthesis", path),
                                    path + ".synthesis");
  try {
    return TripleJoint(std::move(source), std::move(forward), std::move(synthesis));
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json to_json(const TripleJoint& triple) {
  return json{{"source", to_json(triple.source())},
              {"forward", to_json(triple.forward())},
              {"synthesis", to_json(triple.synthesis())}};
}

synthesis::SimConfig parse_sim_config(const json& value, const std::string& path) {
  TripleJoint triple = parse_triple(require_field(value, "triple", path), path + ".triple");
  synthesis::SimConfig cfg = [&]() {
    if (value.contains("distortion")) {
      return synthesis::SimConfig(std::move(triple),
                                  parse_distortion(value["distortion"], path + ".distortion"));
    }
    return synthesis::SimConfig(std::move(triple));
  }();
  if (value.contains("blocklength")) {
    cfg.blocklength = static_cast<int>(
        require_integer(value["blocklength"], path + ".blocklength"));
  }
  if (value.contains("rate")) {
    cfg.rate = require_number(value["rate"], path + ".rate");
  }
  if (value.contains("common_rate")) {
    const double rc = parse_rate(value["common_rate"], path + ".common_rate");
    if (std::isinf(rc)) {
      throw ParseError(path + ".common_rate: the simulator needs a finite budget");
    }
    cfg.common_rate = rc;
  }
  if (value.contains("slack")) {
    cfg.slack = require_number(value["slack"], path + ".slack");
  }
  if (value.contains("seed")) {
    cfg.seed = static_cast<std::uint64_t>(require_integer(value["seed"], path + ".seed"));
  }
  if (value.contains("mc_samples")) {
    cfg.mc_samples = require_integer(value["mc_samples"], path + ".mc_samples");
  }
  return cfg;
}

json to_json(const std::vector<synthesis::TracePoint>& trace) {
  json rows = json::array();
  for (const synthesis::TracePoint& point : trace) {
    rows.push_back(json{{"n", point.blocklength},
                        {"tv_gap", point.tv_gap},
                        {"tv_ci", point.tv_ci},
                        {"distortion", point.distortion}});
  }
  return rows;
}

json to_json(const synthesis::SimReport& report) {
  json out{{"tv_gap", report.tv_gap},
           {"tv_ci", report.tv_ci},
           {"tv_exact", report.tv_exact},
           {"distortion", report.distortion},
           {"distortion_stderr", report.distortion_stderr},
           {"num_messages", report.num_messages},
           {"num_common", report.num_common},
           {"seed", report.seed}};
  if (!report.trace.empty()) out["trace"] = to_json(report.trace);
  return out;
}

region::RegionQuery parse_region_query(const json& value, const std::string& path) {
  Distribution source = parse_distribution(require_field(value, "source", path),
                                           path + ".source");
  DistortionMeasure d = parse_distortion(require_field(value, "distortion_measure", path),
                                         path + ".distortion_measure");
  const double delta = require_number(require_field(value, "distortion", path),
                                      path + ".distortion");
  const double rc = parse_rate(require_field(value, "common_rate", path),
                               path + ".common_rate");
  const std::int64_t aux = require_integer(require_field(value, "aux_size", path),
                                           path + ".aux_size");
  if (aux < 1) throw ParseError(path + ".aux_size: must be positive");
  double rate = 0.0;
  if (value.contains("rate")) rate = parse_rate(value["rate"], path + ".rate");
  return region::RegionQuery{rate,
                             rc,
                             delta,
                             std::move(source),
                             std::move(d),
                             static_cast<std::size_t>(aux)};
}

json to_json(const region::RegionWitness& witness) {
  return json{{"triple", to_json(witness.triple)},
              {"achieved",
               json{{"info_xu", witness.achieved.info_xu},
                    {"info_yu", witness.achieved.info_yu},
                    {"distortion", witness.achieved.distortion},
                    {"realism_gap", witness.achieved.realism_gap}}}};
}

json to_json(const region::MinRateResult& result) {
  json out{{"feasible", result.feasible}, {"aux_size", result.aux_size}};
  out["min_rate"] = result.feasible ? json(result.min_rate) : json();
  if (result.witness) out["witness"] = to_json(*result.witness);
  return out;
}

upgrade::UpgradeInput parse_upgrade_input(const json& value, const std::string& path) {
  Distribution target = parse_distribution(require_field(value, "target", path),
                                           path + ".target");
  Channel decoder = parse_channel(require_field(value, "decoder", path), path + ".decoder");
  Distribution weights = parse_distribution(require_field(value, "weights", path),
                                            path + ".weights");
  return upgrade::UpgradeInput{std::move(target), std::move(decoder), std::move(weights)};
}

json upgrade_report(const upgrade::UpgradeOutput& output,
                    const upgrade::CouplingCertificate& certificate) {
  return json{{"upgraded", to_json(output.upgraded)},
              {"plus_set", output.plus_set},
              {"theta", output.theta},
              {"phi", output.phi},
              {"residual", to_json(output.residual)},
              {"tv_before", output.tv_before},
              {"certificate",
               json{{"mismatch_probability", certificate.mismatch_probability},
                    {"tv_before", certificate.tv_before}}}};
}

}  // namespace rdpc::json_io
