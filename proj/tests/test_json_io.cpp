#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "rdpc/json_io.hpp"

using namespace rdpc;
using namespace rdpc::json_io;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string message_of(const std::function<void()>& thunk) {
  try {
    thunk();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("rate scalars accept numbers and the inf sentinel") {
  CHECK(parse_rate(json(1.5), "$.rc") == doctest::Approx(1.5));
  CHECK(std::isinf(parse_rate(json("inf"), "$.rc")));
  CHECK(rate_to_json(2.25) == json(2.25));
  CHECK(rate_to_json(kInf) == json("inf"));
  CHECK_THROWS_AS(parse_rate(json("unbounded"), "$.rc"), ParseError);
  CHECK_THROWS_AS(parse_rate(json(-0.5), "$.rc"), ParseError);
}

TEST_CASE("distribution round trip") {
  Distribution p({0.25, 0.5, 0.25});
  const auto j = to_json(p);
  CHECK(j["alphabet"] == 3);
  REQUIRE(j["mass"].size() == 3);
  const auto q = parse_distribution(j, "$");
  REQUIRE(q.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(q[i] == doctest::Approx(p[i]).epsilon(1e-15));
}

TEST_CASE("channel and distortion round trip") {
  Channel w({{0.9, 0.1}, {0.3, 0.7}});
  const auto wj = to_json(w);
  const auto w2 = parse_channel(wj, "$");
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t y = 0; y < 2; ++y)
      CHECK(w2.at(r, y) == doctest::Approx(w.at(r, y)).epsilon(1e-15));

  DistortionMeasure d({{0.0, 2.5}, {1.5, 0.0}});
  const auto dj = to_json(d);
  const auto d2 = parse_distortion(dj, "$");
  CHECK(d2.at(0, 1) == doctest::Approx(2.5));
  CHECK(d2.at(1, 0) == doctest::Approx(1.5));
}

TEST_CASE("triple round trip") {
  TripleJoint t(Distribution({0.5, 0.5}),
                Channel({{0.7, 0.3}, {0.3, 0.7}}),
                Channel({{0.8, 0.2}, {0.2, 0.8}}));
  const auto j = to_json(t);
  const auto t2 = parse_triple(j, "$");
  CHECK(t2.source()[0] == doctest::Approx(0.5));
  CHECK(t2.forward().at(0, 1) == doctest::Approx(0.3));
  CHECK(t2.synthesis().at(1, 0) == doctest::Approx(0.2));
}

TEST_CASE("parse errors carry the offending path") {
  json bad = {{"alphabet", 3}, {"mass", {0.5, 0.25, "x"}}};
  const auto msg = message_of([&] { parse_distribution(bad, "$.triple.source"); });
  CHECK(msg.find("$.triple.source.mass[2]") != std::string::npos);
  CHECK(msg.find("number") != std::string::npos);

  json missing = {{"alphabet", 2}};
  const auto missing_msg = message_of([&] { parse_distribution(missing, "$.p"); });
  CHECK(missing_msg.find("$.p") != std::string::npos);
  CHECK(missing_msg.find("missing field \"mass\"") != std::string::npos);

  json ragged = {{"rows", {{0.5, 0.5}, {1.0}}}};
  CHECK(message_of([&] { parse_channel(ragged, "$.w"); }).find("$.w.rows[1]") !=
        std::string::npos);

  json negative = {{"alphabet", 2}, {"mass", {1.5, -0.5}}};
  CHECK_THROWS_AS(parse_distribution(negative, "$"), ParseError);

  json nonstochastic = {{"rows", {{0.5, 0.5}, {0.9, 0.2}}}};
  CHECK_THROWS_AS(parse_channel(nonstochastic, "$"), ParseError);
}

TEST_CASE("sim config parsing applies defaults and validates") {
  json cfg = {
      {"triple",
       {{"source", {{"alphabet", 2}, {"mass", {0.5, 0.5}}}},
        {"forward", {{"rows", {{0.7, 0.3}, {0.3, 0.7}}}}},
        {"synthesis", {{"rows", {{0.8, 0.2}, {0.2, 0.8}}}}}}},
      {"rate", 0.6},
      {"common_rate", 0.25},
      {"blocklength", 5},
      {"seed", 99},
      {"mc_samples", 1234},
  };
  const auto parsed = parse_sim_config(cfg, "$");
  CHECK(parsed.rate == doctest::Approx(0.6));
  CHECK(parsed.common_rate == doctest::Approx(0.25));
  CHECK(parsed.blocklength == 5);
  CHECK(parsed.seed == 99);
  CHECK(parsed.mc_samples == 1234);
  CHECK(parsed.slack == doctest::Approx(0.01));  // default kept
  // Default distortion is Hamming on the working alphabets.
  CHECK(parsed.distortion.at(0, 0) == 0.0);
  CHECK(parsed.distortion.at(0, 1) == 1.0);

  // The simulator needs a finite budget: "inf" is rejected here.
  json unbounded = cfg;
  unbounded["common_rate"] = "inf";
  CHECK_THROWS_AS(parse_sim_config(unbounded, "$"), ParseError);

  json no_triple = {{"rate", 0.5}};
  const auto msg = message_of([&] { parse_sim_config(no_triple, "$"); });
  CHECK(msg.find("missing field \"triple\"") != std::string::npos);
}

TEST_CASE("sim report serialization carries every field") {
  synthesis::SimConfig cfg(TripleJoint(Distribution({0.5, 0.5}),
                                       Channel({{0.7, 0.3}, {0.3, 0.7}}),
                                       Channel({{0.8, 0.2}, {0.2, 0.8}})));
  cfg.blocklength = 4;
  cfg.rate = 0.8;
  cfg.common_rate = 0.3;
  cfg.seed = 17;
  cfg.mc_samples = 500;
  const auto report = synthesis::run(cfg);
  const auto j = to_json(report);
  CHECK(j["tv_gap"].get<double>() == doctest::Approx(report.tv_gap));
  CHECK(j["tv_exact"].get<bool>() == report.tv_exact);
  CHECK(j["distortion"].get<double>() == doctest::Approx(report.distortion));
  CHECK(j["distortion_stderr"].get<double>() == doctest::Approx(report.distortion_stderr));
  CHECK(j["num_messages"].get<std::int64_t>() == report.num_messages);
  CHECK(j["num_common"].get<std::int64_t>() == report.num_common);
  CHECK(j["seed"].get<std::uint64_t>() == 17);

  const auto trace = synthesis::sweep(cfg, {2, 3}, 2);
  const auto tj = to_json(trace);
  REQUIRE(tj.is_array());
  REQUIRE(tj.size() == 2);
  CHECK(tj[0]["n"] == 2);
  CHECK(tj[1]["n"] == 3);
  CHECK(tj[0].contains("tv_gap"));
  CHECK(tj[0].contains("distortion"));
}

TEST_CASE("region query parsing and result serialization") {
  json q = {
      {"source", {{"alphabet", 2}, {"mass", {0.5, 0.5}}}},
      {"distortion_measure", {{"rows", {{0.0, 1.0}, {1.0, 0.0}}}}},
      {"distortion", 0.25},
      {"common_rate", "inf"},
      {"aux_size", 2},
  };
  const auto query = parse_region_query(q, "$");
  CHECK(query.distortion == doctest::Approx(0.25));
  CHECK(std::isinf(query.common_rate));
  CHECK(query.aux_size == 2);
  CHECK(query.rate == 0.0);  // absent: membership rate defaults to zero

  q["rate"] = 0.75;
  CHECK(parse_region_query(q, "$").rate == doctest::Approx(0.75));

  const auto result = region::min_rate(query.distortion, query.common_rate, query.source,
                                       query.d, query.aux_size);
  const auto rj = to_json(result);
  CHECK(rj["feasible"].get<bool>());
  CHECK(rj["aux_size"] == 2);
  CHECK(rj["min_rate"].get<double>() == doctest::Approx(result.min_rate));
  REQUIRE(rj.contains("witness"));
  CHECK(rj["witness"]["achieved"]["realism_gap"].get<double>() <= 1e-9);
  CHECK(rj["witness"]["triple"]["forward"]["rows"].size() == 2);

  // Infeasible searches serialize min_rate as null.
  const auto none = region::min_rate(0.1, 0.0, query.source, query.d, 1);
  const auto nj = to_json(none);
  CHECK_FALSE(nj["feasible"].get<bool>());
  CHECK(nj["min_rate"].is_null());
  CHECK_FALSE(nj.contains("witness"));
}

TEST_CASE("upgrade input parsing and report shape") {
  json in = {
      {"target", {{"alphabet", 2}, {"mass", {0.5, 0.5}}}},
      {"decoder", {{"rows", {{1.0, 0.0}, {0.4, 0.6}}}}},
      {"weights", {{"alphabet", 2}, {"mass", {0.5, 0.5}}}},
  };
  const auto input = parse_upgrade_input(in, "$");
  const auto output = upgrade::upgrade(input);
  const auto cert = upgrade::coupling_certificate(input, output);
  const auto report = upgrade_report(output, cert);

  CHECK(report["tv_before"].get<double>() == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(report["upgraded"]["rows"].size() == 2);
  CHECK(report["plus_set"].size() == 1);
  CHECK(report["theta"].size() == 1);
  CHECK(report["phi"].size() == 2);
  CHECK(report["certificate"]["mismatch_probability"].get<double>() ==
        doctest::Approx(0.2).epsilon(1e-14));
  CHECK(report["certificate"]["tv_before"].get<double>() ==
        doctest::Approx(0.2).epsilon(1e-14));
  // The residual is itself a distribution blob.
  CHECK(report["residual"]["mass"].size() == 2);
}
