#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rdpc/gaussian.hpp"
#include "rdpc/json_io.hpp"

namespace fs = std::filesystem;
using rdpc::json_io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buffer[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buffer;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_json_file(const fs::path& path, const json& value) {
  write_text(path, value.dump(2) + "\n");
}

json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_manifest(const fs::path& out_dir, const std::string& command, const json& config,
                    std::uint64_t seed, const std::vector<std::string>& outputs) {
  json manifest{{"command", command},
                {"config", config},
                {"seed", seed},
                {"version", kVersion},
                {"timestamp", iso_timestamp()},
                {"outputs", outputs}};
  write_json_file(out_dir / (command + "_manifest.json"), manifest);
}

std::string format_cell(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

// ---------------------------------------------------------------- gauss

std::string gauss_csv(const std::vector<rdpc::gaussian::GaussianPoint>& points) {
  std::string text = "delta,rc,rho,rho_tilde,rate\n";
  for (const auto& p : points) {
    text += format_cell(p.delta) + "," + format_cell(p.common_rate) + "," +
            format_cell(p.rho) + "," + format_cell(p.rho_tilde) + "," + format_cell(p.rate) +
            "\n";
  }
  return text;
}

std::vector<rdpc::gaussian::GaussianPoint> classical_curve(const std::vector<double>& grid) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<rdpc::gaussian::GaussianPoint> points;
  points.reserve(grid.size());
  for (double delta : grid) {
    rdpc::gaussian::GaussianPoint p;
    p.delta = delta;
    p.common_rate = nan;
    p.rho = delta <= 1.0 ? std::sqrt(1.0 - delta) : 0.0;
    p.rho_tilde = nan;
    p.rate = rdpc::gaussian::rate_classical(delta);
    points.push_back(p);
  }
  return points;
}

void run_gauss(const json& config, const fs::path& out_dir, bool with_manifest) {
  std::vector<std::string> outputs;
  const std::string format = config.value("format", "csv");
  if (config.value("curves", "") == "fig1") {
    std::vector<double> grid;
    for (int i = 1; i <= 100; ++i) grid.push_back(0.02 * i);
    const struct {
      const char* name;
      std::vector<rdpc::gaussian::GaussianPoint> points;
    } curves[] = {
        {"gauss_rc0.csv", rdpc::gaussian::curve(grid, 0.0)},
        {"gauss_rcinf.csv",
         rdpc::gaussian::curve(grid, std::numeric_limits<double>::infinity())},
        {"gauss_classical.csv", classical_curve(grid)},
    };
    for (const auto& curve : curves) {
      write_text(out_dir / curve.name, gauss_csv(curve.points));
      outputs.push_back(curve.name);
    }
  } else {
    const double rc = rdpc::json_io::parse_rate(config.at("rc"), "$.rc");
    std::vector<double> grid;
    if (config.contains("delta")) {
      grid.push_back(config.at("delta").get<double>());
    } else {
      const int count = config.value("grid", 100);
      if (count < 1) throw std::runtime_error("--grid must be positive");
      for (int i = 1; i <= count; ++i) grid.push_back(2.0 * i / count);
    }
    const auto points = rdpc::gaussian::curve(grid, rc);
    if (grid.size() == 1) {
      std::cout << "rate " << format_cell(points[0].rate) << "\n";
    }
    if (format == "json") {
      json rows = json::array();
      for (const auto& p : points) {
        rows.push_back(json{{"delta", p.delta},
                            {"rc", rdpc::json_io::rate_to_json(p.common_rate)},
                            {"rho", p.rho},
                            {"rho_tilde", p.rho_tilde},
                            {"rate", p.rate}});
      }
      write_json_file(out_dir / "gauss_curve.json", rows);
      outputs.push_back("gauss_curve.json");
    } else {
      write_text(out_dir / "gauss_curve.csv", gauss_csv(points));
      outputs.push_back("gauss_curve.csv");
    }
  }
  if (with_manifest) write_manifest(out_dir, "gauss", config, 0, outputs);
}

// ---------------------------------------------------------------- region

void run_region(const json& config, const fs::path& out_dir, bool with_manifest) {
  const json& query_json = config.at("query");
  rdpc::region::RegionQuery query =
      rdpc::json_io::parse_region_query(query_json, "$.query");
  rdpc::region::SearchOptions options;
  options.seed = config.value("seed", options.seed);

  std::vector<std::string> outputs;
  const bool sweep = config.value("sweep", "") == "delta";
  if (sweep) {
    std::vector<double> grid;
    if (query_json.contains("sweep_grid")) {
      for (const auto& v : query_json.at("sweep_grid")) grid.push_back(v.get<double>());
    } else {
      const double top = query.d.max_entry();
      for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i * top);
    }
    std::string csv = "delta,rc,min_rate,aux_size\n";
    for (double delta : grid) {
      const auto result = rdpc::region::min_rate(delta, query.common_rate, query.source,
                                                 query.d, query.aux_size, options);
      csv += format_cell(delta) + "," + format_cell(query.common_rate) + "," +
             format_cell(result.min_rate) + "," + std::to_string(result.aux_size) + "\n";
    }
    write_text(out_dir / "region_sweep.csv", csv);
    outputs.push_back("region_sweep.csv");
  } else {
    const auto result = rdpc::region::min_rate(query.distortion, query.common_rate,
                                               query.source, query.d, query.aux_size, options);
    json report = rdpc::json_io::to_json(result);
    if (query_json.contains("rate")) {
      report["rate"] = rdpc::json_io::rate_to_json(query.rate);
      report["member"] =
          result.feasible && result.min_rate <= query.rate + options.membership_tol;
    }
    write_json_file(out_dir / "region_report.json", report);
    outputs.push_back("region_report.json");
  }
  if (with_manifest) write_manifest(out_dir, "region", config, options.seed, outputs);
}

// -------------------------------------------------------------- simulate

void run_simulate(const json& config, const fs::path& out_dir, bool with_manifest) {
  const json& sim_json = config.at("config");
  rdpc::synthesis::SimConfig cfg = rdpc::json_io::parse_sim_config(sim_json, "$.config");
  std::vector<std::string> outputs;
  json report_json;
  if (sim_json.contains("n_list")) {
    std::vector<int> blocklengths;
    for (const auto& v : sim_json.at("n_list")) blocklengths.push_back(v.get<int>());
    const int replicates = sim_json.value("replicates", 1);
    const auto trace = rdpc::synthesis::sweep(cfg, blocklengths, replicates);
    report_json = json{{"seed", cfg.seed},
                       {"replicates", replicates},
                       {"trace", rdpc::json_io::to_json(trace)}};
    std::string csv = "n,tv_gap,tv_ci,distortion\n";
    for (const auto& point : trace) {
      csv += std::to_string(point.blocklength) + "," + format_cell(point.tv_gap) + "," +
             format_cell(point.tv_ci) + "," + format_cell(point.distortion) + "\n";
    }
    write_text(out_dir / "simulate_trace.csv", csv);
    outputs.push_back("simulate_trace.csv");
  } else {
    report_json = rdpc::json_io::to_json(rdpc::synthesis::run(cfg));
  }
  write_json_file(out_dir / "simulate_report.json", report_json);
  outputs.push_back("simulate_report.json");
  if (with_manifest) write_manifest(out_dir, "simulate", config, cfg.seed, outputs);
}

// --------------------------------------------------------------- upgrade

void run_upgrade(const json& config, const fs::path& out_dir, bool with_manifest) {
  rdpc::upgrade::UpgradeInput input =
      rdpc::json_io::parse_upgrade_input(config.at("input"), "$.input");
  const auto output = rdpc::upgrade::upgrade(input);
  const auto certificate = rdpc::upgrade::coupling_certificate(input, output);
  write_json_file(out_dir / "upgrade_report.json",
                  rdpc::json_io::upgrade_report(output, certificate));
  if (with_manifest) {
    write_manifest(out_dir, "upgrade", config, 0, {"upgrade_report.json"});
  }
}

// ---------------------------------------------------------------- replay

void run_replay(const fs::path& manifest_path, const fs::path& out_dir) {
  const json manifest = load_json_file(manifest_path);
  const std::string command = manifest.at("command").get<std::string>();
  const json& config = manifest.at("config");
  if (command == "gauss") {
    run_gauss(config, out_dir, false);
  } else if (command == "region") {
    run_region(config, out_dir, false);
  } else if (command == "simulate") {
    run_simulate(config, out_dir, false);
  } else if (command == "upgrade") {
    run_upgrade(config, out_dir, false);
  } else {
    throw std::runtime_error("manifest names unknown command: " + command);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rate-distortion-perception toolkit"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string format = "csv";
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "seed override")->each([&](const std::string&) {
    seed_given = true;
  });
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* gauss = app.add_subcommand("gauss", "quadratic-Gaussian tradeoff curves");
  double gauss_delta = 0.0;
  bool gauss_delta_given = false;
  std::string gauss_rc = "0";
  int gauss_grid = 0;
  std::string gauss_curves;
  gauss->add_option("--delta", gauss_delta, "single distortion in (0,2]")
      ->each([&](const std::string&) { gauss_delta_given = true; });
  gauss->add_option("--rc", gauss_rc, "common-randomness rate, number or inf");
  gauss->add_option("--grid", gauss_grid, "points of an even grid over (0,2]");
  gauss->add_option("--curves", gauss_curves, "preset: fig1")
      ->check(CLI::IsMember({"fig1"}));

  auto* region = app.add_subcommand("region", "finite-alphabet region queries");
  std::string region_query_path;
  std::string region_sweep;
  region->add_option("--query", region_query_path, "query JSON file")->required();
  region->add_option("--sweep", region_sweep, "sweep variable: delta")
      ->check(CLI::IsMember({"delta"}));

  auto* simulate = app.add_subcommand("simulate", "finite-blocklength codebook simulator");
  std::string simulate_config_path;
  simulate->add_option("--config", simulate_config_path, "SimConfig JSON file")->required();

  auto* upgrade = app.add_subcommand("upgrade", "perfect-realism decoder transformation");
  std::string upgrade_input_path;
  upgrade->add_option("--input", upgrade_input_path, "UpgradeInput JSON file")->required();

  auto* replay = app.add_subcommand("replay", "re-run a stored manifest");
  std::string replay_manifest_path;
  replay->add_option("--manifest", replay_manifest_path, "manifest JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path out_path(out_dir);
    fs::create_directories(out_path);
    if (gauss->parsed()) {
      json config{{"rc", gauss_rc == "inf" ? json("inf") : json(std::stod(gauss_rc))},
                  {"format", format}};
      if (gauss_delta_given) config["delta"] = gauss_delta;
      if (gauss_grid > 0) config["grid"] = gauss_grid;
      if (!gauss_curves.empty()) config["curves"] = gauss_curves;
      run_gauss(config, out_path, true);
    } else if (region->parsed()) {
      json config{{"query", load_json_file(region_query_path)}};
      if (!region_sweep.empty()) config["sweep"] = region_sweep;
      if (seed_given) config["seed"] = seed;
      run_region(config, out_path, true);
    } else if (simulate->parsed()) {
      json sim_json = load_json_file(simulate_config_path);
      if (seed_given) sim_json["seed"] = seed;
      json config{{"config", std::move(sim_json)}};
      run_simulate(config, out_path, true);
    } else if (upgrade->parsed()) {
      json config{{"input", load_json_file(upgrade_input_path)}};
      run_upgrade(config, out_path, true);
    } else if (replay->parsed()) {
      run_replay(replay_manifest_path, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
