#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rdpc/gaussian.hpp"
#include "rdpc/prob.hpp"
#include "rdpc/region.hpp"
#include "rdpc/synthesis.hpp"
#include "rdpc/upgrade.hpp"

namespace py = pybind11;

namespace {

std::vector<std::vector<double>> channel_rows(const rdpc::Channel& w) {
  std::vector<std::vector<double>> rows(w.input_size());
  for (std::size_t r = 0; r < w.input_size(); ++r) {
    rows[r].assign(w.row(r).begin(), w.row(r).end());
  }
  return rows;
}

py::dict witness_dict(const rdpc::region::RegionWitness& witness) {
  py::dict achieved;
  achieved["info_xu"] = witness.achieved.info_xu;
  achieved["info_yu"] = witness.achieved.info_yu;
  achieved["distortion"] = witness.achieved.distortion;
  achieved["realism_gap"] = witness.achieved.realism_gap;
  py::dict out;
  out["forward"] = channel_rows(witness.triple.forward());
  out["synthesis"] = channel_rows(witness.triple.synthesis());
  out["achieved"] = achieved;
  return out;
}

py::dict report_dict(const rdpc::synthesis::SimReport& report) {
  py::dict out;
  out["tv_gap"] = report.tv_gap;
  out["tv_ci"] = report.tv_ci;
  out["tv_exact"] = report.tv_exact;
  out["distortion"] = report.distortion;
  out["distortion_stderr"] = report.distortion_stderr;
  out["num_messages"] = report.num_messages;
  out["num_common"] = report.num_common;
  out["seed"] = report.seed;
  return out;
}

rdpc::synthesis::SimConfig make_config(const rdpc::TripleJoint& triple, double rate,
                                       double common_rate, int blocklength, double slack,
                                       std::uint64_t seed, std::int64_t mc_samples) {
  rdpc::synthesis::SimConfig cfg(triple);
  cfg.rate = rate;
  cfg.common_rate = common_rate;
  cfg.blocklength = blocklength;
  cfg.slack = slack;
  cfg.seed = seed;
  cfg.mc_samples = mc_samples;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_rdpc, m) {
  m.doc() = "rate-distortion-perception toolkit core";

  py::class_<rdpc::Distribution>(m, "Distribution")
      .def(py::init<std::vector<double>>(), py::arg("mass"))
      .def_property_readonly("mass", &rdpc::Distribution::mass)
      .def("entropy_bits", &rdpc::Distribution::entropy_bits)
      .def("__len__", &rdpc::Distribution::size)
      .def_static("uniform", &rdpc::Distribution::uniform, py::arg("alphabet_size"));

  py::class_<rdpc::Channel>(m, "Channel")
      .def(py::init<const std::vector<std::vector<double>>&>(), py::arg("rows"))
      .def_property_readonly("rows", &channel_rows)
      .def_static("identity", &rdpc::Channel::identity, py::arg("alphabet_size"));

  py::class_<rdpc::DistortionMeasure>(m, "DistortionMeasure")
      .def(py::init<const std::vector<std::vector<double>>&>(), py::arg("rows"))
      .def_static("hamming", &rdpc::DistortionMeasure::hamming, py::arg("alphabet_size"));

  py::class_<rdpc::TripleJoint>(m, "TripleJoint")
      .def(py::init<rdpc::Distribution, rdpc::Channel, rdpc::Channel>(), py::arg("source"),
           py::arg("forward"), py::arg("synthesis"))
      .def_property_readonly("source", &rdpc::TripleJoint::source)
      .def("info_xu",
           [](const rdpc::TripleJoint& t) { return rdpc::mutual_information(t.joint_xu()); })
      .def("info_yu",
           [](const rdpc::TripleJoint& t) { return rdpc::mutual_information(t.joint_uy()); });

  m.def("tv_distance", &rdpc::tv_distance, py::arg("p"), py::arg("q"));

  m.def("solve_rho", &rdpc::gaussian::solve_rho, py::arg("delta"), py::arg("common_rate"));
  m.def("gauss_rate", &rdpc::gaussian::rate, py::arg("delta"), py::arg("common_rate"));
  m.def("gauss_rate_rc_zero", &rdpc::gaussian::rate_rc_zero, py::arg("delta"));
  m.def("gauss_rate_rc_inf", &rdpc::gaussian::rate_rc_inf, py::arg("delta"));
  m.def("gauss_rate_classical", &rdpc::gaussian::rate_classical, py::arg("delta"));

  m.def(
      "min_rate",
      [](double delta, double common_rate, const rdpc::Distribution& source,
         const rdpc::DistortionMeasure& d, std::size_t aux_size, std::uint64_t seed) {
        rdpc::region::SearchOptions options;
        options.seed = seed;
        const auto result =
            rdpc::region::min_rate(delta, common_rate, source, d, aux_size, options);
        py::dict out;
        out["feasible"] = result.feasible;
        out["min_rate"] = result.min_rate;
        out["aux_size"] = result.aux_size;
        if (result.witness) out["witness"] = witness_dict(*result.witness);
        return out;
      },
      py::arg("delta"), py::arg("common_rate"), py::arg("source"), py::arg("d"),
      py::arg("aux_size"), py::arg("seed") = 1);

  m.def("brute_force_oracle",
        py::overload_cast<double, double, const rdpc::Distribution&,
                          const rdpc::DistortionMeasure&, std::size_t, double>(
            &rdpc::region::brute_force_oracle),
        py::arg("delta"), py::arg("common_rate"), py::arg("source"), py::arg("d"),
        py::arg("aux_size"), py::arg("step"));

  m.def("classical_rd", &rdpc::region::classical_rd, py::arg("source"), py::arg("d"),
        py::arg("delta"));

  m.def(
      "upgrade_decoder",
      [](const rdpc::Distribution& target, const rdpc::Channel& decoder,
         const rdpc::Distribution& weights) {
        const rdpc::upgrade::UpgradeInput input{target, decoder, weights};
        const auto output = rdpc::upgrade::upgrade(input);
        const auto certificate = rdpc::upgrade::coupling_certificate(input, output);
        py::dict out;
        out["upgraded"] = channel_rows(output.upgraded);
        out["plus_set"] = output.plus_set;
        out["theta"] = output.theta;
        out["phi"] = output.phi;
        out["residual"] = output.residual.mass();
        out["tv_before"] = output.tv_before;
        out["mismatch_probability"] = certificate.mismatch_probability;
        return out;
      },
      py::arg("target"), py::arg("decoder"), py::arg("weights"));

  m.def(
      "simulate_run",
      [](const rdpc::TripleJoint& triple, double rate, double common_rate, int blocklength,
         double slack, std::uint64_t seed, std::int64_t mc_samples) {
        return report_dict(rdpc::synthesis::run(
            make_config(triple, rate, common_rate, blocklength, slack, seed, mc_samples)));
      },
      py::arg("triple"), py::arg("rate"), py::arg("common_rate"), py::arg("blocklength") = 1,
      py::arg("slack") = 0.01, py::arg("seed") = 0, py::arg("mc_samples") = 10000);

  m.def(
      "simulate_sweep",
      [](const rdpc::TripleJoint& triple, double rate, double common_rate,
         const std::vector<int>& n_list, int replicates, double slack, std::uint64_t seed,
         std::int64_t mc_samples) {
        const auto trace = rdpc::synthesis::sweep(
            make_config(triple, rate, common_rate, 1, slack, seed, mc_samples), n_list,
            replicates);
        py::list out;
        for (const auto& point : trace) {
          py::dict row;
          row["n"] = point.blocklength;
          row["tv_gap"] = point.tv_gap;
          row["tv_ci"] = point.tv_ci;
          row["distortion"] = point.distortion;
          out.append(row);
        }
        return out;
      },
      py::arg("triple"), py::arg("rate"), py::arg("common_rate"), py::arg("n_list"),
      py::arg("replicates") = 1, py::arg("slack") = 0.01, py::arg("seed") = 0,
      py::arg("mc_samples") = 10000);

  m.attr("__version__") = "0.1.0";
}
