#include <pybind11/pybind11.h>

#include "uwsn/errors.hpp"
#include "uwsn/harness.hpp"
#include "uwsn/io.hpp"

namespace py = pybind11;
using namespace uwsn;

// Structured values cross the boundary as JSON text; the Python wrapper decodes them.
namespace {

Environment environment_from(const std::string& text) {
    return text.empty() ? Environment{} : json::parse(text).get<Environment>();
}

ExperimentSpec spec_from(const std::string& text) {
    auto spec = text.empty() ? ExperimentSpec{} : json::parse(text).get<ExperimentSpec>();
    if (spec.auv_density) spec = with_density(spec, *spec.auv_density);
    spec.validate();
    return spec;
}

std::string deploy(const std::string& spec_text) {
    const auto spec = spec_from(spec_text);
    return json(random_deploy(spec.counts, spec.environment, spec.field_size, spec.base_seed)).dump();
}

std::string optimize(const std::string& topology_text, const std::string& spec_text) {
    const auto topology = json::parse(topology_text).get<Topology>();
    const auto spec = spec_from(spec_text);
    PipelineResult result;
    {
        py::gil_scoped_release release;
        result = optimize_pipeline(topology, spec.optimizer);
    }
    return json(result).dump();
}

std::string run(const std::string& spec_text, int run_index) {
    const auto spec = spec_from(spec_text);
    RunOutcome out;
    {
        py::gil_scoped_release release;
        out = run_single(spec, run_index);
    }
    json reports = json::array();
    for (const auto& r : out.reports) reports.push_back(r);
    return json{{"run", out.run}, {"seed", out.seed}, {"deployed", out.deployed}, {"reports", reports}}.dump();
}

std::string experiment(const std::string& spec_text) {
    const auto spec = spec_from(spec_text);
    AggregateResult agg;
    {
        py::gil_scoped_release release;
        agg = run_experiment(spec);
    }
    json j = agg;
    j["runs_csv"] = runs_csv(agg.raw);
    return j.dump();
}

}  // namespace

PYBIND11_MODULE(_uwsn, m) {
    m.doc() = "Underwater EM sensor network simulator core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def("conductivity", [](const std::string& env) { return physics::conductivity(environment_from(env)); },
          py::arg("environment") = "");
    m.def("attenuation_coefficient",
          [](const std::string& env) { return physics::attenuation_coefficient(environment_from(env)); },
          py::arg("environment") = "");
    m.def("phase_velocity", [](const std::string& env) { return physics::phase_velocity(environment_from(env)); },
          py::arg("environment") = "");
    m.def("total_attenuation",
          [](double d, bool from_auv, const std::string& env) {
              return physics::total_attenuation(environment_from(env), d, from_auv);
          },
          py::arg("distance_m"), py::arg("from_auv") = false, py::arg("environment") = "");
    m.def("delivery_probability",
          [](double attenuation_db, double slope, double theta) {
              return physics::delivery_probability(DeliveryModel{slope, theta}, attenuation_db);
          },
          py::arg("attenuation_db"), py::arg("slope"), py::arg("theta"));

    m.def("deploy", &deploy, py::arg("spec") = "");
    m.def("optimize", &optimize, py::arg("topology"), py::arg("spec") = "");
    m.def("run", &run, py::arg("spec") = "", py::arg("run_index") = 0);
    m.def("experiment", &experiment, py::arg("spec") = "");
}
