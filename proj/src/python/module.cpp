#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/stl.h>

#include "modspec/bounds.hpp"
#include "modspec/estimator.hpp"
#include "modspec/experiments.hpp"
#include "modspec/signal.hpp"

namespace py = pybind11;
using namespace modspec;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Modulo-folded sampling, Cramer-Rao bounds, and matrix-pencil estimation";

    py::register_exception<SnapError>(m, "SnapError");
    py::register_exception<DegenerateFrequency>(m, "DegenerateFrequency");
    py::register_exception<SingularFim>(m, "SingularFim");
    py::register_exception<OrderTooLarge>(m, "OrderTooLarge");

    py::class_<Sinusoid>(m, "Sinusoid")
        .def(py::init<double, double, double>(), py::arg("amplitude") = 1.0, py::arg("omega") = 1.0,
             py::arg("phase") = 0.0)
        .def_readwrite("amplitude", &Sinusoid::amplitude)
        .def_readwrite("omega", &Sinusoid::omega)
        .def_readwrite("phase", &Sinusoid::phase);

    py::class_<SoSParams>(m, "SoSParams")
        .def(py::init<>())
        .def(py::init([](std::vector<Sinusoid> components) {
                 SoSParams p{std::move(components)};
                 p.validate();
                 return p;
             }),
             py::arg("components"))
        .def_readwrite("components", &SoSParams::components)
        .def("l1_amplitude", &SoSParams::l1_amplitude)
        .def("max_omega", &SoSParams::max_omega);

    py::class_<SamplingConfig>(m, "SamplingConfig")
        .def(py::init<>())
        .def_readwrite("threshold", &SamplingConfig::threshold)
        .def_readwrite("step", &SamplingConfig::step)
        .def_readwrite("count", &SamplingConfig::count)
        .def_readwrite("noise_sigma", &SamplingConfig::noise_sigma)
        .def_readwrite("seed", &SamplingConfig::seed);

    py::class_<FoldedTrace>(m, "FoldedTrace")
        .def_readonly("samples", &FoldedTrace::samples)
        .def_readonly("config", &FoldedTrace::config);

    py::class_<ResidueSpike>(m, "ResidueSpike")
        .def_readonly("index", &ResidueSpike::index)
        .def_readonly("coefficient", &ResidueSpike::coefficient);

    py::class_<ResidueSpec>(m, "ResidueSpec")
        .def_readonly("spikes", &ResidueSpec::spikes)
        .def("fold_count", &ResidueSpec::fold_count);

    py::class_<CrbReport>(m, "CrbReport")
        .def_readonly("gamma", &CrbReport::gamma)
        .def_readonly("psnr", &CrbReport::psnr)
        .def_readonly("bound_amplitude", &CrbReport::bound_amplitude)
        .def_readonly("bound_omega_t", &CrbReport::bound_omega_t)
        .def_readonly("bound_phase", &CrbReport::bound_phase);

    py::class_<NoiseModelReport>(m, "NoiseModelReport")
        .def_readonly("p", &NoiseModelReport::p)
        .def_readonly("q", &NoiseModelReport::q)
        .def_readonly("e2", &NoiseModelReport::e2);

    py::class_<EstimatedComponent>(m, "EstimatedComponent")
        .def_readonly("omega_t", &EstimatedComponent::omega_t)
        .def_readonly("amplitude", &EstimatedComponent::amplitude)
        .def_readonly("phase", &EstimatedComponent::phase)
        .def_readonly("amplitude_diff", &EstimatedComponent::amplitude_diff)
        .def_readonly("phase_diff", &EstimatedComponent::phase_diff);

    py::class_<EstimateResult>(m, "EstimateResult")
        .def_readonly("components", &EstimateResult::components)
        .def_readonly("model_order", &EstimateResult::model_order)
        .def_readonly("singular_values", &EstimateResult::singular_values)
        .def_readonly("poles", &EstimateResult::poles)
        .def_readonly("rank_deficient", &EstimateResult::rank_deficient);

    m.def("fold", &fold, py::arg("value"), py::arg("threshold"));
    m.def("synthesize", &synthesize, py::arg("params"), py::arg("config"));
    m.def("acquire", &acquire, py::arg("params"), py::arg("config"));
    m.def("residue", &residue, py::arg("params"), py::arg("config"));
    m.def(
        "finite_difference",
        [](const std::vector<double>& x, int order) { return finite_difference(x, order); },
        py::arg("x"), py::arg("order"));
    m.def("max_step", &max_step, py::arg("params"), py::arg("kappa"), py::arg("order"));
    m.def("diff_norm_bound", &diff_norm_bound, py::arg("params"), py::arg("step"), py::arg("order"));

    m.def("gamma_factor", &gamma_factor, py::arg("omega_t"));
    m.def("crb_closed_form", &crb_closed_form, py::arg("a1"), py::arg("omega_t"), py::arg("sigma"),
          py::arg("count"));
    m.def("crb_conventional_asymptotic", &crb_conventional_asymptotic, py::arg("a1"),
          py::arg("sigma"), py::arg("count"));
    m.def("crb_conventional", &crb_conventional, py::arg("params"), py::arg("sigma"),
          py::arg("step"), py::arg("count"));
    m.def(
        "crb_fim",
        [](const SoSParams& params, const SamplingConfig& config) {
            return crb_fim(params, config).second;
        },
        py::arg("params"), py::arg("config"));
    m.def("trig_power_sum", &trig_power_sum, py::arg("count"), py::arg("omega"), py::arg("phi"),
          py::arg("order"));
    m.def("bernoulli_residue_stats", &bernoulli_residue_stats, py::arg("spec"), py::arg("count"),
          py::arg("threshold") = 0.0, py::arg("sigma") = 0.0);
    m.def("pdf_approx_error", &pdf_approx_error, py::arg("p"), py::arg("threshold"),
          py::arg("sigma"));

    py::class_<PencilOptions>(m, "PencilOptions")
        .def(py::init<>())
        .def_readwrite("min_magnitude", &PencilOptions::min_magnitude)
        .def_readwrite("max_magnitude", &PencilOptions::max_magnitude)
        .def_readwrite("subspace_extra", &PencilOptions::subspace_extra)
        .def_readwrite("refine_iterations", &PencilOptions::refine_iterations);

    m.def("estimate", &estimate, py::arg("trace"), py::arg("model_order"),
          py::arg("pencil_param") = std::nullopt, py::arg("options") = PencilOptions{});
    m.def("back_out_difference_model", &back_out_difference_model, py::arg("amplitude_diff"),
          py::arg("phase_diff"), py::arg("omega_t"));
}
