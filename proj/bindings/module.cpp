#include "ahspec/runconfig.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ahspec;

PYBIND11_MODULE(_ahspec, mod) {
    mod.doc() = "Lichnerowicz Laplacian workbench on asymptotically hyperbolic "
                "surfaces";

    py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
    py::register_exception<UsageError>(mod, "UsageError", PyExc_ValueError);
    py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(mod, "NumericalError", PyExc_RuntimeError);

    py::enum_<OpKind>(mod, "OpKind")
        .value("rough_laplacian", OpKind::RoughLaplacian)
        .value("hodge_laplacian", OpKind::HodgeLaplacian)
        .value("lichnerowicz", OpKind::Lichnerowicz)
        .value("delta_k", OpKind::DeltaK)
        .value("scalar_laplacian", OpKind::ScalarLaplacian)
        .value("div_lring", OpKind::DivLRing)
        .value("identity", OpKind::Identity);

    py::class_<SurfaceModel>(mod, "SurfaceModel")
        .def_property_readonly("kind", &SurfaceModel::kind_name)
        .def_property_readonly("n_t", [](const SurfaceModel& m) { return m.chart().n_t(); })
        .def_property_readonly("n_theta",
                               [](const SurfaceModel& m) { return m.chart().n_theta(); })
        .def_property_readonly("t", [](const SurfaceModel& m) { return m.chart().t(); })
        .def_property_readonly("r", [](const SurfaceModel& m) { return m.chart().r(); })
        .def_property_readonly("scalar_curvature", &SurfaceModel::scalar_curvature)
        .def("snapshot_json", &SurfaceModel::snapshot_json);

    mod.def("hyperbolic_disk", &build_hyperbolic_disk, py::arg("t_min"), py::arg("t_max"),
            py::arg("n_t"), py::arg("n_theta"));
    mod.def(
        "conformal_perturbation",
        [](const SurfaceModel& base, double center, double halfwidth, double amplitude) {
            return build_conformal_perturbation(base,
                                                MollifierBump{center, halfwidth, amplitude});
        },
        py::arg("base"), py::arg("center"), py::arg("halfwidth"), py::arg("amplitude"));

    py::class_<TensorField>(mod, "TensorField")
        .def_property_readonly("rank", &TensorField::rank)
        .def_property_readonly("n_comp", &TensorField::n_comp)
        .def_property_readonly("tracefree", &TensorField::tracefree)
        .def("comp", [](const TensorField& f, int c) -> MatrixXd { return f.comp(c); })
        .def("max_abs", &TensorField::max_abs)
        .def("__add__", [](const TensorField& a, const TensorField& b) { return a + b; })
        .def("__sub__", [](const TensorField& a, const TensorField& b) { return a - b; })
        .def("__rmul__", [](const TensorField& a, double s) { return s * a; });

    mod.def("zeros", [](int rank, const SurfaceModel& m) {
        return TensorField::zeros(rank, m.chart());
    });
    mod.def("harmonic_oneform", &harmonic_oneform, py::arg("n"), py::arg("model"));
    mod.def("random_bump_field", &random_bump_field, py::arg("rank"), py::arg("t0"),
            py::arg("t1"), py::arg("seed"), py::arg("model"), py::arg("max_mode") = 4);
    mod.def("metric_field", &metric_field);
    mod.def("trace", &trace);
    mod.def("restrict_tracefree", &restrict_tracefree);
    mod.def("traceless_square", &traceless_square);
    mod.def("conformal_killing", &conformal_killing);
    mod.def("symmetrized_derivative", &symmetrized_derivative);
    mod.def("exterior_d", &exterior_d);
    mod.def("divergence", &divergence);
    mod.def("covariant_derivative", &covariant_derivative);
    mod.def("rough_laplacian", &rough_laplacian);
    mod.def("laplacian", &laplacian, py::arg("model"), py::arg("kind"), py::arg("field"));
    mod.def("l2_norm", &l2_norm);
    mod.def("l2_inner_product", &l2_inner_product);
    mod.def("norms", [](const SurfaceModel& m, const TensorField& f) {
        const NormReport r = norms(m, f);
        return py::make_tuple(r.l2, r.h1, r.l4);
    });

    py::class_<AssembledOperator>(mod, "AssembledOperator")
        .def_readonly("mode", &AssembledOperator::mode)
        .def_readonly("interior", &AssembledOperator::interior)
        .def_readonly("n_blocks", &AssembledOperator::n_blocks)
        .def_readonly("matrix", &AssembledOperator::matrix)
        .def_readonly("weight", &AssembledOperator::weight)
        .def_readonly("symmetry_defect", &AssembledOperator::symmetry_defect)
        .def("dim", &AssembledOperator::dim)
        .def("symmetrized", &AssembledOperator::symmetrized);
    mod.def("assemble_operator", &assemble_operator, py::arg("model"), py::arg("kind"),
            py::arg("mode"));

    py::class_<EigenPair>(mod, "EigenPair")
        .def_readonly("value", &EigenPair::value)
        .def_readonly("vector", &EigenPair::vector)
        .def_readonly("residual", &EigenPair::residual);
    mod.def("eigensolve_block", &eigensolve_block, py::arg("op"), py::arg("count"));
    mod.def("rayleigh_quotient", &rayleigh_quotient, py::arg("model"), py::arg("kind"),
            py::arg("field"), py::arg("skip") = 0);
    mod.def("rayleigh_floor", &rayleigh_floor, py::arg("kind"), py::arg("n_samples"),
            py::arg("model"), py::arg("seed"));

    py::class_<EigentensorRow>(mod, "EigentensorRow")
        .def_readonly("n", &EigentensorRow::n)
        .def_readonly("r_minus2", &EigentensorRow::r_minus2)
        .def_readonly("r0", &EigentensorRow::r0)
        .def_readonly("r0_plateau", &EigentensorRow::r0_plateau)
        .def_readonly("leak", &EigentensorRow::leak);
    py::class_<EigentensorReport>(mod, "EigentensorReport")
        .def_readonly("rows", &EigentensorReport::rows)
        .def_readonly("order_minus2", &EigentensorReport::order_minus2)
        .def_readonly("order_zero", &EigentensorReport::order_zero);
    mod.def("known_eigentensor_check", &known_eigentensor_check, py::arg("n_lo"),
            py::arg("n_hi"), py::arg("model"));

    py::class_<LadderSetup>(mod, "LadderSetup")
        .def(py::init<>())
        .def_readwrite("t_min", &LadderSetup::t_min)
        .def_readwrite("t_max", &LadderSetup::t_max)
        .def_readwrite("n_theta", &LadderSetup::n_theta)
        .def_readwrite("rungs", &LadderSetup::rungs)
        .def_readwrite("perturbed", &LadderSetup::perturbed)
        .def_readwrite("tol_scale", &LadderSetup::tol_scale);
    py::class_<IdentityReport>(mod, "IdentityReport")
        .def_readonly("name", &IdentityReport::name)
        .def_readonly("pass_", &IdentityReport::pass)
        .def_readonly("order", &IdentityReport::order)
        .def_readonly("value", &IdentityReport::value)
        .def_readonly("threshold", &IdentityReport::threshold)
        .def_readonly("detail", &IdentityReport::detail);
    mod.def("run_identity_suite", &run_identity_suite, py::arg("seed"),
            py::arg("setup") = LadderSetup{});

    py::class_<ScanRow>(mod, "ScanRow")
        .def_readonly("lam", &ScanRow::lambda)
        .def_readonly("R", &ScanRow::R)
        .def_readonly("res", &ScanRow::res)
        .def_readonly("norm", &ScanRow::norm)
        .def_readonly("ratio", &ScanRow::ratio);
    py::class_<ScanFit>(mod, "ScanFit")
        .def_readonly("lam", &ScanFit::lambda)
        .def_readonly("ratio_slope", &ScanFit::ratio_slope)
        .def_readonly("norm2_slope", &ScanFit::norm2_slope)
        .def_readonly("pass_", &ScanFit::pass);
    py::class_<QuasimodeScan>(mod, "QuasimodeScan")
        .def_readonly("rows", &QuasimodeScan::rows)
        .def_readonly("fits", &QuasimodeScan::fits)
        .def("summary_json", &QuasimodeScan::summary_json);
    mod.def("build_scan_chart", &build_scan_chart, py::arg("lambdas"), py::arg("radii"),
            py::arg("t_min"), py::arg("n_theta"));
    mod.def("quasimode_scan", &quasimode_scan, py::arg("lambdas"), py::arg("radii"),
            py::arg("model"));
    mod.def("indicial_roots", [](double lam) {
        const IndicialRoots r = indicial_roots(lam);
        return py::make_tuple(r.s1, r.s2);
    });

    py::class_<SpectralConfig>(mod, "SpectralConfig")
        .def(py::init<>())
        .def_readwrite("m_max", &SpectralConfig::m_max)
        .def_readwrite("count", &SpectralConfig::count)
        .def_readwrite("n_lo", &SpectralConfig::n_lo)
        .def_readwrite("n_hi", &SpectralConfig::n_hi)
        .def_readwrite("with_scan", &SpectralConfig::with_scan)
        .def_readwrite("scan_lambdas", &SpectralConfig::scan_lambdas)
        .def_readwrite("scan_Rs", &SpectralConfig::scan_Rs)
        .def("set_perturbation",
             [](SpectralConfig& c, double center, double halfwidth, double amplitude) {
                 c.perturbation = MollifierBump{center, halfwidth, amplitude};
             });
    py::class_<Verdict>(mod, "Verdict")
        .def_readonly("name", &Verdict::name)
        .def_readonly("status", &Verdict::status)
        .def_readonly("detail", &Verdict::detail);
    py::class_<SpectrumReport>(mod, "SpectrumReport")
        .def_readonly("model_kind", &SpectrumReport::model_kind)
        .def_readonly("eigenvalues", &SpectrumReport::eigenvalues)
        .def_readonly("verdicts", &SpectrumReport::verdicts)
        .def("all_pass", &SpectrumReport::all_pass)
        .def("report_json", &SpectrumReport::report_json);
    mod.def("spectral_picture", &spectral_picture, py::arg("model"), py::arg("config"));
}
