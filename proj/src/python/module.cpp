#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "quasibasis/errors.hpp"
#include "quasibasis/pipeline.hpp"
#include "quasibasis/report_io.hpp"

namespace py = pybind11;
namespace qb = quasibasis;

namespace {

// Reports cross the boundary as plain dicts, same layout as the JSON files.
py::object to_python(const qb::ordered_json& doc) {
    return py::module_::import("json").attr("loads")(doc.dump());
}

qb::Scenario scenario_from(const py::object& source) {
    if (py::isinstance<py::dict>(source)) {
        const std::string text = py::module_::import("json").attr("dumps")(source).cast<std::string>();
        return qb::parse_scenario(nlohmann::json::parse(text));
    }
    const std::string name = py::str(source);
    for (const auto& demo : qb::bundled_demo_names())
        if (demo == name) return qb::bundled_demo(name);
    return qb::load_scenario(name);
}

qb::Region region_from_boxes(const std::vector<std::pair<qb::Vec, qb::Vec>>& boxes) {
    std::vector<qb::Box> out;
    for (const auto& [lo, hi] : boxes) out.push_back({lo, hi});
    return qb::BoxUnionRegion(out);
}

py::dict enumeration_arrays(const qb::BlockEnumeration& e) {
    const auto n = static_cast<py::ssize_t>(e.entries.size());
    py::array_t<long long> j(n), block(n);
    py::array_t<double> lambda(n), delta(n);
    auto jm = j.mutable_unchecked<1>();
    auto bm = block.mutable_unchecked<1>();
    auto lm = lambda.mutable_unchecked<1>();
    auto dm = delta.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < n; ++i) {
        const auto& b = e.entries[static_cast<std::size_t>(i)];
        jm(i) = b.j;
        bm(i) = b.n;
        lm(i) = b.lambda;
        dm(i) = b.delta;
    }
    py::dict out;
    out["k"] = e.k;
    out["j"] = j;
    out["n"] = block;
    out["lambda"] = lambda;
    out["delta"] = delta;
    return out;
}

}  // namespace

PYBIND11_MODULE(_quasibasis, m) {
    m.doc() = "Riesz bases of exponentials from cut-and-project quasicrystals";
    m.attr("__version__") = qb::kToolVersion;

    // Translators run newest first, so the subclass is registered last.
    py::register_exception<qb::Error>(m, "QuasibasisError", PyExc_RuntimeError);
    py::register_exception<qb::InvalidInput>(m, "InvalidInput", PyExc_ValueError);

    m.def("demo_names", &qb::bundled_demo_names);

    m.def(
        "run_demo",
        [](const std::string& name, const std::filesystem::path& out, std::optional<std::uint64_t> seed) {
            py::gil_scoped_release release;
            return qb::cmd_demo(name, {out, false}, seed);
        },
        py::arg("name"), py::arg("out_dir"), py::arg("seed") = py::none(),
        "Run a bundled scenario end to end; returns the CLI exit code.");

    m.def(
        "gamma_generators",
        [](int k, const qb::Vec& alpha, const qb::Vec& beta) {
            const qb::GammaGenerators g = qb::gamma_generators(qb::make_params(k, alpha, beta));
            return py::make_tuple(g.gamma_basis, g.gamma_star_basis);
        },
        py::arg("k"), py::arg("alpha"), py::arg("beta"));

    m.def(
        "multiplicity",
        [](const std::vector<std::pair<qb::Vec, qb::Vec>>& boxes, const qb::Mat& basis, const qb::Vec& x) {
            return qb::multiplicity(region_from_boxes(boxes), qb::Lattice(basis), x);
        },
        py::arg("boxes"), py::arg("lattice_basis"), py::arg("x"));

    m.def(
        "constant_c",
        [](const std::vector<std::pair<qb::Vec, qb::Vec>>& boxes, const qb::Vec& beta, int k) {
            return qb::constant_c(region_from_boxes(boxes), beta, k);
        },
        py::arg("boxes"), py::arg("beta"), py::arg("k"));

    m.def(
        "gram_1d",
        [](const std::vector<double>& freqs, int k, bool allow_duplicates) {
            return qb::gram_1d(freqs, k, allow_duplicates).entries;
        },
        py::arg("frequencies"), py::arg("k"), py::arg("allow_duplicates") = false);

    m.def(
        "frame_bounds",
        [](const qb::CMat& hermitian) { return to_python(qb::to_json(qb::frame_bounds(hermitian))); },
        py::arg("hermitian"));

    py::class_<qb::Pipeline>(m, "Pipeline")
        .def(py::init([](const py::object& source, std::optional<std::uint64_t> seed) {
                 qb::Scenario s = scenario_from(source);
                 if (seed) s.seed = *seed;
                 return qb::Pipeline(std::move(s));
             }),
             py::arg("scenario"), py::arg("seed") = py::none(),
             "Scenario as a dict, a JSON file path or a bundled demo name.")
        .def_property_readonly("name", [](qb::Pipeline& p) { return p.scenario().name; })
        .def("tiling", [](qb::Pipeline& p) { return to_python(qb::to_json(p.tiling())); })
        .def("params", [](qb::Pipeline& p) { return to_python(qb::to_json(p.params())); })
        .def("pullback", [](qb::Pipeline& p) { return p.pullback(); })
        .def("enumeration", [](qb::Pipeline& p) { return enumeration_arrays(p.exported_enumeration()); })
        .def("avdonin",
             [](qb::Pipeline& p) {
                 qb::AvdoninStage stage;
                 {
                     py::gil_scoped_release release;
                     stage = p.avdonin();
                 }
                 py::dict out = to_python(qb::to_json(stage.report));
                 out["kadec_n1"] = stage.kadec;
                 out["failure"] = stage.failure ? py::cast(*stage.failure) : py::none();
                 return out;
             })
        .def("frame", [](qb::Pipeline& p) {
            qb::FrameStage stage;
            {
                py::gil_scoped_release release;
                stage = p.frame();
            }
            py::dict out;
            out["interval_side"] = to_python(qb::to_json(stage.one_d));
            out["region_side"] = to_python(qb::to_json(stage.multi_d));
            out["fuglede_control"] = stage.fuglede ? to_python(qb::to_json(*stage.fuglede)) : py::none();
            out["duality"] = to_python(qb::to_json(stage.duality));
            out["rank_ok"] = stage.rank_ok;
            return out;
        });
}
