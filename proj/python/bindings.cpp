#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "lrdchain/alt_generators.hpp"
#include "lrdchain/chain.hpp"
#include "lrdchain/error.hpp"
#include "lrdchain/estimators.hpp"
#include "lrdchain/experiments.hpp"

namespace py = pybind11;
using namespace lrd;

namespace {

template <class T>
py::array_t<T> to_numpy(std::vector<T>&& v) {
    auto* heap = new std::vector<T>(std::move(v));
    py::capsule owner(heap, [](void* p) { delete static_cast<std::vector<T>*>(p); });
    const auto n = static_cast<py::ssize_t>(heap->size());
    return py::array_t<T>({n}, {static_cast<py::ssize_t>(sizeof(T))}, heap->data(), owner);
}

std::span<const double> view(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
    return {a.data(), static_cast<std::size_t>(a.size())};
}

Method method_from(const std::string& name) {
    if (auto m = parse_method(name)) return *m;
    throw py::value_error("unknown method: " + name);
}

py::dict estimate_dict(const HurstEstimate& e) {
    py::dict d;
    d["method"] = std::string(to_string(e.method));
    d["h"] = e.h;
    d["ci_low"] = e.ci_low;
    d["ci_high"] = e.ci_high;
    d["r2"] = e.fit ? py::cast(e.fit->r2) : py::none();
    d["flagged"] = e.fit ? e.fit->flagged() : false;
    d["n_used"] = e.n_used;
    return d;
}

}  // namespace

PYBIND11_MODULE(_lrdchain, m) {
    m.doc() = "Binary Markov chain with power-law jumps, reference generators and Hurst estimators.";

    // Raised as LrdError(code, message); code is the ErrorCode name.
    static py::exception<Error> lrd_error(m, "LrdError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object cls = lrd_error;
            PyErr_SetObject(cls.ptr(), py::make_tuple(std::string(to_string(e.code())), e.what()).ptr());
        }
    });

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init(&validate_params), py::arg("pi0"), py::arg("alpha"), py::arg("seed") = 0)
        .def_static("from_mean_hurst", &params_from_mean_hurst, py::arg("mean"), py::arg("hurst"),
                    py::arg("seed") = 0)
        .def_readonly("pi0", &ModelParams::pi0)
        .def_readonly("alpha", &ModelParams::alpha)
        .def_readonly("seed", &ModelParams::seed)
        .def_property_readonly("hurst", &ModelParams::hurst)
        .def_property_readonly("mean", &ModelParams::mean)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(pi0=" + std::to_string(p.pi0) + ", alpha=" + std::to_string(p.alpha) +
                   ", seed=" + std::to_string(p.seed) + ")";
        });

    m.def("validity_threshold", &validity_threshold, py::arg("alpha"));
    m.def("hurst_to_alpha", &hurst_to_alpha, py::arg("hurst"));
    m.def("alpha_to_hurst", &alpha_to_hurst, py::arg("alpha"));
    m.def("jump_prob", &jump_prob, py::arg("k"), py::arg("params"));
    m.def("jump_tail", &jump_tail, py::arg("k"), py::arg("params"));
    m.def("equilibrium_pi", &equilibrium_pi, py::arg("k"), py::arg("params"));
    m.def("equilibrium_tail", &equilibrium_tail, py::arg("k"), py::arg("params"));

    m.def(
        "generate",
        [](const ModelParams& p, std::size_t n) {
            BinarySeries s;
            {
                py::gil_scoped_release release;
                s = generate(p, n);
            }
            return to_numpy(std::move(s.symbols));
        },
        py::arg("params"), py::arg("n"), "Symbols 0/1 as uint8, started from equilibrium.");

    m.def(
        "map_generate",
        [](double hurst, std::size_t n, std::uint64_t seed, double d) {
            BinarySeries s;
            {
                py::gil_scoped_release release;
                s = map_generate(map_params_for_hurst(hurst, seed, d), n);
            }
            return to_numpy(std::move(s.symbols));
        },
        py::arg("hurst"), py::arg("n"), py::arg("seed") = 0, py::arg("d") = 0.5);

    m.def(
        "fgn_generate",
        [](double hurst, std::size_t n, std::uint64_t seed) {
            RealSeries s;
            {
                py::gil_scoped_release release;
                s = fgn_generate(hurst, n, seed);
            }
            return to_numpy(std::move(s.values));
        },
        py::arg("hurst"), py::arg("n"), py::arg("seed") = 0);

    m.def(
        "acf",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, std::size_t max_lag) {
            return to_numpy(acf(view(x), max_lag));
        },
        py::arg("values"), py::arg("max_lag"));

    m.def(
        "estimate",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, const std::string& method) {
            return estimate_dict(estimate(method_from(method), view(x)));
        },
        py::arg("values"), py::arg("method"));

    m.def(
        "estimate_all",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
            py::dict out;
            for (const auto& o : estimate_all(view(x))) {
                const std::string name(to_string(o.method));
                if (o.estimate)
                    out[name.c_str()] = estimate_dict(*o.estimate);
                else
                    out[name.c_str()] = py::none();
            }
            return out;
        },
        py::arg("values"), "Maps each method name to its estimate, or None when it failed.");

    m.def("methods", [] {
        py::list names;
        for (Method x : kAllMethods) names.append(std::string(to_string(x)));
        return names;
    });

    m.def(
        "law_checks",
        [](const ModelParams& p, std::uint64_t k_max) {
            py::list out;
            for (const auto& c : law_checks(p, k_max)) out.append(py::make_tuple(c.name, c.pass, c.measured, c.limit));
            return out;
        },
        py::arg("params"), py::arg("k_max") = 100000, "List of (name, passed, measured, limit).");
}
