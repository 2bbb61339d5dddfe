#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lambdagen/boltzmann.hpp"
#include "lambdagen/counting.hpp"
#include "lambdagen/errors.hpp"
#include "lambdagen/recursive.hpp"
#include "lambdagen/remy.hpp"
#include "lambdagen/serialize.hpp"
#include "lambdagen/term.hpp"
#include "lambdagen/tuner.hpp"
#include "lambdagen/typing.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace lambdagen;

namespace {

py::object big_to_py(const BigInt& v) {
    return py::reinterpret_steal<py::object>(
        PyLong_FromString(v.str().c_str(), nullptr, 10));
}

// Boltzmann state bundled for repeated draws from one calibration.
struct ClosedSampler {
    BoltzmannOracle oracle;
    SamplerConfig config;
    Rng rng;
    SampleStats last{};

    ClosedSampler(std::size_t n, double tolerance, std::size_t truncation,
                  const SizeModel& model, std::uint64_t seed)
        : oracle(make_boltzmann_oracle(model, truncation, calibrate_terms(n, model, truncation))),
          rng(seed) {
        config.target_size = n;
        config.tolerance = tolerance;
    }

    ClosedSampler(const TuningProfile& profile, double tolerance, std::uint64_t seed)
        : oracle(make_boltzmann_oracle(profile.model, profile.truncation, profile.x,
                                       profile.weights)),
          rng(seed) {
        config.target_size = profile.target_size;
        config.tolerance = tolerance;
    }

    Term sample() { return sample_closed(oracle, config, rng, &last); }
};

}  // namespace

PYBIND11_MODULE(_lambdagen, m) {
    m.doc() = "uniform random lambda terms in de Bruijn notation";

    py::class_<SizeModel>(m, "SizeModel")
        .def_static("natural", &SizeModel::natural)
        .def_static("constant", &SizeModel::constant, py::arg("var") = 1, py::arg("abs") = 1,
                    py::arg("app") = 1)
        .def_static("unary", &SizeModel::unary, py::arg("zero"), py::arg("succ"),
                    py::arg("abs") = 1, py::arg("app") = 1)
        .def_readwrite("abs_weight", &SizeModel::abs_weight)
        .def_readwrite("app_weight", &SizeModel::app_weight)
        .def_readwrite("zero_weight", &SizeModel::zero_weight)
        .def_readwrite("succ_weight", &SizeModel::succ_weight)
        .def_readwrite("var_weight", &SizeModel::var_weight)
        .def("__eq__", [](const SizeModel& a, const SizeModel& b) { return a == b; });

    py::class_<Term>(m, "Term")
        .def_static(
            "parse",
            [](const std::string& text, const std::string& format) {
                return parse(text, term_format_from_name(format));
            },
            py::arg("text"), py::arg("format") = "debruijn")
        .def(
            "render",
            [](const Term& t, const std::string& format) {
                return render(t, term_format_from_name(format));
            },
            py::arg("format") = "debruijn")
        .def("size",
             [](const Term& t, std::optional<SizeModel> model) {
                 return term_size(t, model ? *model : SizeModel::natural());
             },
             py::arg("model") = py::none())
        .def("node_count", &Term::node_count)
        .def("clone", &Term::clone)
        .def("min_openness", [](const Term& t) { return min_openness(t); })
        .def("is_open_at", [](const Term& t, std::size_t m) { return is_m_open(t, m); },
             py::arg("m"))
        .def("index_histogram", [](const Term& t) { return index_histogram(t); })
        .def("__eq__", [](const Term& a, const Term& b) { return a == b; })
        .def("__repr__",
             [](const Term& t) { return "<Term " + render(t, TermFormat::DeBruijn) + ">"; });

    m.def("index", &Term::index, py::arg("n"));
    m.def("app", [](const Term& l, const Term& r) { return Term::app(l.clone(), r.clone()); });
    m.def("lam", [](const Term& body) { return Term::abs(body.clone()); });

    py::class_<CountTable>(m, "CountTable")
        .def_readonly("truncation", &CountTable::truncation)
        .def_readonly("max_size", &CountTable::max_size)
        .def("at",
             [](const CountTable& t, std::size_t m, std::size_t n) { return big_to_py(t.at(m, n)); },
             py::arg("m"), py::arg("n"))
        .def("plain",
             [](const CountTable& t, std::size_t n) { return big_to_py(t.plain_at(n)); },
             py::arg("n"))
        .def("to_json", [](const CountTable& t) { return t.to_json(); });

    m.def(
        "count_table",
        [](std::optional<SizeModel> model, std::size_t truncation, std::size_t max_size) {
            return build_count_table(model ? *model : SizeModel::natural(), truncation, max_size);
        },
        py::arg("model") = py::none(), py::arg("truncation") = 20, py::arg("max_size") = 64);

    m.def("catalan", [](std::size_t n) { return big_to_py(catalan(n)); }, py::arg("n"));

    py::class_<RecursiveSampler>(m, "RecursiveSampler")
        .def(py::init([](const CountTable& table, std::uint64_t seed) {
                 return RecursiveSampler(std::make_shared<const CountTable>(table), seed);
             }),
             py::arg("table"), py::arg("seed") = 0)
        .def("gen", &RecursiveSampler::gen, py::arg("m"), py::arg("n"));

    m.def(
        "enumerate_terms",
        [](std::size_t m, std::size_t n, std::optional<SizeModel> model) {
            return enumerate_terms(model ? *model : SizeModel::natural(), m, n);
        },
        py::arg("m"), py::arg("n"), py::arg("model") = py::none());

    py::class_<BinaryTree>(m, "BinaryTree")
        .def("shape", &BinaryTree::shape)
        .def_property_readonly("internal_nodes", &BinaryTree::internal_nodes)
        .def_property_readonly("leaves", &BinaryTree::leaves)
        .def("__eq__", [](const BinaryTree& a, const BinaryTree& b) { return a == b; })
        .def("__repr__", [](const BinaryTree& t) { return "<BinaryTree " + t.shape() + ">"; });

    m.def(
        "remy_tree",
        [](std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            return remy_tree(n, rng);
        },
        py::arg("n"), py::arg("seed") = 0);

    py::class_<Combinator>(m, "Combinator")
        .def_static("parse", &Combinator::parse, py::arg("text"))
        .def("render", &Combinator::render)
        .def_property_readonly("applications", &Combinator::applications)
        .def_property_readonly("leaf_sequence", &Combinator::leaf_sequence)
        .def("__eq__", [](const Combinator& a, const Combinator& b) { return a == b; })
        .def("__repr__", [](const Combinator& c) { return "<Combinator " + c.render() + ">"; });

    m.def(
        "sk_combinator",
        [](std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            return sk_combinator(n, rng);
        },
        py::arg("n"), py::arg("seed") = 0);

    m.def("calibrate_binary_tree",
          [](std::size_t n) { return static_cast<double>(calibrate_binary_tree(n)); },
          py::arg("n"));
    m.def("calibrate_binary_tree_decimal",
          [](std::size_t n) { return calibrate_binary_tree(n).str(); }, py::arg("n"));
    m.def(
        "calibrate_terms",
        [](std::size_t n, std::optional<SizeModel> model, std::size_t truncation) {
            return static_cast<double>(
                calibrate_terms(n, model ? *model : SizeModel::natural(), truncation));
        },
        py::arg("n"), py::arg("model") = py::none(), py::arg("truncation") = 20);

    py::class_<ClosedSampler>(m, "ClosedSampler")
        .def(py::init([](std::size_t n, double tolerance, std::size_t truncation,
                         std::optional<SizeModel> model, std::uint64_t seed) {
                 return ClosedSampler(n, tolerance, truncation,
                                      model ? *model : SizeModel::natural(), seed);
             }),
             py::arg("n"), py::arg("tolerance") = 0.1, py::arg("truncation") = 20,
             py::arg("model") = py::none(), py::arg("seed") = 0)
        .def("sample", &ClosedSampler::sample)
        .def_property_readonly("last_attempts",
                               [](const ClosedSampler& s) { return s.last.attempts; })
        .def_property_readonly("last_size",
                               [](const ClosedSampler& s) { return s.last.accepted_size; });

    m.def(
        "tune",
        [](const std::vector<double>& targets, std::size_t n, std::optional<SizeModel> model,
           std::size_t truncation) {
            const TuningProfile profile =
                tune(targets, n, model ? *model : SizeModel::natural(), truncation);
            return py::module_::import("json").attr("loads")(profile.to_json());
        },
        py::arg("targets"), py::arg("n"), py::arg("model") = py::none(),
        py::arg("truncation") = 20);

    m.def(
        "tuned_sampler",
        [](const std::vector<double>& targets, std::size_t n, double tolerance,
           std::optional<SizeModel> model, std::size_t truncation, std::uint64_t seed) {
            const TuningProfile profile =
                tune(targets, n, model ? *model : SizeModel::natural(), truncation);
            return ClosedSampler(profile, tolerance, seed);
        },
        py::arg("targets"), py::arg("n"), py::arg("tolerance") = 0.1,
        py::arg("model") = py::none(), py::arg("truncation") = 20, py::arg("seed") = 0);

    m.def("infer_type", [](const Term& t) -> std::optional<std::string> {
        const auto ty = infer(t);
        if (!ty) return std::nullopt;
        return ty->render();
    });

    m.def(
        "sample_typed",
        [](std::size_t n, const std::string& method, std::uint64_t seed,
           std::optional<SizeModel> model, std::size_t max_attempts, double tolerance) {
            Rng rng(seed);
            std::size_t attempts = 0;
            auto [t, ty] = sample_typed(n, model ? *model : SizeModel::natural(),
                                        method == "boltzmann" ? TypedMethod::Boltzmann
                                                              : TypedMethod::Recursive,
                                        rng, max_attempts, tolerance, &attempts);
            return py::make_tuple(std::move(t), ty.render(), attempts);
        },
        py::arg("n"), py::arg("method") = "recursive", py::arg("seed") = 0,
        py::arg("model") = py::none(), py::arg("max_attempts") = 1000000,
        py::arg("tolerance") = 0.1);

    py::register_exception<Error>(m, "LambdagenError", PyExc_RuntimeError);
}
