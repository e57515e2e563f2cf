// Python bindings: the multigraph container, both compression/enumeration
// pipelines, and the brute-force oracles.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "enumk/fvs.hpp"
#include "enumk/graph.hpp"
#include "enumk/oracle.hpp"
#include "enumk/stream.hpp"
#include "enumk/vc.hpp"

namespace py = pybind11;
using namespace enumk;

namespace {

// Lazily pulls solutions out of a coroutine stream.
struct SolutionIterator {
    SolutionStream stream;
    VertexSet next() {
        if (!stream.next()) throw py::stop_iteration();
        return stream.value();
    }
};

py::dict report_dict(const SolutionSetReport& r) {
    py::dict d;
    d["count"] = r.count;
    d["solutions"] = r.solutions;
    d["complete"] = r.solutions_complete;
    return d;
}

}  // namespace

PYBIND11_MODULE(enumk, m) {
    m.doc() = "Enumeration kernels for vertex cover and feedback vertex set";

    py::class_<MultiGraph>(m, "Graph")
        .def(py::init<>())
        .def("add_vertex", &MultiGraph::add_vertex, py::arg("v"))
        .def("add_edge", &MultiGraph::add_edge, py::arg("u"), py::arg("v"),
             py::arg("mult") = 1)
        .def("remove_vertex", &MultiGraph::remove_vertex, py::arg("v"))
        .def("edge_mult", &MultiGraph::edge_mult, py::arg("u"), py::arg("v"))
        .def("degree", &MultiGraph::degree, py::arg("v"))
        .def("vertices", &MultiGraph::vertices)
        .def("num_vertices", &MultiGraph::num_vertices)
        .def("num_edges", &MultiGraph::num_edges)
        .def("__repr__", [](const MultiGraph& g) {
            return "Graph(" + std::to_string(g.num_vertices()) + " vertices, " +
                   std::to_string(g.num_edges()) + " edges)";
        });

    py::class_<SolutionIterator>(m, "SolutionIterator")
        .def("__iter__", [](SolutionIterator& it) -> SolutionIterator& { return it; })
        .def("__next__", &SolutionIterator::next);

    m.def(
        "parse", [](const std::string& text) { return parse_graph(text); }, py::arg("text"),
        "Parse an edge-list document");
    m.def("serialize", &serialize_graph, py::arg("graph"));
    m.def(
        "random_graph",
        [](int n, double p, double multi, double loops, std::uint64_t seed) {
            RandomSpec spec;
            spec.n = n;
            spec.p = p;
            spec.multiProb = multi;
            spec.loopProb = loops;
            spec.seed = seed;
            return random_graph(spec);
        },
        py::arg("n"), py::arg("p") = 0.3, py::arg("multi") = 0.0, py::arg("loops") = 0.0,
        py::arg("seed") = 0);

    m.def(
        "vc_compress",
        [](const MultiGraph& g, int k) {
            VcKernel kern = vc_compress(g, k);
            py::dict d;
            d["no_instance"] = kern.no_instance;
            d["graph"] = kern.graph;
            d["k"] = kern.k;
            d["trace"] = serialize_vc_trace(kern.trace);
            return d;
        },
        py::arg("graph"), py::arg("k"), "Compress to a vertex cover kernel");
    m.def(
        "fvs_compress",
        [](const MultiGraph& g, int k) {
            FvsKernel kern = fvs_compress(g, k);
            py::dict d;
            d["no_instance"] = kern.no_instance;
            d["graph"] = kern.graph;
            d["k"] = kern.k;
            d["trace"] = serialize_fvs_trace(kern.trace);
            return d;
        },
        py::arg("graph"), py::arg("k"), "Compress to a feedback vertex set kernel");

    m.def(
        "vc_enumerate",
        [](MultiGraph g, int k) { return SolutionIterator{vc_enumerate(std::move(g), k)}; },
        py::arg("graph"), py::arg("k"),
        "Stream every vertex cover of size at most k, one list per solution");
    m.def(
        "fvs_enumerate",
        [](MultiGraph g, int k) { return SolutionIterator{fvs_enumerate(std::move(g), k)}; },
        py::arg("graph"), py::arg("k"),
        "Stream every feedback vertex set of size at most k");

    m.def(
        "brute_vc", [](const MultiGraph& g, int k) { return report_dict(brute_vc(g, k)); },
        py::arg("graph"), py::arg("k"), "Exhaustive vertex cover oracle (small graphs)");
    m.def(
        "brute_fvs", [](const MultiGraph& g, int k) { return report_dict(brute_fvs(g, k)); },
        py::arg("graph"), py::arg("k"), "Exhaustive feedback vertex set oracle (small graphs)");

    py::register_exception<Error>(m, "EnumkError");
}
