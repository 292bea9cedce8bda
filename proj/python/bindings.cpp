#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "jedi/corpus.hpp"
#include "jedi/distance.hpp"
#include "jedi/jedi_order.hpp"
#include "jedi/jsim_index.hpp"
#include "jedi/lookup.hpp"
#include "jedi/synth.hpp"

namespace py = pybind11;
using namespace jedi;

namespace {

EngineKind parse_engine(const std::string& name) {
    if (name == "quick") return EngineKind::Quick;
    if (name == "baseline") return EngineKind::Baseline;
    throw std::invalid_argument("engine must be 'quick' or 'baseline'");
}

JsonTree tree_of(const std::string& text) { return parse_json_tree(text); }

} // namespace

PYBIND11_MODULE(jedidist, m) {
    m.doc() = "Similarity lookup over JSON documents by tree edit distance";

    m.def(
        "canonicalize", [](const std::string& text) { return serialize_tree(tree_of(text)); },
        py::arg("text"),
        "Parse a JSON document and re-serialize it in canonical compact form.");

    m.def(
        "sort_doc",
        [](const std::string& text) { return serialize_tree(sort_tree(tree_of(text))); },
        py::arg("text"), "Canonical form with object members ordered by key.");

    m.def(
        "distance",
        [](const std::string& a, const std::string& b, const std::string& engine) {
            JsonTree ta = tree_of(a), tb = tree_of(b);
            return parse_engine(engine) == EngineKind::Quick ? quickjedi(ta, tb)
                                                             : jedi_baseline(ta, tb);
        },
        py::arg("a"), py::arg("b"), py::arg("engine") = "quick",
        "Edit distance between two documents (array order fixed, object member "
        "order free).");

    m.def(
        "order_distance",
        [](const std::string& a, const std::string& b) {
            return jedi_order_exact(sort_tree(tree_of(a)), sort_tree(tree_of(b)));
        },
        py::arg("a"), py::arg("b"),
        "Order-sensitive distance over the key-sorted forms; an upper bound on "
        "distance().");

    m.def(
        "within",
        [](const std::string& a, const std::string& b, std::int64_t tau) {
            return jofilter(sort_tree(tree_of(a)), sort_tree(tree_of(b)), tau);
        },
        py::arg("a"), py::arg("b"), py::arg("tau"),
        "True when order_distance(a, b) <= tau, computed over a diagonal band "
        "instead of full tables.");

    m.def(
        "label_bound",
        [](const std::string& a, const std::string& b) {
            return label_intersection_bound(tree_of(a), tree_of(b));
        },
        py::arg("a"), py::arg("b"), "Bag-of-labels lower bound on distance().");

    py::class_<JsimIndex>(m, "Index", "Pigeonhole index over region signatures")
        .def(py::init<>())
        .def(
            "insert",
            [](JsimIndex& idx, std::int64_t id, const std::string& text) {
                idx.insert(id, tree_of(text));
            },
            py::arg("id"), py::arg("text"))
        .def("remove", &JsimIndex::remove, py::arg("id"))
        .def("contains", &JsimIndex::contains, py::arg("id"))
        .def(
            "lookup",
            [](const JsimIndex& idx, const std::string& query, std::int64_t tau) {
                return idx.lookup(tree_of(query), tau);
            },
            py::arg("query"), py::arg("tau"),
            "Candidate ids; a superset of everything within tau.")
        .def("save", &JsimIndex::save_file, py::arg("path"))
        .def_static("load", &JsimIndex::load_file, py::arg("path"))
        .def("__len__", [](const JsimIndex& idx) { return idx.stats().trees; })
        .def("__contains__", &JsimIndex::contains);

    m.def(
        "lookup_jsonl",
        [](const std::string& jsonl, const std::string& query, std::int64_t tau, bool exact,
           const std::string& engine) {
            CorpusStore corpus = CorpusStore::from_jsonl_text(jsonl);
            JsimIndex index = build_index(corpus);
            JsonTree q = tree_of(query);
            LookupOptions opts;
            opts.exact_distances = exact;
            opts.engine = parse_engine(engine);
            LookupReport rep = similarity_lookup(q, corpus, index, tau, opts);
            std::vector<std::pair<std::int64_t, std::optional<std::int64_t>>> out;
            for (const auto& r : rep.results) out.emplace_back(r.id, r.dist);
            return out;
        },
        py::arg("jsonl"), py::arg("query"), py::arg("tau"), py::arg("exact") = false,
        py::arg("engine") = "quick",
        "All corpus lines within tau of the query as (id, dist) pairs; dist is "
        "None for hits accepted by the upper-bound filter unless exact=True.");

    m.def(
        "synth",
        [](int count, const std::string& profile, std::uint64_t seed, double perturb,
           int edits, std::int64_t nodes) {
            SynthConfig cfg;
            cfg.count = count;
            cfg.profile = parse_profile(profile);
            cfg.seed = seed;
            cfg.perturb_fraction = perturb;
            cfg.edits = edits;
            cfg.target_nodes = nodes;
            std::vector<std::string> out;
            for (auto& doc : synth_corpus(cfg)) out.push_back(std::move(doc.text));
            return out;
        },
        py::arg("count"), py::arg("profile") = "mixed", py::arg("seed") = 1,
        py::arg("perturb") = 0.2, py::arg("edits") = 1, py::arg("nodes") = 0,
        "Deterministic synthetic corpus as a list of JSON texts.");
}
