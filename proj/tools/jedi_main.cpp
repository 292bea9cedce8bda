#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jedi/bench.hpp"
#include "jedi/corpus.hpp"
#include "jedi/distance.hpp"
#include "jedi/jedi_order.hpp"
#include "jedi/jsim_index.hpp"
#include "jedi/lookup.hpp"
#include "jedi/oracle.hpp"
#include "jedi/synth.hpp"

namespace {

using jedi::EngineKind;
using ojson = nlohmann::ordered_json;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

jedi::JsonTree load_tree(const std::string& path) {
    return jedi::parse_json_tree(read_input(path));
}

EngineKind parse_engine(const std::string& name) {
    if (name == "baseline") return EngineKind::Baseline;
    if (name == "quick") return EngineKind::Quick;
    throw CLI::ValidationError("--engine", "expected baseline|quick");
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << content;
    if (!f.good()) throw std::runtime_error("failed writing: " + path);
}

jedi::CorpusStore load_corpus(const std::string& path) {
    if (std::filesystem::is_directory(path)) return jedi::CorpusStore::from_directory(path);
    return jedi::CorpusStore::from_jsonl_file(path);
}

void warn_ingest_errors(const jedi::CorpusStore& corpus) {
    for (const auto& e : corpus.errors())
        std::cerr << "warning: skipped " << e.source << ": " << e.message << "\n";
}

ojson stats_json(const jedi::EngineStats& s) {
    return ojson{{"internal_pairs", s.internal_pairs},
                 {"sed_computed", s.sed_computed},
                 {"bpm_computed", s.bpm_computed},
                 {"skipped_aggregate", s.skipped_aggregate},
                 {"skipped_greedy", s.skipped_greedy},
                 {"greedy_exact", s.greedy_exact},
                 {"key_pairs", s.key_pairs},
                 {"matchings_skipped", s.matchings_skipped()}};
}

ojson report_json(const jedi::LookupReport& rep) {
    return ojson{{"tau", rep.tau},
                 {"query_size", rep.query_size},
                 {"corpus_trees", rep.corpus_trees},
                 {"candidates_index", rep.candidates_index},
                 {"candidates_after_label", rep.candidates_after_label},
                 {"accepted_upper_bound", rep.accepted_upper_bound},
                 {"verified_pairs", rep.verified_pairs},
                 {"results", rep.results.size()},
                 {"timed_out", rep.timed_out},
                 {"index_ms", rep.index_ms},
                 {"filter_ms", rep.filter_ms},
                 {"verify_ms", rep.verify_ms},
                 {"total_ms", rep.total_ms}};
}

struct GlobalOpts {
    std::uint64_t seed = 1;
    int threads = 1;
    std::string format = "text";
};

int cmd_dist(const std::string& a, const std::string& b, const std::string& engine_name,
             bool with_stats, const GlobalOpts& g) {
    jedi::JsonTree t1 = load_tree(a);
    jedi::JsonTree t2 = load_tree(b);
    EngineKind engine = parse_engine(engine_name);
    jedi::EngineStats stats;
    std::int64_t d;
    if (engine == EngineKind::Quick)
        d = jedi::quickjedi(t1, t2, with_stats ? &stats : nullptr);
    else {
        if (with_stats) throw CLI::ValidationError("--stats", "supported for --engine quick");
        d = jedi::jedi_baseline(t1, t2);
    }
    if (g.format == "json") {
        ojson out{{"dist", d}, {"engine", engine_name}};
        if (with_stats) out["stats"] = stats_json(stats);
        std::cout << out.dump() << "\n";
    } else {
        std::cout << d << "\n";
        if (with_stats) {
            ojson s = stats_json(stats);
            for (auto& [k, v] : s.items()) std::cout << k << "\t" << v << "\n";
        }
    }
    return 0;
}

int cmd_ubound(const std::string& a, const std::string& b, std::optional<std::int64_t> tau,
               bool exact, const GlobalOpts& g) {
    jedi::JsonTree t1 = jedi::sort_tree(load_tree(a));
    jedi::JsonTree t2 = jedi::sort_tree(load_tree(b));
    if (!tau || exact) {
        std::int64_t d = jedi::jedi_order_exact(t1, t2);
        bool within = tau ? d <= *tau : true;
        if (g.format == "json") {
            ojson out{{"upper_bound", d}};
            if (tau) {
                out["tau"] = *tau;
                out["within"] = within;
            }
            std::cout << out.dump() << "\n";
        } else {
            std::cout << d << "\n";
            if (tau) std::cout << (within ? "within" : "exceeds") << "\n";
        }
        return tau && !within ? 1 : 0;
    }
    jedi::JofilterMetrics metrics;
    bool within = jedi::jofilter(t1, t2, *tau, &metrics);
    if (g.format == "json") {
        std::cout << ojson{{"tau", *tau},
                           {"within", within},
                           {"cells", metrics.cells},
                           {"peak_states", metrics.peak_states},
                           {"size_exit", metrics.size_exit}}
                         .dump()
                  << "\n";
    } else {
        std::cout << (within ? "within" : "exceeds") << "\n";
    }
    return within ? 0 : 1;
}

int cmd_index_build(const std::string& corpus_path, const std::string& out_path) {
    jedi::CorpusStore corpus = load_corpus(corpus_path);
    warn_ingest_errors(corpus);
    jedi::JsimIndex index = jedi::build_index(corpus);
    index.save_file(out_path);
    jedi::IndexStats s = index.stats();
    std::cerr << "indexed " << s.trees << " trees, " << s.nodes << " nodes, "
              << s.total_entries() << " entries\n";
    return 0;
}

int cmd_index_stats(const std::string& index_path, const GlobalOpts& g) {
    jedi::JsimIndex index = jedi::JsimIndex::load_file(index_path);
    jedi::IndexStats s = index.stats();
    ojson out{{"trees", s.trees},
              {"tombstones", s.tombstones},
              {"nodes", s.nodes},
              {"labels", s.labels},
              {"desc_entries", s.desc_entries},
              {"anc_entries", s.anc_entries},
              {"lr_entries", s.lr_entries},
              {"posting_entries", s.posting_entries},
              {"total_entries", s.total_entries()}};
    if (g.format == "json") {
        std::cout << out.dump() << "\n";
    } else {
        for (auto& [k, v] : out.items()) std::cout << k << "\t" << v << "\n";
    }
    return 0;
}

struct LookupArgs {
    std::string corpus_path, query_path, index_path;
    std::optional<std::int64_t> tau;
    std::optional<std::int64_t> tau_pct;
    std::string engine = "quick";
    bool no_label_bound = false, no_ubfilter = false, exact_dist = false, scan = false;
    bool with_stats = false;
    std::int64_t timeout_ms = 0;
};

int cmd_lookup(const LookupArgs& a, const GlobalOpts& g) {
    jedi::JsonTree query = load_tree(a.query_path);
    jedi::CorpusStore corpus = load_corpus(a.corpus_path);
    warn_ingest_errors(corpus);
    std::int64_t tau = a.tau ? *a.tau : jedi::tau_from_percent(*a.tau_pct, query.size());

    jedi::LookupReport rep;
    if (a.scan) {
        rep = jedi::linear_scan(query, corpus, tau, parse_engine(a.engine), a.timeout_ms);
    } else {
        jedi::JsimIndex index;
        if (!a.index_path.empty())
            index = jedi::JsimIndex::load_file(a.index_path);
        else
            index = jedi::build_index(corpus);
        jedi::LookupOptions opts;
        opts.use_label_bound = !a.no_label_bound;
        opts.use_jofilter = !a.no_ubfilter;
        opts.exact_distances = a.exact_dist;
        opts.engine = parse_engine(a.engine);
        opts.threads = g.threads;
        opts.deadline_ms = a.timeout_ms;
        rep = jedi::similarity_lookup(query, corpus, index, tau, opts);
    }

    for (const auto& r : rep.results) {
        if (g.format == "json") {
            ojson line{{"id", r.id}};
            if (r.dist)
                line["dist"] = *r.dist;
            else {
                line["dist"] = nullptr;
                line["le_tau"] = true;
            }
            std::cout << line.dump() << "\n";
        } else {
            std::cout << r.id << "\t" << (r.dist ? std::to_string(*r.dist) : "<=" + std::to_string(tau))
                      << "\n";
        }
    }
    if (a.with_stats) std::cerr << report_json(rep).dump() << "\n";
    if (rep.timed_out) {
        std::cerr << "error: lookup timed out after " << a.timeout_ms << " ms\n";
        return 2;
    }
    return 0;
}

struct BenchArgs {
    std::string corpus_path, out_path;
    std::vector<int> quantiles = {25, 50, 75};
    std::vector<int> tau_pcts = {5, 10, 20, 30};
    std::int64_t timeout_ms = 60000;
    bool no_scan = false;
};

int cmd_bench(const BenchArgs& a, const GlobalOpts& g) {
    jedi::CorpusStore corpus = load_corpus(a.corpus_path);
    warn_ingest_errors(corpus);
    jedi::JsimIndex index = jedi::build_index(corpus);
    jedi::BenchConfig cfg;
    cfg.quantiles = a.quantiles;
    cfg.tau_pcts = a.tau_pcts;
    cfg.timeout_ms = a.timeout_ms;
    cfg.include_scan = !a.no_scan;
    cfg.seed = g.seed;
    std::vector<jedi::BenchRow> rows = jedi::run_bench(corpus, index, cfg);
    write_output(a.out_path, g.format == "json" ? jedi::bench_json(rows) : jedi::bench_csv(rows));
    return 0;
}

struct SynthArgs {
    std::string out_path, manifest_path;
    std::int64_t count = 100;
    std::string profile = "mixed";
    double perturb = 0.2;
    int edits = 1;
    std::int64_t nodes = 0;
};

int cmd_synth(const SynthArgs& a, const GlobalOpts& g) {
    jedi::SynthConfig cfg;
    cfg.count = a.count;
    cfg.profile = jedi::parse_profile(a.profile);
    cfg.seed = g.seed;
    cfg.perturb_fraction = a.perturb;
    cfg.edits = a.edits;
    cfg.target_nodes = a.nodes;
    std::vector<jedi::SynthDoc> docs = jedi::synth_corpus(cfg);
    std::string body;
    for (const auto& d : docs) {
        body += d.text;
        body += '\n';
    }
    write_output(a.out_path, body);
    if (!a.manifest_path.empty()) {
        ojson arr = ojson::array();
        for (std::size_t i = 0; i < docs.size(); ++i) {
            arr.push_back(ojson{{"id", i},
                                {"base_id", docs[i].base_id},
                                {"edit_bound", docs[i].edit_bound},
                                {"ops", docs[i].ops}});
        }
        write_output(a.manifest_path, arr.dump(2) + "\n");
    }
    return 0;
}

int cmd_oracle(const std::string& a, const std::string& b, std::int64_t cap, bool ordered,
               const GlobalOpts& g) {
    jedi::JsonTree t1 = load_tree(a);
    jedi::JsonTree t2 = load_tree(b);
    auto cs = ordered ? jedi::ConstraintSet::ordered() : jedi::ConstraintSet::unordered_document();
    jedi::EditMapping m = jedi::min_mapping(t1, t2, cs, cap);
    if (g.format == "json") {
        ojson pairs = ojson::array();
        for (auto [v, w] : m.pairs) pairs.push_back(ojson::array({v, w}));
        std::cout << ojson{{"cost", m.cost}, {"pairs", pairs}}.dump() << "\n";
    } else {
        std::cout << m.cost << "\n";
        for (auto [v, w] : m.pairs) std::cout << v << "\t" << w << "\n";
    }
    return 0;
}

int cmd_dump(const std::string& a, bool sorted) {
    jedi::JsonTree t = load_tree(a);
    if (sorted) t = jedi::sort_tree(t);
    std::cout << jedi::dump_tree(t);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"JSON similarity lookup over tree edit distance"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--seed", g.seed, "RNG seed for generators")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads for verification")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    // dist
    auto* dist = app.add_subcommand("dist", "distance between two documents");
    std::string dist_a, dist_b, dist_engine = "quick";
    bool dist_stats = false;
    dist->add_option("a", dist_a, "first document (path or -)")->required();
    dist->add_option("b", dist_b, "second document (path or -)")->required();
    dist->add_option("--engine", dist_engine, "baseline|quick")->capture_default_str();
    dist->add_flag("--stats", dist_stats, "print engine counters");

    // ubound
    auto* ub = app.add_subcommand("ubound", "ordered upper bound between two documents");
    std::string ub_a, ub_b;
    std::int64_t ub_tau = -1;
    bool ub_has_tau = false, ub_exact = false;
    ub->add_option("a", ub_a, "first document (path or -)")->required();
    ub->add_option("b", ub_b, "second document (path or -)")->required();
    auto* ub_tau_opt = ub->add_option("--tau", ub_tau, "threshold for the banded filter");
    ub->add_flag("--exact", ub_exact, "compute the full upper bound value");

    // index
    auto* index = app.add_subcommand("index", "candidate index maintenance");
    index->require_subcommand(1);
    auto* ib = index->add_subcommand("build", "build and save an index");
    std::string ib_corpus, ib_out;
    ib->add_option("corpus", ib_corpus, "JSON Lines file or directory of .json files")
        ->required();
    ib->add_option("out", ib_out, "output snapshot path")->required();
    auto* is = index->add_subcommand("stats", "print snapshot statistics");
    std::string is_path;
    is->add_option("index", is_path, "snapshot path")->required();

    // lookup
    auto* lk = app.add_subcommand("lookup", "all documents within tau of the query");
    LookupArgs la;
    std::int64_t lk_tau = 0, lk_tau_pct = 0;
    lk->add_option("corpus", la.corpus_path, "JSON Lines file or directory")->required();
    lk->add_option("query", la.query_path, "query document (path or -)")->required();
    auto* lk_tau_opt = lk->add_option("--tau", lk_tau, "distance threshold");
    auto* lk_pct_opt =
        lk->add_option("--tau-pct", lk_tau_pct, "threshold as percent of query size");
    lk->add_option("--index", la.index_path, "prebuilt index snapshot");
    lk->add_option("--engine", la.engine, "baseline|quick")->capture_default_str();
    lk->add_flag("--no-label-bound", la.no_label_bound, "disable the label bound stage");
    lk->add_flag("--no-ubfilter", la.no_ubfilter, "disable the upper bound filter stage");
    lk->add_flag("--exact-dist", la.exact_dist, "verify even upper-bound accepts");
    lk->add_flag("--scan", la.scan, "linear reference instead of the index pipeline");
    lk->add_flag("--stats", la.with_stats, "print a stage report to stderr");
    lk->add_option("--timeout-ms", la.timeout_ms, "cooperative deadline (0: none)")
        ->capture_default_str();

    // bench
    auto* bench = app.add_subcommand("bench", "lookup timing grid over one corpus");
    BenchArgs ba;
    bench->add_option("corpus", ba.corpus_path, "JSON Lines file or directory")->required();
    bench->add_option("--out", ba.out_path, "output path (default stdout)");
    bench->add_option("--quantiles", ba.quantiles, "query size percentiles")
        ->capture_default_str();
    bench->add_option("--tau-pcts", ba.tau_pcts, "thresholds as percent of query size")
        ->capture_default_str();
    bench->add_option("--timeout-ms", ba.timeout_ms, "per-row deadline")->capture_default_str();
    bench->add_flag("--no-scan", ba.no_scan, "skip the linear reference rows");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    SynthArgs sa;
    synth->add_option("--count", sa.count, "documents to generate")->capture_default_str();
    synth->add_option("--profile", sa.profile, "flat|deep|arrays|mixed")->capture_default_str();
    synth->add_option("--perturb", sa.perturb, "share of derived near-duplicates")
        ->capture_default_str();
    synth->add_option("--edits", sa.edits, "edits per derived document")->capture_default_str();
    synth->add_option("--nodes", sa.nodes, "exact node count per fresh document (0: varied)")
        ->capture_default_str();
    synth->add_option("--out", sa.out_path, "output JSON Lines path (default stdout)");
    synth->add_option("--manifest", sa.manifest_path, "write derivation metadata JSON here");

    // hidden helpers
    auto* oracle = app.add_subcommand("oracle", "minimal mapping cost (small trees)");
    oracle->group("");
    std::string or_a, or_b;
    std::int64_t or_cap = 10;
    bool or_ordered = false;
    oracle->add_option("a", or_a)->required();
    oracle->add_option("b", or_b)->required();
    oracle->add_option("--cap", or_cap, "max tree size")->capture_default_str();
    oracle->add_flag("--ordered", or_ordered, "order arrays and objects alike");

    auto* dump = app.add_subcommand("dump", "print the node table of a document");
    dump->group("");
    std::string dump_a;
    bool dump_sorted = false;
    dump->add_option("a", dump_a)->required();
    dump->add_flag("--sort", dump_sorted, "key-sort before printing");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dist->parsed()) return cmd_dist(dist_a, dist_b, dist_engine, dist_stats, g);
        if (ub->parsed()) {
            ub_has_tau = ub_tau_opt->count() > 0;
            return cmd_ubound(ub_a, ub_b,
                              ub_has_tau ? std::optional<std::int64_t>(ub_tau) : std::nullopt,
                              ub_exact, g);
        }
        if (index->parsed()) {
            if (ib->parsed()) return cmd_index_build(ib_corpus, ib_out);
            return cmd_index_stats(is_path, g);
        }
        if (lk->parsed()) {
            bool has_tau = lk_tau_opt->count() > 0, has_pct = lk_pct_opt->count() > 0;
            if (has_tau == has_pct)
                throw CLI::ValidationError("--tau", "exactly one of --tau/--tau-pct required");
            if (has_tau) la.tau = lk_tau;
            if (has_pct) la.tau_pct = lk_tau_pct;
            return cmd_lookup(la, g);
        }
        if (bench->parsed()) return cmd_bench(ba, g);
        if (synth->parsed()) return cmd_synth(sa, g);
        if (oracle->parsed()) return cmd_oracle(or_a, or_b, or_cap, or_ordered, g);
        if (dump->parsed()) return cmd_dump(dump_a, dump_sorted);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
