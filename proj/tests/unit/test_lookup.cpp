#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "jedi/bench.hpp"
#include "jedi/corpus.hpp"
#include "jedi/distance.hpp"
#include "jedi/lookup.hpp"
#include "jedi/synth.hpp"

using namespace jedi;

namespace {

CorpusStore make_corpus(std::uint64_t seed, int count) {
    SynthConfig cfg;
    cfg.count = count;
    cfg.seed = seed;
    cfg.profile = SynthProfile::Mixed;
    cfg.perturb_fraction = 0.5;
    cfg.edits = 2;
    std::string text;
    for (const auto& doc : synth_corpus(cfg)) {
        text += doc.text;
        text += '\n';
    }
    return CorpusStore::from_jsonl_text(text);
}

std::map<std::int64_t, std::int64_t> exact_map(const LookupReport& rep) {
    std::map<std::int64_t, std::int64_t> out;
    for (const auto& r : rep.results) {
        REQUIRE(r.dist.has_value());
        out[r.id] = *r.dist;
    }
    return out;
}

std::set<std::int64_t> id_set(const LookupReport& rep) {
    std::set<std::int64_t> out;
    for (const auto& r : rep.results) out.insert(r.id);
    return out;
}

} // namespace

TEST_CASE("pipeline matches the linear scan under every switch combination") {
    CorpusStore corpus = make_corpus(71, 60);
    JsimIndex index = build_index(corpus);
    Rng rng(711);
    int nonempty = 0;
    for (int round = 0; round < 12; ++round) {
        std::int64_t qid = corpus.ids()[rng.below(corpus.size())];
        JsonTree query = parse_json_tree(corpus.raw(qid));
        for (std::int64_t tau : {0, 1, 3, 6}) {
            LookupReport scan = linear_scan(query, corpus, tau);
            auto want = exact_map(scan);
            if (!want.empty()) ++nonempty;
            for (bool label : {false, true}) {
                for (bool ub : {false, true}) {
                    for (EngineKind eng : {EngineKind::Baseline, EngineKind::Quick}) {
                        LookupOptions opts;
                        opts.use_label_bound = label;
                        opts.use_jofilter = ub;
                        opts.engine = eng;
                        opts.exact_distances = true;
                        LookupReport rep = similarity_lookup(query, corpus, index, tau, opts);
                        CHECK(exact_map(rep) == want);
                        CHECK(rep.candidates_index <= rep.corpus_trees);
                        CHECK(rep.candidates_after_label <= rep.candidates_index);
                        CHECK_FALSE(rep.timed_out);
                    }
                }
            }
        }
    }
    CHECK(nonempty > 10);
}

TEST_CASE("upper-bound accepts are real hits") {
    CorpusStore corpus = make_corpus(73, 50);
    JsimIndex index = build_index(corpus);
    JsonTree query = parse_json_tree(corpus.raw(corpus.ids()[3]));
    std::int64_t tau = 4;

    LookupOptions fast; // defaults: no exact distances
    LookupReport rep = similarity_lookup(query, corpus, index, tau, fast);
    LookupReport scan = linear_scan(query, corpus, tau);
    CHECK(id_set(rep) == id_set(scan));
    auto truth = exact_map(scan);
    int blind = 0;
    for (const auto& r : rep.results) {
        if (!r.dist.has_value()) {
            ++blind;
            CHECK(truth.at(r.id) <= tau);
        } else {
            CHECK(*r.dist == truth.at(r.id));
            CHECK(*r.dist <= tau);
        }
    }
    CHECK(rep.accepted_upper_bound == blind);
    // With the filter off nothing is accepted blind.
    LookupOptions noub;
    noub.use_jofilter = false;
    LookupReport rep2 = similarity_lookup(query, corpus, index, tau, noub);
    CHECK(rep2.accepted_upper_bound == 0);
    for (const auto& r : rep2.results) CHECK(r.dist.has_value());
}

TEST_CASE("results are ordered by distance then id") {
    CorpusStore corpus = make_corpus(79, 40);
    JsimIndex index = build_index(corpus);
    JsonTree query = parse_json_tree(corpus.raw(0));
    LookupOptions opts;
    opts.exact_distances = true;
    LookupReport rep = similarity_lookup(query, corpus, index, 6, opts);
    for (std::size_t i = 1; i < rep.results.size(); ++i) {
        auto key = [&](const LookupResult& r) {
            return std::pair<std::int64_t, std::int64_t>(r.dist.value_or(6), r.id);
        };
        CHECK(key(rep.results[i - 1]) < key(rep.results[i]));
    }
}

TEST_CASE("two worker threads return exactly the single-thread answer") {
    CorpusStore corpus = make_corpus(83, 60);
    JsimIndex index = build_index(corpus);
    JsonTree query = parse_json_tree(corpus.raw(corpus.ids()[7]));
    LookupOptions one;
    one.exact_distances = true;
    LookupOptions two = one;
    two.threads = 2;
    LookupReport a = similarity_lookup(query, corpus, index, 5, one);
    LookupReport b = similarity_lookup(query, corpus, index, 5, two);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        CHECK(a.results[i].id == b.results[i].id);
        CHECK(a.results[i].dist == b.results[i].dist);
    }
}

TEST_CASE("negative tau yields an empty report") {
    CorpusStore corpus = make_corpus(89, 10);
    JsimIndex index = build_index(corpus);
    JsonTree query = parse_json_tree(corpus.raw(0));
    LookupReport rep = similarity_lookup(query, corpus, index, -1, {});
    CHECK(rep.results.empty());
    CHECK(rep.candidates_index == 0);
    LookupReport scan = linear_scan(query, corpus, -1);
    CHECK(scan.results.empty());
}

TEST_CASE("an expired deadline is reported") {
    SynthConfig cfg;
    cfg.count = 30;
    cfg.seed = 97;
    cfg.profile = SynthProfile::Mixed;
    cfg.target_nodes = 400;
    std::string text;
    for (const auto& doc : synth_corpus(cfg)) {
        text += doc.text;
        text += '\n';
    }
    CorpusStore corpus = CorpusStore::from_jsonl_text(text);
    JsonTree query = parse_json_tree(corpus.raw(0));
    // Thirty full verifications of 400-node trees cannot fit in one
    // millisecond, so the scan must give up part way through.
    LookupReport rep = linear_scan(query, corpus, 200, EngineKind::Baseline, 1);
    CHECK(rep.timed_out);
    CHECK(rep.verified_pairs < corpus.size());
}

TEST_CASE("percentage thresholds round half up") {
    CHECK(tau_from_percent(10, 124) == 12);
    CHECK(tau_from_percent(10, 125) == 13); // 12.5 rounds up
    CHECK(tau_from_percent(10, 4) == 0);
    CHECK(tau_from_percent(10, 5) == 1);
    CHECK(tau_from_percent(50, 7) == 4);
    CHECK(tau_from_percent(0, 1000) == 0);
    CHECK(tau_from_percent(100, 33) == 33);
    CHECK(tau_from_percent(-5, 100) == -1);
}

TEST_CASE("index construction covers every stored document") {
    CorpusStore corpus = make_corpus(101, 30);
    JsimIndex index = build_index(corpus);
    auto s = index.stats();
    CHECK(s.trees == corpus.size());
    for (std::int64_t id : corpus.ids()) CHECK(index.contains(id));
}

TEST_CASE("bench emits the full grid of rows") {
    CorpusStore corpus = make_corpus(103, 40);
    JsimIndex index = build_index(corpus);
    BenchConfig cfg;
    cfg.quantiles = {50};
    cfg.tau_pcts = {5, 20};
    auto rows = run_bench(corpus, index, cfg);
    // 2 tau values x (8 pipeline + 2 scan variants)
    REQUIRE(rows.size() == 20);
    std::set<std::string> systems;
    for (const auto& row : rows) {
        systems.insert(row.system);
        CHECK(row.quantile == 50);
        CHECK(row.query_size > 0);
        CHECK(row.tau == tau_from_percent(row.tau_pct, row.query_size));
        CHECK(row.wall_ms >= 0.0);
        CHECK(row.results <= row.candidates_index);
    }
    CHECK(systems.count("index+label+ub+quick") == 1);
    CHECK(systems.count("index+baseline") == 1);
    CHECK(systems.count("scan+quick") == 1);

    // All systems agree on the hit count at a fixed tau.
    std::map<std::int64_t, std::set<std::int64_t>> hits;
    for (const auto& row : rows) hits[row.tau].insert(row.results);
    for (const auto& [tau, counts] : hits) CHECK(counts.size() == 1);
}

TEST_CASE("bench output is stable apart from timing") {
    CorpusStore corpus = make_corpus(107, 30);
    JsimIndex index = build_index(corpus);
    BenchConfig cfg;
    cfg.quantiles = {25, 75};
    cfg.tau_pcts = {10};
    auto strip = [](const std::string& csv) {
        std::string out;
        std::istringstream in(csv);
        std::string line;
        while (std::getline(in, line)) {
            out += line.substr(0, line.rfind(','));
            out += '\n';
        }
        return out;
    };
    std::string a = bench_csv(run_bench(corpus, index, cfg));
    std::string b = bench_csv(run_bench(corpus, index, cfg));
    CHECK(strip(a) == strip(b));
    CHECK(a.rfind("schema_version,quantile,query_id,query_size,tau_pct,tau,system,"
                  "engine,label_bound,ubfilter,candidates_index,candidates_after_label,"
                  "accepted_upper_bound,verified_pairs,results,timed_out,wall_ms\n",
                  0) == 0);
}
