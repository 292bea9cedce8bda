#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jedi/corpus.hpp"
#include "jedi/distance.hpp"
#include "jedi/jsim_index.hpp"

namespace jedi {

struct LookupOptions {
    bool use_label_bound = true;  // prune candidates by label multiset overlap
    bool use_jofilter = true;     // accept by banded ordered upper bound
    bool exact_distances = false; // verify upper-bound accepts too
    EngineKind engine = EngineKind::Quick;
    int threads = 1;
    std::int64_t deadline_ms = 0; // 0: none; checked between pairs
};

struct LookupResult {
    std::int64_t id = 0;
    std::optional<std::int64_t> dist; // empty: within tau by upper bound only
};

struct LookupReport {
    std::int64_t tau = 0;
    std::int64_t query_size = 0;
    std::int64_t corpus_trees = 0;
    std::int64_t candidates_index = 0;       // ids the index returned
    std::int64_t candidates_after_label = 0; // surviving the label bound
    std::int64_t accepted_upper_bound = 0;   // accepted without verification
    std::int64_t verified_pairs = 0;         // exact engine invocations
    bool timed_out = false;
    double index_ms = 0, filter_ms = 0, verify_ms = 0, total_ms = 0;
    std::vector<LookupResult> results; // ordered by (dist or tau, id)
};

// Index probe -> label lower bound -> ordered upper bound -> exact verify.
// Returns exactly the documents within tau (partial if the deadline fired).
LookupReport similarity_lookup(const JsonTree& query, CorpusStore& corpus,
                               const JsimIndex& index, std::int64_t tau,
                               const LookupOptions& opts = {});

// Reference path: exact distance for every document passing the size screen.
LookupReport linear_scan(const JsonTree& query, CorpusStore& corpus, std::int64_t tau,
                         EngineKind engine = EngineKind::Quick, std::int64_t deadline_ms = 0);

// Index over every document in the corpus, ids preserved.
JsimIndex build_index(CorpusStore& corpus);

// Threshold from a percentage of the query size, rounded half up.
std::int64_t tau_from_percent(std::int64_t percent, std::int64_t query_size);

} // namespace jedi
