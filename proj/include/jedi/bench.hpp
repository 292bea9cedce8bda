#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jedi/lookup.hpp"

namespace jedi {

struct BenchConfig {
    std::vector<int> quantiles = {25, 50, 75}; // query size percentiles
    std::vector<int> tau_pcts = {5, 10, 20, 30};
    std::int64_t timeout_ms = 60000; // per row, cooperative
    bool include_scan = true;        // also time the linear reference
    std::uint64_t seed = 1;          // recorded for provenance of the corpus
};

struct BenchRow {
    int quantile = 0;
    std::int64_t query_id = 0;
    std::int64_t query_size = 0;
    int tau_pct = 0;
    std::int64_t tau = 0;
    std::string system; // "index[+label][+ub]+<engine>" or "scan+<engine>"
    std::string engine; // "baseline" | "quick"
    bool label_bound = false;
    bool ubfilter = false;
    std::int64_t candidates_index = 0;
    std::int64_t candidates_after_label = 0;
    std::int64_t accepted_upper_bound = 0;
    std::int64_t verified_pairs = 0;
    std::int64_t results = 0;
    bool timed_out = false;
    double wall_ms = 0;
};

// One row per quantile query x threshold x pipeline variant (label bound on-
// off x upper-bound filter on-off x engine), plus linear-scan rows when
// enabled. Deterministic except for the wall_ms column.
std::vector<BenchRow> run_bench(CorpusStore& corpus, const JsimIndex& index,
                                const BenchConfig& cfg = {});

// CSV with a header; first column is schema_version (currently 1).
std::string bench_csv(const std::vector<BenchRow>& rows);
std::string bench_json(const std::vector<BenchRow>& rows);

} // namespace jedi
