#include "jedi/bench.hpp"

#include <sstream>

#include "json.hpp"

namespace jedi {
namespace {

const char* engine_name(EngineKind k) {
    return k == EngineKind::Baseline ? "baseline" : "quick";
}

std::string system_name(bool label, bool ub, EngineKind engine) {
    std::string s = "index";
    if (label) s += "+label";
    if (ub) s += "+ub";
    s += "+";
    s += engine_name(engine);
    return s;
}

BenchRow base_row(int quantile, std::int64_t qid, std::int64_t qsize, int pct,
                  std::int64_t tau) {
    BenchRow row;
    row.quantile = quantile;
    row.query_id = qid;
    row.query_size = qsize;
    row.tau_pct = pct;
    row.tau = tau;
    return row;
}

void fill_counts(BenchRow& row, const LookupReport& rep) {
    row.candidates_index = rep.candidates_index;
    row.candidates_after_label = rep.candidates_after_label;
    row.accepted_upper_bound = rep.accepted_upper_bound;
    row.verified_pairs = rep.verified_pairs;
    row.results = static_cast<std::int64_t>(rep.results.size());
    row.timed_out = rep.timed_out;
    row.wall_ms = rep.total_ms;
}

} // namespace

std::vector<BenchRow> run_bench(CorpusStore& corpus, const JsimIndex& index,
                                const BenchConfig& cfg) {
    std::vector<BenchRow> rows;
    constexpr EngineKind kEngines[] = {EngineKind::Baseline, EngineKind::Quick};
    for (int quantile : cfg.quantiles) {
        std::int64_t qid = corpus.quantile_doc(quantile);
        auto query = corpus.tree(qid);
        for (int pct : cfg.tau_pcts) {
            std::int64_t tau = tau_from_percent(pct, query->size());
            for (bool label : {false, true}) {
                for (bool ub : {false, true}) {
                    for (EngineKind engine : kEngines) {
                        LookupOptions opts;
                        opts.use_label_bound = label;
                        opts.use_jofilter = ub;
                        opts.engine = engine;
                        opts.deadline_ms = cfg.timeout_ms;
                        LookupReport rep = similarity_lookup(*query, corpus, index, tau, opts);
                        BenchRow row = base_row(quantile, qid, query->size(), pct, tau);
                        row.system = system_name(label, ub, engine);
                        row.engine = engine_name(engine);
                        row.label_bound = label;
                        row.ubfilter = ub;
                        fill_counts(row, rep);
                        rows.push_back(std::move(row));
                    }
                }
            }
            if (cfg.include_scan) {
                for (EngineKind engine : kEngines) {
                    LookupReport rep =
                        linear_scan(*query, corpus, tau, engine, cfg.timeout_ms);
                    BenchRow row = base_row(quantile, qid, query->size(), pct, tau);
                    row.system = std::string("scan+") + engine_name(engine);
                    row.engine = engine_name(engine);
                    fill_counts(row, rep);
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "schema_version,quantile,query_id,query_size,tau_pct,tau,system,engine,"
           "label_bound,ubfilter,candidates_index,candidates_after_label,"
           "accepted_upper_bound,verified_pairs,results,timed_out,wall_ms\n";
    for (const BenchRow& r : rows) {
        out << 1 << ',' << r.quantile << ',' << r.query_id << ',' << r.query_size << ','
            << r.tau_pct << ',' << r.tau << ',' << r.system << ',' << r.engine << ','
            << (r.label_bound ? 1 : 0) << ',' << (r.ubfilter ? 1 : 0) << ','
            << r.candidates_index << ',' << r.candidates_after_label << ','
            << r.accepted_upper_bound << ',' << r.verified_pairs << ',' << r.results << ','
            << (r.timed_out ? 1 : 0) << ',' << r.wall_ms << '\n';
    }
    return out.str();
}

std::string bench_json(const std::vector<BenchRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const BenchRow& r : rows) {
        arr.push_back({{"schema_version", 1},
                       {"quantile", r.quantile},
                       {"query_id", r.query_id},
                       {"query_size", r.query_size},
                       {"tau_pct", r.tau_pct},
                       {"tau", r.tau},
                       {"system", r.system},
                       {"engine", r.engine},
                       {"label_bound", r.label_bound},
                       {"ubfilter", r.ubfilter},
                       {"candidates_index", r.candidates_index},
                       {"candidates_after_label", r.candidates_after_label},
                       {"accepted_upper_bound", r.accepted_upper_bound},
                       {"verified_pairs", r.verified_pairs},
                       {"results", r.results},
                       {"timed_out", r.timed_out},
                       {"wall_ms", r.wall_ms}});
    }
    return arr.dump(2) + "\n";
}

} // namespace jedi
