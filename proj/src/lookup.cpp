#include "jedi/lookup.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <memory>
#include <thread>

#include "jedi/jedi_order.hpp"

namespace jedi {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Deadline {
    Clock::time_point end{};
    bool armed = false;

    explicit Deadline(std::int64_t deadline_ms) {
        if (deadline_ms > 0) {
            armed = true;
            end = Clock::now() + std::chrono::milliseconds(deadline_ms);
        }
    }
    bool hit() const { return armed && Clock::now() >= end; }
};

std::int64_t run_engine(EngineKind kind, const JsonTree& a, const JsonTree& b) {
    return kind == EngineKind::Baseline ? jedi_baseline(a, b) : quickjedi(a, b);
}

void sort_results(std::vector<LookupResult>& results, std::int64_t tau) {
    std::sort(results.begin(), results.end(),
              [tau](const LookupResult& a, const LookupResult& b) {
                  std::int64_t da = a.dist.value_or(tau), db = b.dist.value_or(tau);
                  if (da != db) return da < db;
                  return a.id < b.id;
              });
}

// Exact distances for the given ids, nullopt where the deadline cut in.
// Trees are prefetched; workers only read them.
std::vector<std::optional<std::int64_t>> verify_batch(
    const JsonTree& query, const std::vector<std::shared_ptr<const JsonTree>>& trees,
    EngineKind engine, int threads, const Deadline& deadline, bool& timed_out) {
    std::vector<std::optional<std::int64_t>> dists(trees.size());
    if (threads <= 1 || trees.size() < 2) {
        for (std::size_t i = 0; i < trees.size(); ++i) {
            if (deadline.hit()) {
                timed_out = true;
                break;
            }
            dists[i] = run_engine(engine, query, *trees[i]);
        }
        return dists;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= trees.size() || stop.load()) return;
            if (deadline.hit()) {
                stop.store(true);
                return;
            }
            dists[i] = run_engine(engine, query, *trees[i]);
        }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(threads, static_cast<int>(trees.size()));
    pool.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (stop.load()) timed_out = true;
    return dists;
}

} // namespace

LookupReport similarity_lookup(const JsonTree& query, CorpusStore& corpus,
                               const JsimIndex& index, std::int64_t tau,
                               const LookupOptions& opts) {
    auto t0 = Clock::now();
    Deadline deadline(opts.deadline_ms);
    LookupReport rep;
    rep.tau = tau;
    rep.query_size = query.size();
    rep.corpus_trees = static_cast<std::int64_t>(corpus.size());
    if (tau < 0) {
        rep.total_ms = ms_since(t0);
        return rep;
    }

    std::vector<std::int64_t> candidates = index.lookup(query, tau);
    rep.candidates_index = static_cast<std::int64_t>(candidates.size());
    rep.index_ms = ms_since(t0);

    auto t1 = Clock::now();
    std::vector<std::int64_t> survivors;
    if (opts.use_label_bound) {
        survivors.reserve(candidates.size());
        for (std::int64_t id : candidates) {
            if (deadline.hit()) {
                rep.timed_out = true;
                break;
            }
            if (label_intersection_bound(query, *corpus.tree(id)) <= tau)
                survivors.push_back(id);
        }
    } else {
        survivors = std::move(candidates);
    }
    rep.candidates_after_label = static_cast<std::int64_t>(survivors.size());

    std::vector<std::int64_t> accepted;
    std::vector<std::int64_t> undecided;
    if (opts.use_jofilter && !rep.timed_out) {
        JsonTree query_sorted = sort_tree(query);
        for (std::int64_t id : survivors) {
            if (deadline.hit()) {
                rep.timed_out = true;
                break;
            }
            if (jofilter(query_sorted, *corpus.sorted_tree(id), tau))
                accepted.push_back(id);
            else
                undecided.push_back(id);
        }
    } else {
        undecided = std::move(survivors);
    }
    rep.accepted_upper_bound = static_cast<std::int64_t>(accepted.size());
    rep.filter_ms = ms_since(t1);

    auto t2 = Clock::now();
    std::vector<std::int64_t> to_verify = undecided;
    if (opts.exact_distances) to_verify.insert(to_verify.end(), accepted.begin(), accepted.end());
    std::sort(to_verify.begin(), to_verify.end());

    std::vector<std::shared_ptr<const JsonTree>> trees;
    trees.reserve(to_verify.size());
    for (std::int64_t id : to_verify) trees.push_back(corpus.tree(id));

    bool timed_out = rep.timed_out;
    auto dists =
        verify_batch(query, trees, opts.engine, opts.threads, deadline, timed_out);
    rep.timed_out = timed_out;

    for (std::size_t i = 0; i < to_verify.size(); ++i) {
        if (!dists[i]) continue;
        ++rep.verified_pairs;
        if (*dists[i] <= tau) rep.results.push_back({to_verify[i], dists[i]});
    }
    if (!opts.exact_distances)
        for (std::int64_t id : accepted) rep.results.push_back({id, std::nullopt});
    rep.verify_ms = ms_since(t2);

    sort_results(rep.results, tau);
    rep.total_ms = ms_since(t0);
    return rep;
}

LookupReport linear_scan(const JsonTree& query, CorpusStore& corpus, std::int64_t tau,
                         EngineKind engine, std::int64_t deadline_ms) {
    auto t0 = Clock::now();
    Deadline deadline(deadline_ms);
    LookupReport rep;
    rep.tau = tau;
    rep.query_size = query.size();
    rep.corpus_trees = static_cast<std::int64_t>(corpus.size());
    rep.candidates_index = rep.corpus_trees;
    if (tau < 0) {
        rep.total_ms = ms_since(t0);
        return rep;
    }
    for (std::int64_t id : corpus.ids()) {
        if (deadline.hit()) {
            rep.timed_out = true;
            break;
        }
        auto tree = corpus.tree(id);
        if (std::llabs(tree->size() - query.size()) > tau) continue;
        ++rep.candidates_after_label;
        ++rep.verified_pairs;
        std::int64_t d = run_engine(engine, query, *tree);
        if (d <= tau) rep.results.push_back({id, d});
    }
    sort_results(rep.results, tau);
    rep.verify_ms = ms_since(t0);
    rep.total_ms = rep.verify_ms;
    return rep;
}

JsimIndex build_index(CorpusStore& corpus) {
    JsimIndex index;
    for (std::int64_t id : corpus.ids()) index.insert(id, *corpus.tree(id));
    return index;
}

std::int64_t tau_from_percent(std::int64_t percent, std::int64_t query_size) {
    if (percent < 0) return -1;
    return (percent * query_size + 50) / 100;
}

} // namespace jedi
