#include "jedi/distance.hpp"

#include <algorithm>
#include <unordered_map>

namespace jedi {

std::int64_t node_align_cost(const JsonTree& t1, NodeId v, const JsonTree& t2, NodeId w) {
    if (t1.node(v).type != t2.node(w).type) return 2;
    return t1.label_key(v) == t2.label_key(w) ? 0 : 1;
}

namespace {

struct EngineRun {
    const JsonTree& t1;
    const JsonTree& t2;
    EngineKind kind;
    EngineStats* stats;
    const AuditFn& audit;
    std::int64_t n1, n2;
    std::vector<std::int64_t> tree, forest; // (n1+1)*(n2+1), row 0/col 0 unused

    EngineRun(const JsonTree& a, const JsonTree& b, EngineKind k, EngineStats* s, const AuditFn& f)
        : t1(a), t2(b), kind(k), stats(s), audit(f), n1(a.size()), n2(b.size()),
          tree(static_cast<std::size_t>((n1 + 1) * (n2 + 1)), 0),
          forest(static_cast<std::size_t>((n1 + 1) * (n2 + 1)), 0) {}

    std::int64_t& tree_at(std::int64_t p1, std::int64_t p2) {
        return tree[static_cast<std::size_t>(p1 * (n2 + 1) + p2)];
    }
    std::int64_t& forest_at(std::int64_t p1, std::int64_t p2) {
        return forest[static_cast<std::size_t>(p1 * (n2 + 1) + p2)];
    }

    MatchCosts build_costs(NodeId v, NodeId w) {
        const auto& cv = t1.node(v).children;
        const auto& cw = t2.node(w).children;
        MatchCosts c;
        c.l = static_cast<std::int64_t>(cv.size());
        c.m = static_cast<std::int64_t>(cw.size());
        c.sub.resize(static_cast<std::size_t>(c.l * c.m));
        c.del.resize(static_cast<std::size_t>(c.l));
        c.ins.resize(static_cast<std::size_t>(c.m));
        for (std::int64_t i = 0; i < c.l; ++i) c.del[static_cast<std::size_t>(i)] = t1.subtree_size(cv[static_cast<std::size_t>(i)]);
        for (std::int64_t j = 0; j < c.m; ++j) c.ins[static_cast<std::size_t>(j)] = t2.subtree_size(cw[static_cast<std::size_t>(j)]);
        for (std::int64_t i = 0; i < c.l; ++i)
            for (std::int64_t j = 0; j < c.m; ++j)
                c.sub[static_cast<std::size_t>(i * c.m + j)] =
                    tree_at(t1.post(cv[static_cast<std::size_t>(i)]), t2.post(cw[static_cast<std::size_t>(j)]));
        return c;
    }

    std::int64_t run() {
        for (std::int64_t p1 = 1; p1 <= n1; ++p1) {
            NodeId v = t1.node_at_post(p1);
            const auto& cv = t1.node(v).children;
            for (std::int64_t p2 = 1; p2 <= n2; ++p2) {
                NodeId w = t2.node_at_post(p2);
                const auto& cw = t2.node(w).children;

                std::int64_t ins_f = kInfCost, ins_t = kInfCost;
                for (NodeId c2 : cw) {
                    std::int64_t pc = t2.post(c2), sz = t2.subtree_size(c2);
                    ins_f = std::min(ins_f, forest_at(p1, pc) - (sz - 1));
                    ins_t = std::min(ins_t, tree_at(p1, pc) - sz);
                }
                if (!cw.empty()) {
                    ins_f += t2.subtree_size(w) - 1;
                    ins_t += t2.subtree_size(w);
                }
                std::int64_t del_f = kInfCost, del_t = kInfCost;
                for (NodeId c1 : cv) {
                    std::int64_t pc = t1.post(c1), sz = t1.subtree_size(c1);
                    del_f = std::min(del_f, forest_at(pc, p2) - (sz - 1));
                    del_t = std::min(del_t, tree_at(pc, p2) - sz);
                }
                if (!cv.empty()) {
                    del_f += t1.subtree_size(v) - 1;
                    del_t += t1.subtree_size(v);
                }

                std::int64_t ren_f = compute_ren_forest(v, w, ins_f, del_f);

                std::int64_t df = std::min({ins_f, del_f, ren_f});
                std::int64_t dt = std::min({ins_t, del_t, sat_add(df, node_align_cost(t1, v, t2, w))});
                forest_at(p1, p2) = df;
                tree_at(p1, p2) = dt;
            }
        }
        return tree_at(n1, n2);
    }

    std::int64_t compute_ren_forest(NodeId v, NodeId w, std::int64_t ins_f, std::int64_t del_f) {
        const auto& cv = t1.node(v).children;
        const auto& cw = t2.node(w).children;
        if (cv.empty() && cw.empty()) return 0;
        if (cv.empty()) return t2.subtree_size(w) - 1;
        if (cw.empty()) return t1.subtree_size(v) - 1;

        if (stats) ++stats->internal_pairs;
        const bool arrays = t1.node(v).type == NodeType::Array && t2.node(w).type == NodeType::Array;

        if (kind == EngineKind::Baseline) {
            MatchCosts costs = build_costs(v, w);
            std::int64_t r;
            if (arrays) {
                r = sed_matching(costs);
                if (stats) ++stats->sed_computed;
            } else {
                r = bpm_matching(costs);
                if (stats) ++stats->bpm_computed;
            }
            return r;
        }

        // quick engine
        if (t1.node(v).type == NodeType::Key && t2.node(w).type == NodeType::Key) {
            if (stats) ++stats->key_pairs;
            return tree_at(t1.post(cv[0]), t2.post(cw[0]));
        }

        const std::int64_t best_other = std::min(ins_f, del_f);
        const std::int64_t agg = aggregate_size_bound(t1.size_prefix(v), t2.size_prefix(w));

        PairAudit rec;
        const bool auditing = static_cast<bool>(audit);
        if (auditing) {
            rec.v = v;
            rec.w = w;
            rec.ins_forest = ins_f;
            rec.del_forest = del_f;
            rec.aggregate_bound = agg;
            rec.arrays = arrays;
            rec.costs = build_costs(v, w);
        }

        std::int64_t ren = kInfCost;
        if (agg >= best_other) {
            if (stats) ++stats->skipped_aggregate;
        } else if (arrays) {
            MatchCosts costs = build_costs(v, w);
            ren = sed_matching(costs);
            if (stats) ++stats->sed_computed;
        } else {
            MatchCosts costs = build_costs(v, w);
            GreedyResult g = greedy_matching_bound(costs);
            if (auditing) {
                rec.greedy_bound = g.bound;
                rec.greedy_exact = g.exact;
                rec.greedy_value = g.value;
            }
            if (g.exact) {
                ren = g.value;
                if (stats) ++stats->greedy_exact;
            } else if (g.bound >= best_other) {
                if (stats) ++stats->skipped_greedy;
            } else {
                ren = bpm_matching(costs);
                if (stats) ++stats->bpm_computed;
            }
        }
        if (auditing) {
            if (ren < kInfCost) rec.ren_forest = ren;
            audit(rec);
        }
        return ren;
    }
};

} // namespace

std::int64_t jedi_baseline(const JsonTree& t1, const JsonTree& t2) {
    AuditFn none;
    return EngineRun(t1, t2, EngineKind::Baseline, nullptr, none).run();
}

std::int64_t quickjedi(const JsonTree& t1, const JsonTree& t2, EngineStats* stats,
                       const AuditFn& audit) {
    return EngineRun(t1, t2, EngineKind::Quick, stats, audit).run();
}

DistanceTables jedi_baseline_tables(const JsonTree& t1, const JsonTree& t2) {
    AuditFn none;
    EngineRun run(t1, t2, EngineKind::Baseline, nullptr, none);
    run.run();
    DistanceTables out;
    out.n1 = run.n1;
    out.n2 = run.n2;
    out.tree = std::move(run.tree);
    out.forest = std::move(run.forest);
    return out;
}

std::int64_t label_intersection_bound(const JsonTree& t1, const JsonTree& t2) {
    const JsonTree* small = &t1;
    const JsonTree* big = &t2;
    if (small->size() > big->size()) std::swap(small, big);
    std::unordered_map<std::string_view, std::int64_t> bag;
    bag.reserve(static_cast<std::size_t>(small->size()) * 2);
    for (NodeId v = 0; v < small->size(); ++v) ++bag[small->label_key(v)];
    std::int64_t common = 0;
    for (NodeId v = 0; v < big->size(); ++v) {
        auto it = bag.find(big->label_key(v));
        if (it != bag.end() && it->second > 0) {
            --it->second;
            ++common;
        }
    }
    return big->size() - common;
}

} // namespace jedi
