#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "jedi/json_tree.hpp"
#include "jedi/matching.hpp"

namespace jedi {

enum class EngineKind : std::uint8_t { Baseline, Quick };

// Full quadratic tables indexed by 1-based postorder position on both sides;
// row/column 0 stands for the empty tree (those costs are the subtree sizes
// and are not stored).
struct DistanceTables {
    std::int64_t n1 = 0, n2 = 0;
    std::vector<std::int64_t> tree;   // (n1+1)*(n2+1)
    std::vector<std::int64_t> forest; // (n1+1)*(n2+1)

    std::int64_t tree_at(std::int64_t p1, std::int64_t p2) const {
        return tree[static_cast<std::size_t>(p1 * (n2 + 1) + p2)];
    }
    std::int64_t forest_at(std::int64_t p1, std::int64_t p2) const {
        return forest[static_cast<std::size_t>(p1 * (n2 + 1) + p2)];
    }
};

struct EngineStats {
    std::int64_t internal_pairs = 0;  // node pairs where a child matching is relevant
    std::int64_t sed_computed = 0;
    std::int64_t bpm_computed = 0;
    std::int64_t skipped_aggregate = 0;
    std::int64_t skipped_greedy = 0;
    std::int64_t greedy_exact = 0;
    std::int64_t key_pairs = 0;

    std::int64_t matchings_skipped() const { return skipped_aggregate + skipped_greedy; }
};

// Test hook: one record per internal node pair the engine evaluated, with the
// bounds it saw and the matching instance, so a checker can recompute the
// skipped matchings exactly.
struct PairAudit {
    NodeId v = -1, w = -1;
    std::int64_t ins_forest = 0, del_forest = 0;
    std::int64_t aggregate_bound = 0;
    std::optional<std::int64_t> greedy_bound;
    bool greedy_exact = false;
    std::int64_t greedy_value = 0;
    std::optional<std::int64_t> ren_forest; // value used; empty when skipped
    bool arrays = false;
    MatchCosts costs;
};
using AuditFn = std::function<void(const PairAudit&)>;

// Exact edit distance between two parsed documents (order within arrays,
// unordered object members). The baseline computes every child matching; the
// quick engine skips matchings whose lower bounds prove them irrelevant and
// returns identical distances.
std::int64_t jedi_baseline(const JsonTree& t1, const JsonTree& t2);
std::int64_t quickjedi(const JsonTree& t1, const JsonTree& t2, EngineStats* stats = nullptr,
                       const AuditFn& audit = {});

DistanceTables jedi_baseline_tables(const JsonTree& t1, const JsonTree& t2);

// Rename cost of aligning v with w when both are roots of their subtrees:
// 0 for equal type and label, 1 for same type, 2 otherwise (delete + insert).
std::int64_t node_align_cost(const JsonTree& t1, NodeId v, const JsonTree& t2, NodeId w);

// Bag-of-labels lower bound: max(|T1|,|T2|) minus the multiset intersection
// of type-tagged labels. Never exceeds the edit distance.
std::int64_t label_intersection_bound(const JsonTree& t1, const JsonTree& t2);

} // namespace jedi
