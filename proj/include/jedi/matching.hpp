#pragma once

#include <cstdint>
#include <vector>

namespace jedi {

// Saturating "unreachable" cost; larger than any distance at desk scale and
// safe to add a handful of times without overflowing int64.
inline constexpr std::int64_t kInfCost = std::int64_t{1} << 60;

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    return (a >= kInfCost || b >= kInfCost) ? kInfCost : a + b;
}

// One child-matching instance: left children 0..l-1 against right children
// 0..m-1. sub(i,j) is the cost of pairing them, del(i)/ins(j) the cost of
// leaving one side unmatched.
struct MatchCosts {
    std::int64_t l = 0, m = 0;
    std::vector<std::int64_t> sub; // l*m row-major
    std::vector<std::int64_t> del; // size l
    std::vector<std::int64_t> ins; // size m

    std::int64_t sub_at(std::int64_t i, std::int64_t j) const {
        return sub[static_cast<std::size_t>(i * m + j)];
    }
};

// Order-preserving matching (sequence edit over the two child lists).
std::int64_t sed_matching(const MatchCosts& c);

// Unordered one-to-one matching, exact (Hungarian assignment on a padded
// square instance). sed_matching(c) >= bpm_matching(c) for every instance.
std::int64_t bpm_matching(const MatchCosts& c);

struct GreedyResult {
    std::int64_t bound = 0; // always <= bpm_matching(c)
    bool exact = false;     // when set, value equals bpm_matching(c)
    std::int64_t value = 0;
};

// Per-child cheapest-counterpart bound: every left child picks its cheapest
// option across all right children and deletion, and vice versa; the bound is
// the larger of the two pick sums. When one side's picks form a feasible
// matching on their own (injective and covering the other side), that sum is
// the exact matching cost.
GreedyResult greedy_matching_bound(const MatchCosts& c);

// Lower bound on the unordered child-matching cost from the two children
// size-prefix arrays (ascending subtree sizes, leading zero element).
std::int64_t aggregate_size_bound(const std::vector<std::int64_t>& a,
                                  const std::vector<std::int64_t>& b);

} // namespace jedi
