#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jedi/json_tree.hpp"

namespace jedi {

// Which structural constraints an edit mapping must satisfy. Node pairs are
// always one-to-one; the flags gate the relational conditions.
struct ConstraintSet {
    bool ancestor = true;            // ancestry preserved in both directions
    bool same_type = true;           // mapped nodes share a node type
    bool array_order = true;         // order among array-comparable nodes kept
    bool document_preserving = true; // lca-ancestry agrees across every triple
    bool total_order = false;        // full left-to-right order kept (ordered variant)

    static ConstraintSet unordered_document() { return {}; }
    static ConstraintSet ordered() {
        ConstraintSet c;
        c.total_order = true;
        return c;
    }
};

struct EditMapping {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    std::int64_t cost = 0;
};

// Checks a full mapping against the enabled constraints; on failure optionally
// reports which condition broke. One-to-one violations are always reported.
bool validate_mapping(const JsonTree& t1, const JsonTree& t2,
                      const std::vector<std::pair<NodeId, NodeId>>& pairs,
                      const ConstraintSet& cs, std::string* why = nullptr);

// Renames (0 or 1 per mapped pair) plus one per unmapped node on either side.
std::int64_t mapping_cost(const JsonTree& t1, const JsonTree& t2,
                          const std::vector<std::pair<NodeId, NodeId>>& pairs);

// Exhaustive minimum-cost valid mapping (branch and bound). Reference oracle
// for the distance engines; trees above size_cap nodes are rejected.
EditMapping min_mapping(const JsonTree& t1, const JsonTree& t2, const ConstraintSet& cs,
                        std::int64_t size_cap = 10);

} // namespace jedi
