#pragma once

#include <cstdint>
#include <vector>

#include "jedi/distance.hpp"
#include "jedi/json_tree.hpp"

namespace jedi {

// Exact edit distance that also preserves left-to-right order across the
// whole tree (arrays and object members alike). Defined on key-sorted trees;
// an upper bound on the unordered distance of the documents they were sorted
// from. Plain quadratic reference: O(|T1|*|T2|) time and memory.
std::int64_t jedi_order_exact(const JsonTree& t1, const JsonTree& t2);

// Same recursion with full int64 tables returned; small inputs only.
DistanceTables jedi_order_tables(const JsonTree& t1, const JsonTree& t2);

struct JofilterMetrics {
    std::int64_t cells = 0;       // distance cells + matching-row cells touched
    std::int64_t peak_states = 0; // most per-node cost states live at once
    bool size_exit = false;       // decided by the size difference alone
};

// Decides jedi_order_exact(t1, t2) <= tau while touching only cells within
// tau postorder positions of the diagonal, in favorable-child order with
// per-node cost states that are freed as soon as the node is processed.
// Expected cost O(|T1| * tau) time and O(log|T1| * tau) live memory.
bool jofilter(const JsonTree& t1, const JsonTree& t2, std::int64_t tau,
              JofilterMetrics* metrics = nullptr);

// The matching-row columns the filter evaluates for row node v at threshold
// tau: every non-root w within tau postorder positions of v. Empty when v is
// the root (it belongs to no matching row).
std::vector<NodeId> tau_sed_cells(const JsonTree& t1, const JsonTree& t2, NodeId v,
                                  std::int64_t tau);

} // namespace jedi
