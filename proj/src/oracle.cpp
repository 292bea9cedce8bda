#include "jedi/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "jedi/distance.hpp"

namespace jedi {

namespace {

bool is_ancestor(const JsonTree& t, NodeId a, NodeId b) {
    // proper ancestor: b inside a's postorder interval, excluding a itself
    if (a == b) return false;
    std::int64_t pa = t.post(a), pb = t.post(b);
    return pb < pa && pb >= pa - t.subtree_size(a) + 1;
}

NodeId lca(const JsonTree& t, NodeId a, NodeId b) {
    while (a != b) {
        if (t.depth(a) >= t.depth(b)) a = t.node(a).parent;
        else b = t.node(b).parent;
    }
    return a;
}

// x strictly precedes y with neither an ancestor of the other.
bool left_of(const JsonTree& t, NodeId x, NodeId y) {
    return t.post(x) < t.post(y) && !is_ancestor(t, x, y) && !is_ancestor(t, y, x);
}

// Array-comparable: the paths from x and y meet at an Array node through two
// distinct children; the order is those children's positions.
bool array_compare(const JsonTree& t, NodeId x, NodeId y, int* order) {
    if (x == y || is_ancestor(t, x, y) || is_ancestor(t, y, x)) return false;
    NodeId l = lca(t, x, y);
    if (t.node(l).type != NodeType::Array) return false;
    NodeId cx = x, cy = y;
    while (t.node(cx).parent != l) cx = t.node(cx).parent;
    while (t.node(cy).parent != l) cy = t.node(cy).parent;
    *order = t.child_index(cx) < t.child_index(cy) ? -1 : 1;
    return true;
}

struct PairCheck {
    const JsonTree& t1;
    const JsonTree& t2;
    const ConstraintSet& cs;

    bool pairwise(NodeId v, NodeId w, NodeId v2, NodeId w2, std::string* why) const {
        if (cs.ancestor) {
            if (is_ancestor(t1, v, v2) != is_ancestor(t2, w, w2) ||
                is_ancestor(t1, v2, v) != is_ancestor(t2, w2, w)) {
                if (why) *why = "ancestor order broken";
                return false;
            }
        }
        if (cs.array_order) {
            int o1 = 0, o2 = 0;
            bool c1 = array_compare(t1, v, v2, &o1);
            bool c2 = array_compare(t2, w, w2, &o2);
            if (c1 && c2 && o1 != o2) {
                if (why) *why = "array order broken";
                return false;
            }
        }
        if (cs.total_order) {
            if (left_of(t1, v, v2) != left_of(t2, w, w2)) {
                if (why) *why = "left-to-right order broken";
                return false;
            }
        }
        return true;
    }

    bool triple(NodeId v, NodeId w, NodeId v2, NodeId w2, NodeId v3, NodeId w3,
                std::string* why) const {
        if (!cs.document_preserving) return true;
        bool a1 = is_ancestor(t1, lca(t1, v, v2), v3);
        bool a2 = is_ancestor(t2, lca(t2, w, w2), w3);
        if (a1 != a2) {
            if (why) *why = "common-ancestor structure broken";
            return false;
        }
        return true;
    }
};

} // namespace

bool validate_mapping(const JsonTree& t1, const JsonTree& t2,
                      const std::vector<std::pair<NodeId, NodeId>>& pairs,
                      const ConstraintSet& cs, std::string* why) {
    std::vector<char> used1(static_cast<std::size_t>(t1.size()), 0),
        used2(static_cast<std::size_t>(t2.size()), 0);
    for (auto [v, w] : pairs) {
        if (v < 0 || v >= t1.size() || w < 0 || w >= t2.size()) {
            if (why) *why = "node id out of range";
            return false;
        }
        if (used1[static_cast<std::size_t>(v)] || used2[static_cast<std::size_t>(w)]) {
            if (why) *why = "mapping is not one-to-one";
            return false;
        }
        used1[static_cast<std::size_t>(v)] = used2[static_cast<std::size_t>(w)] = 1;
        if (cs.same_type && t1.node(v).type != t2.node(w).type) {
            if (why) *why = "mapped nodes differ in type";
            return false;
        }
    }
    PairCheck chk{t1, t2, cs};
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            if (i != j &&
                !chk.pairwise(pairs[i].first, pairs[i].second, pairs[j].first, pairs[j].second,
                              why))
                return false;
            if (cs.document_preserving)
                for (std::size_t k = 0; k < pairs.size(); ++k)
                    if (!chk.triple(pairs[i].first, pairs[i].second, pairs[j].first,
                                    pairs[j].second, pairs[k].first, pairs[k].second, why))
                        return false;
        }
    return true;
}

std::int64_t mapping_cost(const JsonTree& t1, const JsonTree& t2,
                          const std::vector<std::pair<NodeId, NodeId>>& pairs) {
    std::int64_t cost = t1.size() + t2.size() - 2 * static_cast<std::int64_t>(pairs.size());
    for (auto [v, w] : pairs)
        cost += t1.label_key(v) == t2.label_key(w) ? 0 : 1;
    return cost;
}

namespace {

struct Search {
    const JsonTree& t1;
    const JsonTree& t2;
    const ConstraintSet& cs;
    std::int64_t n1, n2;
    std::vector<NodeId> order; // t1 nodes in postorder
    std::vector<char> used2;
    std::vector<std::pair<NodeId, NodeId>> current, best_pairs;
    std::int64_t best;
    PairCheck chk;

    Search(const JsonTree& a, const JsonTree& b, const ConstraintSet& c)
        : t1(a), t2(b), cs(c), n1(a.size()), n2(b.size()),
          used2(static_cast<std::size_t>(n2), 0), best(n1 + n2), chk{a, b, c} {
        order.reserve(static_cast<std::size_t>(n1));
        for (std::int64_t p = 1; p <= n1; ++p) order.push_back(a.node_at_post(p));
    }

    bool admissible(NodeId v, NodeId w) const {
        if (cs.same_type && t1.node(v).type != t2.node(w).type) return false;
        for (auto [v2, w2] : current) {
            if (!chk.pairwise(v, w, v2, w2, nullptr) || !chk.pairwise(v2, w2, v, w, nullptr))
                return false;
        }
        if (cs.document_preserving) {
            // every triple role the new pair can take, repeats included
            auto tri = [&](NodeId a1, NodeId b1, NodeId a2, NodeId b2, NodeId a3, NodeId b3) {
                return chk.triple(a1, b1, a2, b2, a3, b3, nullptr);
            };
            if (!tri(v, w, v, w, v, w)) return false;
            for (auto [v2, w2] : current) {
                if (!tri(v, w, v, w, v2, w2) || !tri(v, w, v2, w2, v, w) ||
                    !tri(v2, w2, v, w, v, w) || !tri(v2, w2, v2, w2, v, w) ||
                    !tri(v2, w2, v, w, v2, w2) || !tri(v, w, v2, w2, v2, w2))
                    return false;
                for (auto [v3, w3] : current)
                    if (!tri(v, w, v2, w2, v3, w3) || !tri(v2, w2, v, w, v3, w3) ||
                        !tri(v2, w2, v3, w3, v, w))
                        return false;
            }
        }
        return true;
    }

    void go(std::size_t i, std::int64_t cost, std::int64_t used_count) {
        std::int64_t r1 = n1 - static_cast<std::int64_t>(i);
        std::int64_t avail2 = n2 - used_count;
        if (cost + std::llabs(r1 - avail2) >= best) return;
        if (i == order.size()) {
            std::int64_t total = cost + avail2;
            if (total < best) {
                best = total;
                best_pairs = current;
            }
            return;
        }
        NodeId v = order[i];
        // try zero-cost renames first, then cost-1 renames, then deletion
        for (int phase = 0; phase < 2; ++phase) {
            for (NodeId w = 0; w < n2; ++w) {
                if (used2[static_cast<std::size_t>(w)]) continue;
                std::int64_t rc = t1.label_key(v) == t2.label_key(w) ? 0 : 1;
                if (rc != phase) continue;
                if (!admissible(v, w)) continue;
                used2[static_cast<std::size_t>(w)] = 1;
                current.emplace_back(v, w);
                go(i + 1, cost + rc, used_count + 1);
                current.pop_back();
                used2[static_cast<std::size_t>(w)] = 0;
            }
        }
        go(i + 1, cost + 1, used_count);
    }
};

} // namespace

EditMapping min_mapping(const JsonTree& t1, const JsonTree& t2, const ConstraintSet& cs,
                        std::int64_t size_cap) {
    if (t1.size() > size_cap || t2.size() > size_cap)
        throw std::invalid_argument("min_mapping: tree exceeds the size cap");
    Search s(t1, t2, cs);
    s.go(0, 0, 0);
    return {std::move(s.best_pairs), s.best};
}

} // namespace jedi
