#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "jedi/json_tree.hpp"

namespace jedi {

struct IndexFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IndexStats {
    std::int64_t trees = 0;
    std::int64_t tombstones = 0;
    std::int64_t nodes = 0;
    std::int64_t labels = 0;          // level 1 entries
    std::int64_t desc_entries = 0;    // level 2
    std::int64_t anc_entries = 0;     // level 3
    std::int64_t lr_entries = 0;      // level 4
    std::int64_t posting_entries = 0;

    std::int64_t total_entries() const {
        return labels + desc_entries + anc_entries + lr_entries + posting_entries;
    }
};

struct LookupCounters {
    std::int64_t probes = 0;
    std::int64_t probes_skipped = 0; // label absent from level 1
    std::int64_t desc_visited = 0, desc_pruned = 0;
    std::int64_t anc_visited = 0, anc_pruned = 0;
    std::int64_t lr_visited = 0, lr_pruned = 0;
    std::int64_t postings_scanned = 0;
};

// Four-level candidate index over node labels and their region counts. A node
// contributes one path label -> descendants -> ancestors -> leftright -> tree
// id; a query probes a few globally rare nodes and walks only the key ranges
// a <= tau mapping permits, tightening the budget level by level.
class JsimIndex {
public:
    // Inserts every node of the tree under the given id. The id must not have
    // been inserted before (tombstoned ids stay taken).
    void insert(std::int64_t tree_id, const JsonTree& t);

    // Tombstones the id; lookups stop returning it. The id stays reserved.
    void remove(std::int64_t tree_id);

    bool contains(std::int64_t tree_id) const;

    // Up to tau+1 distinct query nodes carrying the globally rarest labels
    // (ties by postorder). Any mapping within tau must keep at least one of
    // them unchanged, so probing each label's region ranges is complete.
    std::vector<NodeId> select_probe_nodes(const JsonTree& query, std::int64_t tau) const;

    // Union of the per-probe range walks, sorted ascending, tombstones
    // excluded. Contains every indexed tree within distance tau of the query.
    std::vector<std::int64_t> lookup(const JsonTree& query, std::int64_t tau,
                                     LookupCounters* counters = nullptr) const;

    // Single-probe walk, exposed for tests: all tree ids holding a node with
    // this exact label whose region counts fit within tau of the given ones.
    std::vector<std::int64_t> lookup_probe(const std::string& label_key,
                                           const RegionSignature& sig, std::int64_t tau,
                                           LookupCounters* counters = nullptr) const;

    std::int64_t label_frequency(const std::string& label_key) const;

    IndexStats stats() const;

    // Binary snapshot (little-endian, magic "JSIM", versioned). Loading
    // rejects wrong magic, unknown versions, and truncated or trailing data.
    void save(std::ostream& out) const;
    static JsimIndex load(std::istream& in);
    void save_file(const std::string& path) const;
    static JsimIndex load_file(const std::string& path);

private:
    using Level4 = std::map<std::int64_t, std::vector<std::int64_t>>;
    using Level3 = std::map<std::int64_t, Level4>;
    using Level2 = std::map<std::int64_t, Level3>;

    std::map<std::string, Level2> levels_;
    std::unordered_map<std::string, std::int64_t> label_freq_;
    std::set<std::int64_t> ids_;
    std::set<std::int64_t> tombstones_;
    std::int64_t node_count_ = 0;
};

} // namespace jedi
