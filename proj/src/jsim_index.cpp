#include "jedi/jsim_index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

namespace jedi {

void JsimIndex::insert(std::int64_t tree_id, const JsonTree& t) {
    if (ids_.count(tree_id) || tombstones_.count(tree_id))
        throw std::invalid_argument("tree id already inserted: " + std::to_string(tree_id));
    ids_.insert(tree_id);
    node_count_ += t.size();
    for (NodeId v = 0; v < t.size(); ++v) {
        RegionSignature sig = t.region_signature(v);
        auto& posting = levels_[t.label_key(v)][sig.desc][sig.anc][sig.lr];
        auto it = std::lower_bound(posting.begin(), posting.end(), tree_id);
        if (it == posting.end() || *it != tree_id) posting.insert(it, tree_id);
        ++label_freq_[t.label_key(v)];
    }
}

void JsimIndex::remove(std::int64_t tree_id) {
    if (!ids_.count(tree_id))
        throw std::invalid_argument("tree id not present: " + std::to_string(tree_id));
    ids_.erase(tree_id);
    tombstones_.insert(tree_id);
}

bool JsimIndex::contains(std::int64_t tree_id) const { return ids_.count(tree_id) > 0; }

std::int64_t JsimIndex::label_frequency(const std::string& label_key) const {
    auto it = label_freq_.find(label_key);
    return it == label_freq_.end() ? 0 : it->second;
}

std::vector<NodeId> JsimIndex::select_probe_nodes(const JsonTree& query,
                                                  std::int64_t tau) const {
    std::vector<NodeId> nodes;
    nodes.reserve(static_cast<std::size_t>(query.size()));
    for (NodeId v = 0; v < query.size(); ++v) nodes.push_back(v);
    std::sort(nodes.begin(), nodes.end(), [&](NodeId a, NodeId b) {
        std::int64_t fa = label_frequency(query.label_key(a));
        std::int64_t fb = label_frequency(query.label_key(b));
        if (fa != fb) return fa < fb;
        return query.post(a) < query.post(b);
    });
    std::size_t want = static_cast<std::size_t>(
        std::min<std::int64_t>(tau + 1, query.size()));
    nodes.resize(want);
    return nodes;
}

std::vector<std::int64_t> JsimIndex::lookup_probe(const std::string& label_key,
                                                  const RegionSignature& sig, std::int64_t tau,
                                                  LookupCounters* counters) const {
    std::vector<std::int64_t> out;
    if (counters) ++counters->probes;
    auto l1 = levels_.find(label_key);
    if (l1 == levels_.end()) {
        if (counters) ++counters->probes_skipped;
        return out;
    }
    const Level2& by_desc = l1->second;
    auto d_lo = by_desc.lower_bound(sig.desc - tau);
    auto d_hi = by_desc.upper_bound(sig.desc + tau);
    if (counters)
        counters->desc_pruned +=
            static_cast<std::int64_t>(by_desc.size()) - std::distance(d_lo, d_hi);
    for (auto d = d_lo; d != d_hi; ++d) {
        if (counters) ++counters->desc_visited;
        std::int64_t budget_a = tau - std::llabs(d->first - sig.desc);
        const Level3& by_anc = d->second;
        auto a_lo = by_anc.lower_bound(sig.anc - budget_a);
        auto a_hi = by_anc.upper_bound(sig.anc + budget_a);
        if (counters)
            counters->anc_pruned +=
                static_cast<std::int64_t>(by_anc.size()) - std::distance(a_lo, a_hi);
        for (auto a = a_lo; a != a_hi; ++a) {
            if (counters) ++counters->anc_visited;
            std::int64_t budget_lr = budget_a - std::llabs(a->first - sig.anc);
            const Level4& by_lr = a->second;
            auto l_lo = by_lr.lower_bound(sig.lr - budget_lr);
            auto l_hi = by_lr.upper_bound(sig.lr + budget_lr);
            if (counters)
                counters->lr_pruned +=
                    static_cast<std::int64_t>(by_lr.size()) - std::distance(l_lo, l_hi);
            for (auto l = l_lo; l != l_hi; ++l) {
                if (counters) ++counters->lr_visited;
                for (std::int64_t id : l->second) {
                    if (counters) ++counters->postings_scanned;
                    if (!tombstones_.count(id)) out.push_back(id);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::int64_t> JsimIndex::lookup(const JsonTree& query, std::int64_t tau,
                                            LookupCounters* counters) const {
    if (tau >= query.size()) {
        // Every query node may be edited, so no probe is guaranteed to
        // survive; the probe union is no longer complete. Return all ids.
        return std::vector<std::int64_t>(ids_.begin(), ids_.end());
    }
    std::vector<std::int64_t> all;
    for (NodeId v : select_probe_nodes(query, tau)) {
        std::vector<std::int64_t> part =
            lookup_probe(query.label_key(v), query.region_signature(v), tau, counters);
        all.insert(all.end(), part.begin(), part.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

IndexStats JsimIndex::stats() const {
    IndexStats s;
    s.trees = static_cast<std::int64_t>(ids_.size());
    s.tombstones = static_cast<std::int64_t>(tombstones_.size());
    s.nodes = node_count_;
    s.labels = static_cast<std::int64_t>(levels_.size());
    for (const auto& [label, l2] : levels_) {
        s.desc_entries += static_cast<std::int64_t>(l2.size());
        for (const auto& [d, l3] : l2) {
            s.anc_entries += static_cast<std::int64_t>(l3.size());
            for (const auto& [a, l4] : l3) {
                s.lr_entries += static_cast<std::int64_t>(l4.size());
                for (const auto& [lr, posting] : l4)
                    s.posting_entries += static_cast<std::int64_t>(posting.size());
            }
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Snapshot format, version 1. All integers little-endian. Layout:
//   "JSIM" | u16 version | u16 reserved
//   u64 id count | i64 ids...
//   u64 tombstone count | i64 ids...
//   u64 node count
//   u64 label-frequency count | { u32 len | bytes | i64 freq }...
//   u64 level-1 count | per label:
//     u32 len | bytes | u64 level-2 count | per desc:
//       i64 desc | u64 level-3 count | per anc:
//         i64 anc | u64 level-4 count | per lr:
//           i64 lr | u64 posting count | i64 ids...

namespace {

void put_u16(std::string& out, std::uint16_t v) {
    out += static_cast<char>(v & 0xff);
    out += static_cast<char>((v >> 8) & 0xff);
}
void put_u32(std::string& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out += static_cast<char>((v >> (8 * k)) & 0xff);
}
void put_u64(std::string& out, std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out += static_cast<char>((v >> (8 * k)) & 0xff);
}
void put_i64(std::string& out, std::int64_t v) { put_u64(out, static_cast<std::uint64_t>(v)); }
void put_str(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out += s;
}

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > buf.size()) throw IndexFormatError("index snapshot truncated");
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint8_t>(buf[pos]) |
                          (static_cast<std::uint16_t>(static_cast<std::uint8_t>(buf[pos + 1])) << 8);
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int k = 3; k >= 0; --k)
            v = (v << 8) | static_cast<std::uint8_t>(buf[pos + static_cast<std::size_t>(k)]);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int k = 7; k >= 0; --k)
            v = (v << 8) | static_cast<std::uint8_t>(buf[pos + static_cast<std::size_t>(k)]);
        pos += 8;
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    std::uint64_t count() {
        std::uint64_t v = u64();
        if (v > buf.size()) throw IndexFormatError("index snapshot count out of range");
        return v;
    }
    std::string str() {
        std::uint32_t len = u32();
        need(len);
        std::string s = buf.substr(pos, len);
        pos += len;
        return s;
    }
};

} // namespace

void JsimIndex::save(std::ostream& out) const {
    std::string buf;
    buf += "JSIM";
    put_u16(buf, 1);
    put_u16(buf, 0);
    put_u64(buf, ids_.size());
    for (std::int64_t id : ids_) put_i64(buf, id);
    put_u64(buf, tombstones_.size());
    for (std::int64_t id : tombstones_) put_i64(buf, id);
    put_u64(buf, static_cast<std::uint64_t>(node_count_));

    // frequencies in sorted label order for a deterministic byte stream
    std::vector<std::pair<std::string, std::int64_t>> freqs(label_freq_.begin(),
                                                            label_freq_.end());
    std::sort(freqs.begin(), freqs.end());
    put_u64(buf, freqs.size());
    for (const auto& [label, f] : freqs) {
        put_str(buf, label);
        put_i64(buf, f);
    }

    put_u64(buf, levels_.size());
    for (const auto& [label, l2] : levels_) {
        put_str(buf, label);
        put_u64(buf, l2.size());
        for (const auto& [d, l3] : l2) {
            put_i64(buf, d);
            put_u64(buf, l3.size());
            for (const auto& [a, l4] : l3) {
                put_i64(buf, a);
                put_u64(buf, l4.size());
                for (const auto& [lr, posting] : l4) {
                    put_i64(buf, lr);
                    put_u64(buf, posting.size());
                    for (std::int64_t id : posting) put_i64(buf, id);
                }
            }
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IndexFormatError("failed to write index snapshot");
}

JsimIndex JsimIndex::load(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string buf = ss.str();
    if (in.bad()) throw IndexFormatError("failed to read index snapshot");

    Reader r{buf};
    r.need(4);
    if (buf.compare(0, 4, "JSIM") != 0) throw IndexFormatError("bad index snapshot magic");
    r.pos = 4;
    std::uint16_t version = r.u16();
    if (version != 1)
        throw IndexFormatError("unsupported index snapshot version " + std::to_string(version));
    r.u16(); // reserved

    JsimIndex idx;
    for (std::uint64_t k = r.count(); k-- > 0;) idx.ids_.insert(r.i64());
    for (std::uint64_t k = r.count(); k-- > 0;) idx.tombstones_.insert(r.i64());
    idx.node_count_ = r.i64();
    for (std::uint64_t k = r.count(); k-- > 0;) {
        std::string label = r.str();
        idx.label_freq_[label] = r.i64();
    }
    for (std::uint64_t k = r.count(); k-- > 0;) {
        std::string label = r.str();
        Level2& l2 = idx.levels_[label];
        for (std::uint64_t k2 = r.count(); k2-- > 0;) {
            Level3& l3 = l2[r.i64()];
            for (std::uint64_t k3 = r.count(); k3-- > 0;) {
                Level4& l4 = l3[r.i64()];
                for (std::uint64_t k4 = r.count(); k4-- > 0;) {
                    std::vector<std::int64_t>& posting = l4[r.i64()];
                    for (std::uint64_t k5 = r.count(); k5-- > 0;) posting.push_back(r.i64());
                    if (!std::is_sorted(posting.begin(), posting.end()))
                        throw IndexFormatError("index snapshot posting list not sorted");
                }
            }
        }
    }
    if (r.pos != buf.size()) throw IndexFormatError("trailing bytes in index snapshot");
    return idx;
}

void JsimIndex::save_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IndexFormatError("cannot open for writing: " + path);
    save(f);
    f.close();
    if (!f) throw IndexFormatError("failed to finish writing: " + path);
}

JsimIndex JsimIndex::load_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IndexFormatError("cannot open index snapshot: " + path);
    return load(f);
}

} // namespace jedi
