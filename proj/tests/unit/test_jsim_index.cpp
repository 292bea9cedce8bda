#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jedi/distance.hpp"
#include "jedi/jsim_index.hpp"
#include "jedi/rng.hpp"
#include "support/random_docs.hpp"

using namespace jedi;
using namespace testsupport;

namespace {

JsimIndex tiny_index() {
    JsimIndex idx;
    idx.insert(1, parse_json_tree("{\"a\":1}"));   // literal 1: desc 0, anc 2, lr 0
    idx.insert(2, parse_json_tree("{\"a\":[1]}")); // literal 1: desc 0, anc 3, lr 0
    idx.insert(3, parse_json_tree("[[1]]"));       // literal 1: desc 0, anc 2, lr 0
    idx.insert(4, parse_json_tree("\"x\""));       // no numeric label at all
    return idx;
}

} // namespace

TEST_CASE("probe walks only the signature ranges the budget allows") {
    JsimIndex idx = tiny_index();
    RegionSignature probe{0, 2, 0}; // literal 1 inside {"a":1}

    CHECK(idx.lookup_probe("Ln:1e0", probe, 0) == std::vector<std::int64_t>{1, 3});
    CHECK(idx.lookup_probe("Ln:1e0", probe, 1) == std::vector<std::int64_t>{1, 2, 3});
    CHECK(idx.lookup_probe("Ln:1e0", probe, 5) == std::vector<std::int64_t>{1, 2, 3});
    CHECK(idx.lookup_probe("Ls:x", RegionSignature{0, 0, 0}, 0) ==
          std::vector<std::int64_t>{4});
    // Absent label: nothing, and the miss is counted.
    LookupCounters c;
    CHECK(idx.lookup_probe("Lb:t", probe, 3, &c).empty());
    CHECK(c.probes_skipped == 1);

    // The anc budget is what separates doc 2; desc or lr gaps would spend the
    // same budget. One unit short means empty.
    RegionSignature deep{0, 3, 0};
    CHECK(idx.lookup_probe("Ln:1e0", deep, 0) == std::vector<std::int64_t>{2});
}

TEST_CASE("duplicate and tombstoned ids stay reserved") {
    JsimIndex idx = tiny_index();
    CHECK(idx.contains(2));
    CHECK_THROWS(idx.insert(2, parse_json_tree("3")));
    idx.remove(2);
    CHECK_FALSE(idx.contains(2));
    CHECK_THROWS(idx.insert(2, parse_json_tree("3"))); // still reserved
    CHECK_THROWS(idx.remove(2));                       // already gone
    CHECK_THROWS(idx.remove(99));

    RegionSignature probe{0, 2, 0};
    CHECK(idx.lookup_probe("Ln:1e0", probe, 1) == std::vector<std::int64_t>{1, 3});
    CHECK(idx.stats().tombstones == 1);
    CHECK(idx.stats().trees == 2 + 1); // docs 1, 3, 4
}

TEST_CASE("entry count stays within five per node") {
    Rng rng(501);
    JsimIndex idx;
    std::int64_t nodes = 0;
    for (int id = 0; id < 60; ++id) {
        JsonTree t = random_tree(rng, 1 + static_cast<int>(rng.below(50)));
        nodes += t.size();
        idx.insert(id, t);
    }
    IndexStats s = idx.stats();
    CHECK(s.nodes == nodes);
    CHECK(s.trees == 60);
    CHECK(s.total_entries() <= 5 * nodes);
    CHECK(s.labels > 0);
    CHECK(s.posting_entries > 0);
}

TEST_CASE("probe selection prefers globally rare labels") {
    JsimIndex idx = tiny_index();
    JsonTree q = parse_json_tree("{\"a\":[1,\"x\"]}");
    for (std::int64_t tau = 0; tau <= 4; ++tau) {
        std::vector<NodeId> probes = idx.select_probe_nodes(q, tau);
        CHECK(probes.size() ==
              static_cast<std::size_t>(std::min<std::int64_t>(tau + 1, q.size())));
        std::set<NodeId> uniq(probes.begin(), probes.end());
        CHECK(uniq.size() == probes.size());
        std::vector<std::int64_t> freqs;
        for (NodeId v : probes) freqs.push_back(idx.label_frequency(q.label_key(v)));
        CHECK(std::is_sorted(freqs.begin(), freqs.end()));
    }
    CHECK(idx.label_frequency("Ls:x") == 1);
    CHECK(idx.label_frequency("Ln:1e0") == 3);
    CHECK(idx.label_frequency("no-such-label") == 0);
}

TEST_CASE("candidates cover every tree within the threshold") {
    Rng rng(509);
    for (int round = 0; round < 6; ++round) {
        JsimIndex idx;
        std::vector<JsonTree> docs;
        for (int id = 0; id < 40; ++id) {
            docs.push_back(random_tree(rng, 1 + static_cast<int>(rng.below(25))));
            idx.insert(id, docs.back());
        }
        for (int qi = 0; qi < 8; ++qi) {
            JsonTree q = random_tree(rng, 1 + static_cast<int>(rng.below(25)));
            std::int64_t tau = static_cast<std::int64_t>(rng.below(6));
            std::vector<std::int64_t> cand = idx.lookup(q, tau);
            CHECK(std::is_sorted(cand.begin(), cand.end()));
            std::set<std::int64_t> cset(cand.begin(), cand.end());
            for (int id = 0; id < 40; ++id) {
                if (quickjedi(q, docs[static_cast<std::size_t>(id)]) <= tau)
                    CHECK(cset.count(id));
            }
        }
    }
}

TEST_CASE("snapshots round-trip exactly") {
    Rng rng(521);
    JsimIndex idx;
    std::vector<JsonTree> docs;
    for (int id = 0; id < 30; ++id) {
        docs.push_back(random_tree(rng, 1 + static_cast<int>(rng.below(30))));
        idx.insert(id, docs.back());
    }
    idx.remove(7);
    idx.remove(13);

    std::ostringstream out;
    idx.save(out);
    std::string blob = out.str();
    CHECK(blob.substr(0, 4) == "JSIM");

    std::istringstream in(blob);
    JsimIndex loaded = JsimIndex::load(in);
    CHECK(loaded.stats().total_entries() == idx.stats().total_entries());
    CHECK(loaded.stats().tombstones == 2);
    for (int qi = 0; qi < 10; ++qi) {
        JsonTree q = random_tree(rng, 1 + static_cast<int>(rng.below(30)));
        std::int64_t tau = static_cast<std::int64_t>(rng.below(5));
        CHECK(loaded.lookup(q, tau) == idx.lookup(q, tau));
    }
    // Same bytes when saved again.
    std::ostringstream out2;
    loaded.save(out2);
    CHECK(out2.str() == blob);
}

TEST_CASE("corrupt snapshots are refused") {
    JsimIndex idx = tiny_index();
    std::ostringstream out;
    idx.save(out);
    std::string blob = out.str();

    auto load_str = [](std::string s) {
        std::istringstream in(std::move(s));
        return JsimIndex::load(in);
    };
    // Bad magic.
    std::string bad = blob;
    bad[0] = 'X';
    CHECK_THROWS_AS(load_str(bad), IndexFormatError);
    // Unknown version.
    bad = blob;
    bad[4] = static_cast<char>(0x7f);
    CHECK_THROWS_AS(load_str(bad), IndexFormatError);
    // Truncations at every prefix length must fail, never crash.
    for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{9}, blob.size() / 2,
                            blob.size() - 1})
        CHECK_THROWS_AS(load_str(blob.substr(0, cut)), IndexFormatError);
    // Trailing garbage.
    CHECK_THROWS_AS(load_str(blob + "zz"), IndexFormatError);
    // Missing file.
    CHECK_THROWS(JsimIndex::load_file("/nonexistent/path/idx.bin"));
}

TEST_CASE("snapshot files round-trip through disk") {
    JsimIndex idx = tiny_index();
    std::string path = "jsim_test_snapshot.bin";
    idx.save_file(path);
    JsimIndex loaded = JsimIndex::load_file(path);
    CHECK(loaded.stats().trees == 4);
    RegionSignature probe{0, 2, 0};
    CHECK(loaded.lookup_probe("Ln:1e0", probe, 1) == std::vector<std::int64_t>{1, 2, 3});
    std::remove(path.c_str());
}
