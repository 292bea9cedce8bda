#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "jedi/json_tree.hpp"
#include "support/brute.hpp"
#include "support/fixtures.hpp"
#include "support/random_docs.hpp"

using namespace jedi;
using namespace testsupport;

TEST_CASE("movie documents parse into typed trees") {
    JsonTree a = parse_json_tree(kMovieA);
    JsonTree b = parse_json_tree(kMovieB);
    CHECK(a.size() == 11);
    CHECK(b.size() == 9);
    CHECK(a.node(a.root()).type == NodeType::Object);
    CHECK(a.post(a.root()) == 11);

    // Three keys under the left root, each with exactly one child.
    const JsonNode& root = a.node(a.root());
    REQUIRE(root.children.size() == 3);
    for (NodeId c : root.children) {
        CHECK(a.node(c).type == NodeType::Key);
        CHECK(a.node(c).children.size() == 1);
    }
    // The right cast is an array of two literals.
    const JsonNode& broot = b.node(b.root());
    NodeId cast_key = broot.children[0];
    CHECK(b.node(cast_key).key == "cast");
    NodeId arr = b.node(cast_key).children[0];
    CHECK(b.node(arr).type == NodeType::Array);
    CHECK(b.node(arr).children.size() == 2);
}

TEST_CASE("single values and empty containers") {
    CHECK(parse_json_tree("\"A\"").size() == 1);
    CHECK(parse_json_tree("{}").size() == 1);
    CHECK(parse_json_tree("[]").size() == 1);
    CHECK(parse_json_tree("null").node(0).literal.kind == LiteralKind::Null);
}

TEST_CASE("duplicate object keys are rejected with a byte offset") {
    CHECK_THROWS_WITH_AS(parse_json_tree("{\"a\":1,\"a\":2}"),
                         "duplicate object key \"a\" at byte 7", ParseError);
    // Same key on different objects is fine.
    CHECK(parse_json_tree("{\"a\":{\"a\":1}}").size() == 5);
}

TEST_CASE("malformed documents fail with positions") {
    auto offset = [](const char* text) {
        try {
            parse_json_tree(text);
        } catch (const ParseError& e) {
            return e.byte_offset;
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(offset("01") == 1);
    CHECK(offset("1.") == 2);
    CHECK(offset("1e") == 2);
    CHECK(offset("+1") == 0);
    CHECK(offset("tru") == 0);
    CHECK(offset("[1,]") == 3);
    CHECK(offset("{\"a\":}") == 5);
    CHECK(offset("{}x") == 2);
    CHECK(offset("") == 0);
    CHECK(offset("\"unterminated") != static_cast<std::size_t>(-1));
    CHECK(offset("\"\\x\"") != static_cast<std::size_t>(-1));
    CHECK(offset("\"\\ud800\"") != static_cast<std::size_t>(-1)); // lone surrogate
    CHECK(offset("1e999999999999999999") != static_cast<std::size_t>(-1));
    CHECK(offset("\xff") == 0);        // invalid UTF-8 byte
    CHECK(offset("\"\xc0\x80\"") == 1); // overlong encoding
}

TEST_CASE("numbers canonicalize before labeling") {
    auto label = [](const char* text) { return parse_json_tree(text).label_key(0); };
    CHECK(label("125") == label("125.0"));
    CHECK(label("125") == label("1.25e2"));
    CHECK(label("1") == label("1.0"));
    CHECK(label("1") == label("1e0"));
    CHECK(label("0") == label("-0"));
    CHECK(label("0") == label("0.000"));
    CHECK(label("0") == label("0e99"));
    CHECK(label("125") != label("1250"));
    CHECK(label("0.5") == label("5e-1"));
    CHECK(label("1e100") == label("10e99"));
}

TEST_CASE("serialization round-trips and stays canonical") {
    for (const char* text : {kMovieA, kMovieB, kRegroupA, kRegroupB, kSplitArrayA,
                             "{\"a\":[1,{\"b\":null},[]],\"c\":{}}", "0.00001", "-12.5",
                             "\"tab\\tquote\\\"\"", "[1e100,true,\"\\u00e9\"]"}) {
        JsonTree t = parse_json_tree(text);
        std::string s1 = serialize_tree(t);
        JsonTree t2 = parse_json_tree(s1);
        CHECK(serialize_tree(t2) == s1);
        CHECK(dump_tree(t2) == dump_tree(t));
    }
}

TEST_CASE("string escapes decode to UTF-8") {
    JsonTree t = parse_json_tree("\"\\ud83d\\ude00 \\u00e9\\n\"");
    CHECK(t.node(0).literal.string == "\xf0\x9f\x98\x80 \xc3\xa9\n");
    // Control characters must be escaped on the way out.
    CHECK(serialize_tree(t) == "\"\xf0\x9f\x98\x80 \xc3\xa9\\n\"");
}

TEST_CASE("region counts partition every tree") {
    Rng rng(2026);
    for (int iter = 0; iter < 150; ++iter) {
        JsonTree t = random_tree(rng, 1 + static_cast<int>(rng.below(40)));
        for (NodeId v = 0; v < t.size(); ++v) {
            RegionSignature got = t.region_signature(v);
            RegionSignature want = naive_signature(t, v);
            CHECK(got.desc == want.desc);
            CHECK(got.anc == want.anc);
            CHECK(got.lr == want.lr);
            CHECK(got.desc + got.anc + got.lr + 1 == t.size());
        }
    }
}

TEST_CASE("postorder numbering is a bijection") {
    Rng rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        JsonTree t = random_tree(rng, 1 + static_cast<int>(rng.below(50)));
        std::set<std::int64_t> seen;
        for (NodeId v = 0; v < t.size(); ++v) {
            std::int64_t p = t.post(v);
            CHECK(p >= 1);
            CHECK(p <= t.size());
            CHECK(seen.insert(p).second);
            CHECK(t.node_at_post(p) == v);
            // Children precede parents.
            for (NodeId c : t.node(v).children) CHECK(t.post(c) < p);
        }
        CHECK(t.subtree_size(t.root()) == t.size());
        for (NodeId v = 0; v < t.size(); ++v) {
            std::int64_t sum = 1;
            for (NodeId c : t.node(v).children) sum += t.subtree_size(c);
            CHECK(t.subtree_size(v) == sum);
            for (NodeId c : t.node(v).children) CHECK(t.depth(c) == t.depth(v) + 1);
        }
    }
}

TEST_CASE("child size prefix sums are sorted with a leading zero") {
    Rng rng(11);
    for (int iter = 0; iter < 80; ++iter) {
        JsonTree t = random_tree(rng, 1 + static_cast<int>(rng.below(40)));
        for (NodeId v = 0; v < t.size(); ++v) {
            const auto& pre = t.size_prefix(v);
            REQUIRE(pre.size() == t.node(v).children.size() + 1);
            CHECK(pre.front() == 0);
            CHECK(pre.back() == t.subtree_size(v) - 1);
            std::vector<std::int64_t> diffs;
            for (std::size_t i = 1; i < pre.size(); ++i) diffs.push_back(pre[i] - pre[i - 1]);
            CHECK(std::is_sorted(diffs.begin(), diffs.end()));
            // The increments are exactly the child subtree sizes.
            std::vector<std::int64_t> sizes;
            for (NodeId c : t.node(v).children) sizes.push_back(t.subtree_size(c));
            std::sort(sizes.begin(), sizes.end());
            CHECK(diffs == sizes);
        }
    }
}

TEST_CASE("key sort is canonical and idempotent") {
    JsonTree a = parse_json_tree(kMovieA);
    JsonTree sorted = sort_tree(a);
    CHECK(sorted.key_sorted());
    CHECK_FALSE(a.key_sorted());
    // Members in byte order: cast, running time, title.
    const JsonNode& root = sorted.node(sorted.root());
    REQUIRE(root.children.size() == 3);
    CHECK(sorted.node(root.children[0]).key == "cast");
    CHECK(sorted.node(root.children[1]).key == "running time");
    CHECK(sorted.node(root.children[2]).key == "title");
    CHECK(serialize_tree(sort_tree(sorted)) == serialize_tree(sorted));

    Rng rng(13);
    for (int iter = 0; iter < 60; ++iter) {
        JsonTree t = random_tree(rng, 1 + static_cast<int>(rng.below(40)));
        JsonTree s = sort_tree(t);
        CHECK(s.key_sorted());
        CHECK(s.size() == t.size());
        CHECK(serialize_tree(sort_tree(s)) == serialize_tree(s));
        // Arrays keep their order.
        for (NodeId v = 0; v < s.size(); ++v)
            if (s.node(v).type == NodeType::Object) {
                const auto& ch = s.node(v).children;
                for (std::size_t i = 1; i < ch.size(); ++i)
                    CHECK(s.node(ch[i - 1]).key < s.node(ch[i]).key);
            }
    }
    // Array order survives sorting even when elements would sort differently.
    CHECK(serialize_tree(sort_tree(parse_json_tree("[3,2,1]"))) == "[3,2,1]");
}

TEST_CASE("favorable child is a largest child, leftmost on ties") {
    Rng rng(17);
    for (int iter = 0; iter < 60; ++iter) {
        JsonTree t = random_tree(rng, 1 + static_cast<int>(rng.below(40)));
        for (NodeId v = 0; v < t.size(); ++v) {
            const auto& ch = t.node(v).children;
            if (ch.empty()) {
                CHECK(t.favorable_child(v) == -1);
                continue;
            }
            NodeId fav = t.favorable_child(v);
            auto it = std::find(ch.begin(), ch.end(), fav);
            REQUIRE(it != ch.end());
            for (NodeId c : ch) {
                CHECK(t.subtree_size(c) <= t.subtree_size(fav));
                if (t.subtree_size(c) == t.subtree_size(fav)) CHECK(t.post(fav) <= t.post(c));
            }
        }
    }
}

TEST_CASE("favorable traversal visits children before parents") {
    Rng rng(19);
    for (int iter = 0; iter < 40; ++iter) {
        JsonTree t = random_tree(rng, 1 + static_cast<int>(rng.below(40)));
        std::vector<NodeId> order = favorable_child_order(t);
        REQUIRE(order.size() == static_cast<std::size_t>(t.size()));
        std::vector<std::int64_t> position(order.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            position[static_cast<std::size_t>(order[i])] = static_cast<std::int64_t>(i);
        std::set<NodeId> unique_nodes(order.begin(), order.end());
        CHECK(unique_nodes.size() == order.size());
        for (NodeId v = 0; v < t.size(); ++v)
            for (NodeId c : t.node(v).children)
                CHECK(position[static_cast<std::size_t>(c)] <
                      position[static_cast<std::size_t>(v)]);
    }
}

TEST_CASE("node table dump lists postorder rows") {
    JsonTree t = parse_json_tree("{\"a\":[true]}");
    CHECK(dump_tree(t) ==
          "1\tL\ttrue\t2\n"
          "2\t[\t\t3\n"
          "3\tK\ta\t4\n"
          "4\t{\t\t0\n");
}
