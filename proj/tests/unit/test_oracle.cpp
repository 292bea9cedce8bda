#include "doctest.h"

#include <string>

#include "jedi/distance.hpp"
#include "jedi/oracle.hpp"
#include "jedi/rng.hpp"
#include "support/fixtures.hpp"
#include "support/random_docs.hpp"

using namespace jedi;
using namespace testsupport;

namespace {

JsonTree small_tree(Rng& rng, std::int64_t max_nodes) {
    for (;;) {
        JsonTree t = random_tree(rng, static_cast<int>(1 + rng.below(8)));
        if (t.size() <= max_nodes) return t;
    }
}

} // namespace

TEST_CASE("search oracle reproduces the movie distance") {
    JsonTree a = parse_json_tree(kMovieA);
    JsonTree b = parse_json_tree(kMovieB);
    EditMapping m = min_mapping(a, b, ConstraintSet::unordered_document(), 11);
    CHECK(m.cost == 5);
    std::string why;
    CHECK(validate_mapping(a, b, m.pairs, ConstraintSet::unordered_document(), &why));
    CHECK(mapping_cost(a, b, m.pairs) == 5);
}

TEST_CASE("regrouped members: crossing is valid only without the document rule") {
    JsonTree a = parse_json_tree(kRegroupA);
    JsonTree b = parse_json_tree(kRegroupB);
    // Keep all four members intact, move two across parents, drop both inner
    // objects. Preorder ids; key nodes carry their literal child along.
    std::vector<std::pair<NodeId, NodeId>> cross = {
        {0, 0},           // root
        {3, 3},   {4, 4}, // x1key: "A"
        {5, 9},   {6, 10}, // x2key: "B" moves into the second object
        {9, 5},   {10, 6}, // x3key: "C" moves into the first
        {11, 11}, {12, 12}, // x4key: "D"
    };
    CHECK(mapping_cost(a, b, cross) == 8);

    ConstraintSet loose = ConstraintSet::unordered_document();
    loose.document_preserving = false;
    std::string why;
    CHECK(validate_mapping(a, b, cross, loose, &why));

    CHECK_FALSE(validate_mapping(a, b, cross, ConstraintSet::unordered_document(), &why));
    CHECK(why.find("common-ancestor") != std::string::npos);

    // Under the full rule set the best mapping renames within each object:
    // two key renames plus a key and literal rename inside each.
    CHECK(jedi_baseline(a, b) == 6);
    CHECK(quickjedi(a, b) == 6);
}

TEST_CASE("array order constraint rejects swaps") {
    JsonTree a = parse_json_tree("[1,2]");
    JsonTree b = parse_json_tree("[2,1]");
    std::vector<std::pair<NodeId, NodeId>> swap = {{0, 0}, {1, 2}, {2, 1}};
    std::string why;
    CHECK_FALSE(validate_mapping(a, b, swap, ConstraintSet::unordered_document(), &why));

    ConstraintSet no_order = ConstraintSet::unordered_document();
    no_order.array_order = false;
    CHECK(validate_mapping(a, b, swap, no_order, &why));
    CHECK(mapping_cost(a, b, swap) == 0);

    // With the constraint the cheapest repair renames both literals.
    EditMapping m = min_mapping(a, b, ConstraintSet::unordered_document(), 11);
    CHECK(m.cost == 2);
    CHECK(quickjedi(a, b) == 2);
}

TEST_CASE("literals may align across container types") {
    // Array versus object holding the same literals: the keys cost two
    // inserts, the array and object roots differ by a cross-type pair.
    JsonTree a = parse_json_tree("[1,2]");
    JsonTree b = parse_json_tree("{\"a\":1,\"b\":2}");
    EditMapping m = min_mapping(a, b, ConstraintSet::unordered_document(), 11);
    CHECK(m.cost == 4);
    CHECK(quickjedi(a, b) == 4);
}

TEST_CASE("ordered constraints price member swaps that the document rules ignore") {
    JsonTree a = parse_json_tree("{\"a\":1,\"b\":2}");
    JsonTree b = parse_json_tree("{\"b\":2,\"a\":1}");
    EditMapping unordered = min_mapping(a, b, ConstraintSet::unordered_document(), 11);
    CHECK(unordered.cost == 0);
    EditMapping ordered = min_mapping(a, b, ConstraintSet::ordered(), 11);
    CHECK(ordered.cost == 4);
    CHECK(quickjedi(a, b) == 0);
}

TEST_CASE("bad mappings are rejected with reasons") {
    JsonTree a = parse_json_tree("{\"a\":[1]}");
    JsonTree b = parse_json_tree("{\"a\":[1]}");
    std::string why;
    // Type mismatch: key onto array.
    CHECK_FALSE(validate_mapping(a, b, {{1, 2}}, ConstraintSet::unordered_document(), &why));
    // Duplicate target.
    CHECK_FALSE(
        validate_mapping(a, b, {{1, 1}, {2, 1}}, ConstraintSet::unordered_document(), &why));
    // Ancestry inversion: parent and child mapped upside down.
    CHECK_FALSE(
        validate_mapping(a, b, {{2, 3}, {3, 2}}, ConstraintSet::unordered_document(), &why));
    // Out of range.
    CHECK_FALSE(validate_mapping(a, b, {{7, 0}}, ConstraintSet::unordered_document(), &why));
}

TEST_CASE("oracle refuses oversized inputs") {
    JsonTree a = parse_json_tree(kRegroupA); // 13 nodes
    CHECK_THROWS(min_mapping(a, a, ConstraintSet::unordered_document(), 11));
}

TEST_CASE("search oracle agrees with both engines on small pairs") {
    Rng rng(311);
    for (int iter = 0; iter < 80; ++iter) {
        JsonTree a = small_tree(rng, 8);
        JsonTree b = small_tree(rng, 8);
        EditMapping m = min_mapping(a, b, ConstraintSet::unordered_document(), 11);
        std::string why;
        CHECK(validate_mapping(a, b, m.pairs, ConstraintSet::unordered_document(), &why));
        CHECK(mapping_cost(a, b, m.pairs) == m.cost);
        std::int64_t base = jedi_baseline(a, b);
        std::int64_t quick = quickjedi(a, b);
        CHECK(m.cost == base);
        CHECK(m.cost == quick);
    }
}
