#pragma once

#include <string>
#include <vector>

#include "jedi/json_tree.hpp"
#include "jedi/rng.hpp"

namespace testsupport {

// Small random documents with deliberately colliding labels: literals come
// from a tiny pool and keys from a short alphabet, so renames, equal-label
// matches and repeated subtrees all occur. Empty objects/arrays included.
inline void random_value(jedi::Rng& rng, int budget, int depth, std::string& out) {
    static const char* kLits[] = {"1",    "2",    "3",     "\"a\"", "\"b\"",
                                  "true", "false", "null",  "2.5",   "10"};
    if (budget <= 1 || depth > 6) {
        out += kLits[rng.below(10)];
        return;
    }
    switch (rng.below(3)) {
    case 0: { // object
        out += '{';
        const char* keys[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
        int max_members = std::min<int>(8, (budget - 1) / 2);
        int members = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_members) + 1));
        int spent = 1;
        std::vector<int> pick;
        for (int i = 0; i < 8; ++i) pick.push_back(i);
        for (int i = 0; i < members; ++i) {
            std::swap(pick[static_cast<std::size_t>(i)],
                      pick[i + static_cast<std::size_t>(rng.below(
                               static_cast<std::uint64_t>(8 - i)))]);
        }
        for (int i = 0; i < members; ++i) {
            if (i) out += ',';
            out += '"';
            out += keys[pick[static_cast<std::size_t>(i)]];
            out += "\":";
            int sub = 1 + static_cast<int>(rng.below(
                              static_cast<std::uint64_t>((budget - spent) / members) + 1));
            random_value(rng, sub, depth + 1, out);
            spent += 1 + sub;
        }
        out += '}';
        return;
    }
    case 1: { // array
        out += '[';
        int max_items = std::min<int>(8, budget - 1);
        int items = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_items) + 1));
        int spent = 1;
        for (int i = 0; i < items; ++i) {
            if (i) out += ',';
            int sub = 1 + static_cast<int>(rng.below(
                              static_cast<std::uint64_t>((budget - spent) / items) + 1));
            random_value(rng, sub, depth + 1, out);
            spent += sub;
        }
        out += ']';
        return;
    }
    default:
        out += kLits[rng.below(10)];
        return;
    }
}

inline std::string random_doc(jedi::Rng& rng, int budget) {
    std::string out;
    random_value(rng, budget, 0, out);
    return out;
}

inline jedi::JsonTree random_tree(jedi::Rng& rng, int budget) {
    return jedi::parse_json_tree(random_doc(rng, budget));
}

} // namespace testsupport
