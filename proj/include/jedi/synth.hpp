#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jedi/rng.hpp"

namespace jedi {

enum class SynthProfile { FlatWide, Deep, ArrayHeavy, Mixed };

// Accepts "flat", "deep", "arrays", "mixed". Throws std::invalid_argument otherwise.
SynthProfile parse_profile(const std::string& name);
std::string profile_name(SynthProfile p);

struct SynthDoc {
    std::string text;
    std::int64_t base_id = -1;   // id of the document this one was derived from, -1 if fresh
    std::int64_t edit_bound = 0; // upper bound on the distance to base_id
    std::string ops;             // comma-joined perturbation names, empty if fresh
};

struct SynthConfig {
    std::int64_t count = 100;
    SynthProfile profile = SynthProfile::Mixed;
    std::uint64_t seed = 1;
    double perturb_fraction = 0.2; // share of docs derived from an earlier one
    int edits = 1;                 // perturbations applied per derived doc
    std::int64_t target_nodes = 0; // 0: per-profile size range with jitter
};

// Deterministic for a given config. Document ids are vector indices.
std::vector<SynthDoc> synth_corpus(const SynthConfig& cfg);

// One document with exactly target_nodes tree nodes (target_nodes >= 1).
std::string synth_tree_text(SynthProfile profile, std::int64_t target_nodes, Rng& rng);

// Shuffles every object's member order. Distance-preserving: objects are unordered.
// Intended for synthetic/test documents (recursion depth follows nesting depth).
std::string shuffle_members(const std::string& json_text, std::uint64_t seed);

// Swaps two adjacent children of some array whose subtrees differ, if any exist.
std::optional<std::string> swap_array_pair(const std::string& json_text, std::uint64_t seed);

} // namespace jedi
