#include "jedi/synth.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "jedi/json_tree.hpp"

namespace jedi {
namespace {

// Mutable value form used only for generation and perturbation.
struct Val {
    enum Kind { Obj, Arr, Lit } kind = Lit;
    std::vector<std::pair<std::string, Val>> members; // Obj
    std::vector<Val> items;                           // Arr
    std::string lit;                                  // serialized literal token

    static Val literal(std::string token) {
        Val v;
        v.kind = Lit;
        v.lit = std::move(token);
        return v;
    }
    static Val object() {
        Val v;
        v.kind = Obj;
        return v;
    }
    static Val array() {
        Val v;
        v.kind = Arr;
        return v;
    }
};

std::string literal_token(const LiteralValue& lv) {
    switch (lv.kind) {
    case LiteralKind::Null: return "null";
    case LiteralKind::Bool: return lv.boolean ? "true" : "false";
    case LiteralKind::Number: return lv.number.to_string();
    case LiteralKind::String: return quote_json_string(lv.string);
    }
    return "null";
}

Val from_tree(const JsonTree& t, NodeId v) {
    const JsonNode& nd = t.node(v);
    switch (nd.type) {
    case NodeType::Object: {
        Val out = Val::object();
        for (NodeId c : nd.children) {
            const JsonNode& key = t.node(c);
            out.members.emplace_back(key.key, from_tree(t, key.children[0]));
        }
        return out;
    }
    case NodeType::Array: {
        Val out = Val::array();
        for (NodeId c : nd.children) out.items.push_back(from_tree(t, c));
        return out;
    }
    default:
        return Val::literal(literal_token(nd.literal));
    }
}

void to_text(const Val& v, std::string& out) {
    switch (v.kind) {
    case Val::Obj: {
        out += '{';
        bool first = true;
        for (const auto& [k, sub] : v.members) {
            if (!first) out += ',';
            first = false;
            out += quote_json_string(k);
            out += ':';
            to_text(sub, out);
        }
        out += '}';
        break;
    }
    case Val::Arr: {
        out += '[';
        bool first = true;
        for (const Val& sub : v.items) {
            if (!first) out += ',';
            first = false;
            to_text(sub, out);
        }
        out += ']';
        break;
    }
    case Val::Lit:
        out += v.lit;
        break;
    }
}

std::string to_text(const Val& v) {
    std::string out;
    to_text(v, out);
    return out;
}

const char* kWords[] = {"id",    "name",  "tags", "meta",  "count", "value",
                        "items", "label", "kind", "state", "score", "owner",
                        "path",  "size",  "rank", "note",  "flag",  "data"};
constexpr std::size_t kWordCount = sizeof(kWords) / sizeof(kWords[0]);

std::string fresh_key(Rng& rng, std::int64_t ordinal) {
    std::string base = kWords[rng.below(kWordCount)];
    return base + std::to_string(ordinal);
}

std::string rand_literal(Rng& rng) {
    switch (rng.below(8)) {
    case 0: return "null";
    case 1: return "true";
    case 2: return "false";
    case 3: return "\"" + std::string(kWords[rng.below(kWordCount)]) + "-" +
                   std::to_string(rng.below(1000)) + "\"";
    case 4: return std::to_string(rng.range(0, 99)) + "." + std::to_string(rng.range(1, 99));
    default: return std::to_string(rng.range(-1000, 100000));
    }
}

// Each member contributes 1 (key) + count(value) nodes.
void pad_object(Val& obj, Rng& rng, std::int64_t budget) {
    std::int64_t ordinal = static_cast<std::int64_t>(obj.members.size());
    if (budget % 2 == 1) {
        Val arr = Val::array();
        arr.items.push_back(Val::literal(rand_literal(rng)));
        obj.members.emplace_back(fresh_key(rng, ordinal++), std::move(arr));
        budget -= 3;
    }
    while (budget > 0) {
        if (budget >= 8 && rng.chance(0.15)) {
            Val arr = Val::array();
            std::int64_t j = rng.chance(0.5) ? 2 : 4;
            for (std::int64_t i = 0; i < j; ++i) arr.items.push_back(Val::literal(rand_literal(rng)));
            obj.members.emplace_back(fresh_key(rng, ordinal++), std::move(arr));
            budget -= 2 + j;
        } else {
            obj.members.emplace_back(fresh_key(rng, ordinal++), Val::literal(rand_literal(rng)));
            budget -= 2;
        }
    }
}

// Root array with n-1 literal items. Hits any n >= 1.
Val fallback_exact(std::int64_t n, Rng& rng) {
    if (n <= 1) return Val::literal(rand_literal(rng));
    Val arr = Val::array();
    for (std::int64_t i = 1; i < n; ++i) arr.items.push_back(Val::literal(rand_literal(rng)));
    return arr;
}

Val gen_flat_wide(std::int64_t n, Rng& rng) {
    if (n < 3) return fallback_exact(n, rng);
    Val obj = Val::object();
    pad_object(obj, rng, n - 1);
    return obj;
}

Val gen_deep(std::int64_t n, Rng& rng) {
    if (n < 11) return fallback_exact(n, rng);
    // Spine of nested objects, 2 nodes per level, literal at the bottom.
    std::int64_t levels =
        std::clamp<std::int64_t>((n - 1) / 6, 5, std::min<std::int64_t>(15, (n - 1) / 2));
    std::int64_t remaining = n - (2 * levels + 1);
    if (remaining == 1) { // 1 spare node is unpaddable; shorten the spine
        levels -= 1;
        remaining += 2;
    }
    std::vector<std::int64_t> pad(static_cast<std::size_t>(levels), 0);
    if (remaining % 2 == 1) {
        pad[rng.below(pad.size())] += 3;
        remaining -= 3;
    }
    while (remaining > 0) {
        pad[rng.below(pad.size())] += 2;
        remaining -= 2;
    }
    Val cur = Val::literal(rand_literal(rng));
    for (std::int64_t lvl = levels - 1; lvl >= 0; --lvl) {
        Val obj = Val::object();
        obj.members.emplace_back("n" + std::to_string(lvl), std::move(cur));
        pad_object(obj, rng, pad[static_cast<std::size_t>(lvl)]);
        cur = std::move(obj);
    }
    return cur;
}

Val gen_array_heavy(std::int64_t n, Rng& rng) {
    if (n < 4) return fallback_exact(n, rng);
    Val root = Val::array();
    std::int64_t remaining = n - 1;
    while (remaining > 0) {
        if (remaining >= 3 && rng.chance(0.7)) {
            std::int64_t j = std::min<std::int64_t>(remaining - 1, rng.range(2, 8));
            Val inner = Val::array();
            for (std::int64_t i = 0; i < j; ++i)
                inner.items.push_back(Val::literal(rand_literal(rng)));
            root.items.push_back(std::move(inner));
            remaining -= 1 + j;
        } else {
            root.items.push_back(Val::literal(rand_literal(rng)));
            remaining -= 1;
        }
    }
    return root;
}

Val gen_mixed(std::int64_t n, Rng& rng, int depth) {
    if (n <= 1) return Val::literal(rand_literal(rng));
    if (n == 2) {
        Val arr = Val::array();
        arr.items.push_back(Val::literal(rand_literal(rng)));
        return arr;
    }
    // Mostly small children; occasional large ones so big trees gain depth.
    auto budget = [&](std::int64_t remaining, std::int64_t lo) {
        std::int64_t hi = 9;
        if (remaining > 9 && depth < 60 && rng.chance(0.25)) hi = remaining;
        return std::min(remaining, rng.range(lo, hi));
    };
    bool as_object = n >= 4 && depth < 24 && rng.chance(0.5);
    if (as_object) {
        Val obj = Val::object();
        std::int64_t remaining = n - 1;
        std::int64_t ordinal = 0;
        while (remaining > 0) {
            std::int64_t c = budget(remaining, 2);
            if (remaining - c == 1) c += 1;
            obj.members.emplace_back(fresh_key(rng, ordinal++), gen_mixed(c - 1, rng, depth + 1));
            remaining -= c;
        }
        return obj;
    }
    Val arr = Val::array();
    std::int64_t remaining = n - 1;
    while (remaining > 0) {
        std::int64_t c = budget(remaining, 1);
        arr.items.push_back(gen_mixed(c, rng, depth + 1));
        remaining -= c;
    }
    return arr;
}

Val gen_exact(SynthProfile profile, std::int64_t n, Rng& rng) {
    switch (profile) {
    case SynthProfile::FlatWide: return gen_flat_wide(n, rng);
    case SynthProfile::Deep: return gen_deep(n, rng);
    case SynthProfile::ArrayHeavy: return gen_array_heavy(n, rng);
    default: return gen_mixed(n, rng, 0);
    }
}

std::int64_t default_target(SynthProfile profile, Rng& rng) {
    switch (profile) {
    case SynthProfile::FlatWide: return rng.range(110, 170);
    case SynthProfile::Deep: return rng.range(40, 80);
    case SynthProfile::ArrayHeavy: return rng.range(60, 140);
    default: return rng.range(30, 150);
    }
}

// Perturbation targets.
void collect_objects(Val& v, std::vector<Val*>& out) {
    if (v.kind == Val::Obj) {
        out.push_back(&v);
        for (auto& [k, sub] : v.members) collect_objects(sub, out);
    } else if (v.kind == Val::Arr) {
        for (Val& sub : v.items) collect_objects(sub, out);
    }
}

void collect_literals(Val& v, std::vector<Val*>& out) {
    switch (v.kind) {
    case Val::Lit: out.push_back(&v); break;
    case Val::Obj:
        for (auto& [k, sub] : v.members) collect_literals(sub, out);
        break;
    case Val::Arr:
        for (Val& sub : v.items) collect_literals(sub, out);
        break;
    }
}

bool has_key(const Val& obj, const std::string& key) {
    for (const auto& [k, sub] : obj.members)
        if (k == key) return true;
    return false;
}

// Returns the cost bound of the edit, or -1 if the op was inapplicable.
std::int64_t apply_op(Val& root, int op, Rng& rng, std::string& name) {
    switch (op) {
    case 0: { // rename one object key
        std::vector<Val*> objs;
        collect_objects(root, objs);
        std::erase_if(objs, [](Val* o) { return o->members.empty(); });
        if (objs.empty()) return -1;
        Val* obj = objs[rng.below(objs.size())];
        auto& member = obj->members[rng.below(obj->members.size())];
        std::string key;
        do {
            key = std::string(kWords[rng.below(kWordCount)]) + "_r" +
                  std::to_string(rng.below(100000));
        } while (has_key(*obj, key));
        member.first = std::move(key);
        name = "rename_key";
        return 1;
    }
    case 1: { // replace one literal value
        std::vector<Val*> lits;
        collect_literals(root, lits);
        if (lits.empty()) return -1;
        Val* lit = lits[rng.below(lits.size())];
        std::string nv;
        do {
            nv = rand_literal(rng);
        } while (nv == lit->lit);
        lit->lit = std::move(nv);
        name = "change_literal";
        return 1;
    }
    case 2: { // drop one literal-valued member
        std::vector<Val*> objs;
        collect_objects(root, objs);
        std::vector<std::pair<Val*, std::size_t>> spots;
        for (Val* o : objs)
            for (std::size_t i = 0; i < o->members.size(); ++i)
                if (o->members[i].second.kind == Val::Lit) spots.emplace_back(o, i);
        if (spots.empty()) return -1;
        auto [obj, idx] = spots[rng.below(spots.size())];
        obj->members.erase(obj->members.begin() + static_cast<std::ptrdiff_t>(idx));
        name = "delete_member";
        return 2;
    }
    default: { // shuffle one object's member order; free for unordered objects
        std::vector<Val*> objs;
        collect_objects(root, objs);
        std::erase_if(objs, [](Val* o) { return o->members.size() < 2; });
        if (objs.empty()) return -1;
        Val* obj = objs[rng.below(objs.size())];
        for (std::size_t i = obj->members.size(); i > 1; --i)
            std::swap(obj->members[i - 1], obj->members[rng.below(i)]);
        name = "reorder_members";
        return 0;
    }
    }
}

} // namespace

SynthProfile parse_profile(const std::string& name) {
    if (name == "flat") return SynthProfile::FlatWide;
    if (name == "deep") return SynthProfile::Deep;
    if (name == "arrays") return SynthProfile::ArrayHeavy;
    if (name == "mixed") return SynthProfile::Mixed;
    throw std::invalid_argument("unknown profile: " + name +
                                " (expected flat|deep|arrays|mixed)");
}

std::string profile_name(SynthProfile p) {
    switch (p) {
    case SynthProfile::FlatWide: return "flat";
    case SynthProfile::Deep: return "deep";
    case SynthProfile::ArrayHeavy: return "arrays";
    default: return "mixed";
    }
}

std::string synth_tree_text(SynthProfile profile, std::int64_t target_nodes, Rng& rng) {
    if (target_nodes < 1) throw std::invalid_argument("target_nodes must be >= 1");
    Val v = gen_exact(profile, target_nodes, rng);
    return to_text(v);
}

std::vector<SynthDoc> synth_corpus(const SynthConfig& cfg) {
    if (cfg.count < 0) throw std::invalid_argument("count must be >= 0");
    Rng rng(cfg.seed);
    std::vector<SynthDoc> out;
    out.reserve(static_cast<std::size_t>(cfg.count));
    for (std::int64_t i = 0; i < cfg.count; ++i) {
        if (i > 0 && rng.chance(cfg.perturb_fraction)) {
            std::int64_t base = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(i)));
            JsonTree t = parse_json_tree(out[static_cast<std::size_t>(base)].text);
            Val v = from_tree(t, t.root());
            SynthDoc doc;
            doc.base_id = base;
            for (int e = 0; e < cfg.edits; ++e) {
                std::string name;
                std::int64_t cost = -1;
                int op = static_cast<int>(rng.below(4));
                for (int tries = 0; tries < 4 && cost < 0; ++tries, op = (op + 1) % 4)
                    cost = apply_op(v, op, rng, name);
                if (cost < 0) continue;
                doc.edit_bound += cost;
                if (!doc.ops.empty()) doc.ops += ',';
                doc.ops += name;
            }
            doc.text = to_text(v);
            out.push_back(std::move(doc));
        } else {
            std::int64_t target =
                cfg.target_nodes > 0 ? cfg.target_nodes : default_target(cfg.profile, rng);
            SynthDoc doc;
            doc.text = synth_tree_text(cfg.profile, target, rng);
            out.push_back(std::move(doc));
        }
    }
    return out;
}

std::string shuffle_members(const std::string& json_text, std::uint64_t seed) {
    JsonTree t = parse_json_tree(json_text);
    Val v = from_tree(t, t.root());
    Rng rng(seed);
    std::vector<Val*> objs;
    collect_objects(v, objs);
    for (Val* obj : objs)
        for (std::size_t i = obj->members.size(); i > 1; --i)
            std::swap(obj->members[i - 1], obj->members[rng.below(i)]);
    return to_text(v);
}

std::optional<std::string> swap_array_pair(const std::string& json_text, std::uint64_t seed) {
    JsonTree t = parse_json_tree(json_text);
    Val v = from_tree(t, t.root());
    Rng rng(seed);
    std::vector<Val*> arrays;
    struct Walk {
        static void go(Val& n, std::vector<Val*>& out) {
            if (n.kind == Val::Arr) {
                if (n.items.size() >= 2) out.push_back(&n);
                for (Val& sub : n.items) go(sub, out);
            } else if (n.kind == Val::Obj) {
                for (auto& [k, sub] : n.members) go(sub, out);
            }
        }
    };
    Walk::go(v, arrays);
    std::vector<std::pair<Val*, std::size_t>> spots;
    for (Val* arr : arrays)
        for (std::size_t i = 0; i + 1 < arr->items.size(); ++i)
            if (to_text(arr->items[i]) != to_text(arr->items[i + 1])) spots.emplace_back(arr, i);
    if (spots.empty()) return std::nullopt;
    auto [arr, idx] = spots[rng.below(spots.size())];
    std::swap(arr->items[idx], arr->items[idx + 1]);
    return to_text(v);
}

} // namespace jedi
