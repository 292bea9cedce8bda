#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jedi/json_value.hpp"

namespace jedi {

using NodeId = std::int64_t;

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " at byte " + std::to_string(offset)), byte_offset(offset) {}
    std::size_t byte_offset;
};

struct JsonNode {
    NodeType type = NodeType::Literal;
    std::string key;       // Key nodes only
    LiteralValue literal;  // Literal nodes only
    NodeId parent = -1;
    std::vector<NodeId> children; // document order
};

struct RegionSignature {
    std::int64_t desc = 0; // nodes strictly below
    std::int64_t anc = 0;  // nodes strictly above
    std::int64_t lr = 0;   // everything else: |T| - desc - anc - 1
};

// Immutable parsed document. Node ids are dense indexes in document (preorder)
// order; the root is node 0. All derived statistics are computed once at
// construction.
class JsonTree {
public:
    explicit JsonTree(std::vector<JsonNode> nodes);

    std::int64_t size() const { return static_cast<std::int64_t>(nodes_.size()); }
    NodeId root() const { return 0; }
    const JsonNode& node(NodeId v) const { return nodes_[static_cast<std::size_t>(v)]; }

    // 1-based postorder position (children in document order).
    std::int64_t post(NodeId v) const { return post_[static_cast<std::size_t>(v)]; }
    NodeId node_at_post(std::int64_t p) const { return by_post_[static_cast<std::size_t>(p - 1)]; }

    std::int64_t subtree_size(NodeId v) const { return subtree_size_[static_cast<std::size_t>(v)]; }
    std::int64_t depth(NodeId v) const { return depth_[static_cast<std::size_t>(v)]; }
    RegionSignature region_signature(NodeId v) const;

    // Largest child by subtree size, leftmost on ties; -1 for leaves.
    NodeId favorable_child(NodeId v) const { return favorable_[static_cast<std::size_t>(v)]; }
    std::int64_t child_index(NodeId v) const { return child_index_[static_cast<std::size_t>(v)]; }

    // Prefix sums over the node's children subtree sizes in ascending size
    // order (ties keep document order); element 0 is 0.
    const std::vector<std::int64_t>& size_prefix(NodeId v) const {
        return size_prefix_[static_cast<std::size_t>(v)];
    }

    // Type-tagged canonical label encoding; equal strings <=> same type and
    // equal label under the tree model's label semantics.
    const std::string& label_key(NodeId v) const { return label_key_[static_cast<std::size_t>(v)]; }

    // True when every Object node lists its Key children in strictly
    // increasing bytewise key order.
    bool key_sorted() const { return key_sorted_; }

    const std::vector<JsonNode>& nodes() const { return nodes_; }

private:
    std::vector<JsonNode> nodes_;
    std::vector<std::int64_t> post_, subtree_size_, depth_, child_index_;
    std::vector<NodeId> by_post_, favorable_;
    std::vector<std::vector<std::int64_t>> size_prefix_;
    std::vector<std::string> label_key_;
    bool key_sorted_ = false;
};

// Strict RFC 8259 parse into the node model. Throws ParseError with a byte
// offset; a repeated key inside one object is an error naming the key.
JsonTree parse_json_tree(std::string_view text);

// Canonical compact serialization; parse_json_tree(serialize_tree(t)) yields a
// structurally identical tree.
std::string serialize_tree(const JsonTree& t);

// Copy with every Object node's Key children reordered bytewise by key.
// Arrays are untouched. Idempotent; the input is not modified.
JsonTree sort_tree(const JsonTree& t);

// Node ids in the order the banded filter visits them: each node after its
// children, favorable child's subtree first, remaining subtrees left to right.
std::vector<NodeId> favorable_child_order(const JsonTree& t);

// One node per line: postorder index, type tag, label, parent postorder index
// (0 for the root).
std::string dump_tree(const JsonTree& t);

} // namespace jedi
