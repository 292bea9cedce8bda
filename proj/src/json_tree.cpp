#include "jedi/json_tree.hpp"

#include <algorithm>
#include <unordered_set>

namespace jedi {

namespace {

std::string literal_text(const LiteralValue& lit) {
    switch (lit.kind) {
    case LiteralKind::Null: return "null";
    case LiteralKind::Bool: return lit.boolean ? "true" : "false";
    case LiteralKind::Number: return lit.number.to_string();
    case LiteralKind::String: return quote_json_string(lit.string);
    }
    return {};
}

std::string make_label_key(const JsonNode& n) {
    switch (n.type) {
    case NodeType::Object: return "{";
    case NodeType::Array: return "[";
    case NodeType::Key: return "K:" + n.key;
    case NodeType::Literal:
        switch (n.literal.kind) {
        case LiteralKind::Null: return "Lz";
        case LiteralKind::Bool: return n.literal.boolean ? "Lb:t" : "Lb:f";
        case LiteralKind::Number: {
            const Decimal& d = n.literal.number;
            return "Ln:" + std::string(d.negative ? "-" : "") + d.digits + "e" +
                   std::to_string(d.exp10);
        }
        case LiteralKind::String: return "Ls:" + n.literal.string;
        }
    }
    return {};
}

} // namespace

JsonTree::JsonTree(std::vector<JsonNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw std::invalid_argument("tree must have at least one node");
    const std::size_t n = nodes_.size();

    for (std::size_t v = 0; v < n; ++v) {
        const JsonNode& nd = nodes_[v];
        if (v == 0 && nd.parent != -1) throw std::invalid_argument("root must have parent -1");
        if (v > 0 && (nd.parent < 0 || static_cast<std::size_t>(nd.parent) >= v))
            throw std::invalid_argument("node parents must precede their children");
        switch (nd.type) {
        case NodeType::Key:
            if (nd.children.size() != 1)
                throw std::invalid_argument("key node must have exactly one child");
            if (v == 0 || nodes_[static_cast<std::size_t>(nd.parent)].type != NodeType::Object)
                throw std::invalid_argument("key node must be the child of an object");
            break;
        case NodeType::Literal:
            if (!nd.children.empty()) throw std::invalid_argument("literal node must be a leaf");
            break;
        case NodeType::Object:
            for (NodeId c : nd.children)
                if (nodes_[static_cast<std::size_t>(c)].type != NodeType::Key)
                    throw std::invalid_argument("object children must be key nodes");
            break;
        case NodeType::Array:
            for (NodeId c : nd.children)
                if (nodes_[static_cast<std::size_t>(c)].type == NodeType::Key)
                    throw std::invalid_argument("array children must not be key nodes");
            break;
        }
        for (NodeId c : nd.children)
            if (c <= static_cast<NodeId>(v) || c >= static_cast<NodeId>(n) ||
                nodes_[static_cast<std::size_t>(c)].parent != static_cast<NodeId>(v))
                throw std::invalid_argument("child links must mirror parent links");
    }

    depth_.assign(n, 0);
    subtree_size_.assign(n, 1);
    child_index_.assign(n, 0);
    for (std::size_t v = 1; v < n; ++v)
        depth_[v] = depth_[static_cast<std::size_t>(nodes_[v].parent)] + 1;
    for (std::size_t v = n; v-- > 1;)
        subtree_size_[static_cast<std::size_t>(nodes_[v].parent)] += subtree_size_[v];

    post_.assign(n, 0);
    by_post_.assign(n, 0);
    std::int64_t counter = 0;
    std::vector<std::pair<NodeId, std::size_t>> stack;
    stack.emplace_back(0, 0);
    while (!stack.empty()) {
        auto& [v, ci] = stack.back();
        const auto& ch = nodes_[static_cast<std::size_t>(v)].children;
        if (ci < ch.size()) {
            NodeId c = ch[ci++];
            stack.emplace_back(c, 0);
        } else {
            post_[static_cast<std::size_t>(v)] = ++counter;
            by_post_[static_cast<std::size_t>(counter - 1)] = v;
            stack.pop_back();
        }
    }

    favorable_.assign(n, -1);
    size_prefix_.resize(n);
    label_key_.resize(n);
    key_sorted_ = true;
    for (std::size_t v = 0; v < n; ++v) {
        const auto& ch = nodes_[v].children;
        NodeId fav = -1;
        std::int64_t best = 0;
        std::vector<std::int64_t> sizes;
        sizes.reserve(ch.size());
        for (std::size_t i = 0; i < ch.size(); ++i) {
            NodeId c = ch[i];
            child_index_[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(i);
            std::int64_t sz = subtree_size_[static_cast<std::size_t>(c)];
            sizes.push_back(sz);
            if (sz > best) {
                best = sz;
                fav = c;
            }
        }
        favorable_[v] = fav;
        std::stable_sort(sizes.begin(), sizes.end());
        auto& pref = size_prefix_[v];
        pref.assign(sizes.size() + 1, 0);
        for (std::size_t i = 0; i < sizes.size(); ++i) pref[i + 1] = pref[i] + sizes[i];
        label_key_[v] = make_label_key(nodes_[v]);
        if (nodes_[v].type == NodeType::Object)
            for (std::size_t i = 1; i < ch.size(); ++i)
                if (nodes_[static_cast<std::size_t>(ch[i - 1])].key >=
                    nodes_[static_cast<std::size_t>(ch[i])].key)
                    key_sorted_ = false;
    }
}

RegionSignature JsonTree::region_signature(NodeId v) const {
    RegionSignature r;
    r.desc = subtree_size(v) - 1;
    r.anc = depth(v);
    r.lr = size() - r.desc - r.anc - 1;
    return r;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    JsonTree run() {
        skip_ws();
        open_value(-1);
        while (!stack_.empty()) step();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing content after document");
        return JsonTree(std::move(nodes_));
    }

private:
    struct Frame {
        NodeId id;
        bool object;
        bool first = true;
        std::unordered_set<std::string> keys;
    };

    std::string_view s_;
    std::size_t pos_ = 0;
    std::vector<JsonNode> nodes_;
    std::vector<Frame> stack_;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const {
        if (eof()) throw ParseError("unexpected end of input", pos_);
        return s_[pos_];
    }
    void skip_ws() {
        while (!eof()) {
            char c = s_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') ++pos_;
            else break;
        }
    }
    void expect(char c, const char* what) {
        if (eof() || s_[pos_] != c) fail(std::string("expected ") + what);
        ++pos_;
    }

    NodeId add_node(JsonNode n) {
        NodeId id = static_cast<NodeId>(nodes_.size());
        if (n.parent != -1) nodes_[static_cast<std::size_t>(n.parent)].children.push_back(id);
        nodes_.push_back(std::move(n));
        return id;
    }

    void open_value(NodeId parent) {
        char c = peek();
        if (c == '{') {
            ++pos_;
            NodeId id = add_node({NodeType::Object, {}, {}, parent, {}});
            stack_.push_back(Frame{id, true, true, {}});
        } else if (c == '[') {
            ++pos_;
            NodeId id = add_node({NodeType::Array, {}, {}, parent, {}});
            stack_.push_back(Frame{id, false, true, {}});
        } else if (c == '"') {
            add_node({NodeType::Literal, {}, LiteralValue::of_string(parse_string()), parent, {}});
        } else if (c == '-' || (c >= '0' && c <= '9')) {
            add_node({NodeType::Literal, {}, LiteralValue::of_number(parse_number()), parent, {}});
        } else if (c == 't') {
            match("true");
            add_node({NodeType::Literal, {}, LiteralValue::of_bool(true), parent, {}});
        } else if (c == 'f') {
            match("false");
            add_node({NodeType::Literal, {}, LiteralValue::of_bool(false), parent, {}});
        } else if (c == 'n') {
            match("null");
            add_node({NodeType::Literal, {}, LiteralValue::null(), parent, {}});
        } else {
            fail("unexpected character");
        }
    }

    void step() {
        Frame& f = stack_.back();
        skip_ws();
        char close = f.object ? '}' : ']';
        if (!eof() && peek() == close && f.first) {
            ++pos_;
            stack_.pop_back();
            return;
        }
        if (!f.first) {
            if (!eof() && peek() == close) {
                ++pos_;
                stack_.pop_back();
                return;
            }
            expect(',', "',' or closing bracket");
            skip_ws();
        }
        f.first = false;
        if (f.object) {
            std::size_t key_at = pos_;
            if (eof() || peek() != '"') fail("expected object key string");
            std::string key = parse_string();
            if (!f.keys.insert(key).second)
                throw ParseError("duplicate object key \"" + key + "\"", key_at);
            NodeId kid = add_node({NodeType::Key, std::move(key), {}, f.id, {}});
            skip_ws();
            expect(':', "':' after object key");
            skip_ws();
            open_value(kid); // may push a frame; f possibly dangling after this
        } else {
            open_value(f.id);
        }
    }

    void match(const char* word) {
        std::size_t len = std::char_traits<char>::length(word);
        if (s_.substr(pos_, len) != word) fail("invalid literal");
        pos_ += len;
    }

    unsigned hex4() {
        unsigned v = 0;
        for (int k = 0; k < 4; ++k) {
            if (eof()) fail("unterminated \\u escape");
            char c = s_[pos_++];
            v <<= 4;
            if (c >= '0' && c <= '9') v |= static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f') v |= static_cast<unsigned>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') v |= static_cast<unsigned>(c - 'A' + 10);
            else fail("invalid \\u escape digit");
        }
        return v;
    }

    static void encode_utf8(unsigned cp, std::string& out) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xc0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3f));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xe0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
            out += static_cast<char>(0x80 | (cp & 0x3f));
        } else {
            out += static_cast<char>(0xf0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3f));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
            out += static_cast<char>(0x80 | (cp & 0x3f));
        }
    }

    void copy_utf8_sequence(std::string& out) {
        unsigned char b0 = static_cast<unsigned char>(s_[pos_]);
        int extra;
        unsigned char lo = 0x80, hi = 0xbf;
        if (b0 >= 0xc2 && b0 <= 0xdf) extra = 1;
        else if (b0 == 0xe0) { extra = 2; lo = 0xa0; }
        else if (b0 >= 0xe1 && b0 <= 0xec) extra = 2;
        else if (b0 == 0xed) { extra = 2; hi = 0x9f; }
        else if (b0 >= 0xee && b0 <= 0xef) extra = 2;
        else if (b0 == 0xf0) { extra = 3; lo = 0x90; }
        else if (b0 >= 0xf1 && b0 <= 0xf3) extra = 3;
        else if (b0 == 0xf4) { extra = 3; hi = 0x8f; }
        else fail("invalid UTF-8 byte");
        if (pos_ + static_cast<std::size_t>(extra) >= s_.size())
            fail("truncated UTF-8 sequence");
        out += static_cast<char>(b0);
        ++pos_;
        for (int k = 0; k < extra; ++k) {
            unsigned char b = static_cast<unsigned char>(s_[pos_]);
            unsigned char want_lo = (k == 0) ? lo : 0x80;
            unsigned char want_hi = (k == 0) ? hi : 0xbf;
            if (b < want_lo || b > want_hi) fail("invalid UTF-8 continuation byte");
            out += static_cast<char>(b);
            ++pos_;
        }
    }

    std::string parse_string() {
        expect('"', "string");
        std::string out;
        for (;;) {
            if (eof()) fail("unterminated string");
            unsigned char c = static_cast<unsigned char>(s_[pos_]);
            if (c == '"') {
                ++pos_;
                return out;
            }
            if (c == '\\') {
                ++pos_;
                if (eof()) fail("unterminated escape");
                char e = s_[pos_++];
                switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case '/': out += '/'; break;
                case 'b': out += '\b'; break;
                case 'f': out += '\f'; break;
                case 'n': out += '\n'; break;
                case 'r': out += '\r'; break;
                case 't': out += '\t'; break;
                case 'u': {
                    unsigned cp = hex4();
                    if (cp >= 0xd800 && cp <= 0xdbff) {
                        if (pos_ + 1 >= s_.size() || s_[pos_] != '\\' || s_[pos_ + 1] != 'u')
                            fail("unpaired high surrogate");
                        pos_ += 2;
                        unsigned lo2 = hex4();
                        if (lo2 < 0xdc00 || lo2 > 0xdfff) fail("invalid low surrogate");
                        cp = 0x10000 + ((cp - 0xd800) << 10) + (lo2 - 0xdc00);
                    } else if (cp >= 0xdc00 && cp <= 0xdfff) {
                        fail("unpaired low surrogate");
                    }
                    encode_utf8(cp, out);
                    break;
                }
                default: fail("invalid escape character");
                }
            } else if (c < 0x20) {
                fail("unescaped control character in string");
            } else if (c < 0x80) {
                out += static_cast<char>(c);
                ++pos_;
            } else {
                copy_utf8_sequence(out);
            }
        }
    }

    Decimal parse_number() {
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        std::size_t int_start = pos_;
        if (eof() || !isdigit_(peek())) fail("invalid number");
        if (peek() == '0') {
            ++pos_;
            if (!eof() && isdigit_(s_[pos_])) fail("leading zero in number");
        } else {
            while (!eof() && isdigit_(s_[pos_])) ++pos_;
        }
        std::string_view int_part = s_.substr(int_start, pos_ - int_start);

        std::string_view frac_part;
        if (!eof() && s_[pos_] == '.') {
            ++pos_;
            std::size_t frac_start = pos_;
            if (eof() || !isdigit_(peek())) fail("expected digit after decimal point");
            while (!eof() && isdigit_(s_[pos_])) ++pos_;
            frac_part = s_.substr(frac_start, pos_ - frac_start);
        }

        std::int64_t exp = 0;
        if (!eof() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            ++pos_;
            bool eneg = false;
            if (!eof() && (s_[pos_] == '+' || s_[pos_] == '-')) eneg = (s_[pos_++] == '-');
            if (eof() || !isdigit_(peek())) fail("expected digit in exponent");
            while (!eof() && isdigit_(s_[pos_])) {
                exp = exp * 10 + (s_[pos_++] - '0');
                if (exp > 1000000000000000LL) fail("number exponent out of range");
            }
            if (eneg) exp = -exp;
        }
        return Decimal::make(neg, int_part, frac_part, exp);
    }

    static bool isdigit_(char c) { return c >= '0' && c <= '9'; }
};

} // namespace

JsonTree parse_json_tree(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Serialization and transforms

std::string serialize_tree(const JsonTree& t) {
    std::string out;
    struct Frame {
        NodeId v;
        std::size_t ci = 0;
    };
    std::vector<Frame> stack;

    auto emit_value = [&](NodeId v) -> bool {
        // returns true when a container frame was pushed
        const JsonNode& n = t.node(v);
        if (n.type == NodeType::Object) {
            out += '{';
            stack.push_back({v, 0});
            return true;
        }
        if (n.type == NodeType::Array) {
            out += '[';
            stack.push_back({v, 0});
            return true;
        }
        out += literal_text(n.literal);
        return false;
    };

    emit_value(t.root());
    while (!stack.empty()) {
        Frame& f = stack.back();
        const JsonNode& n = t.node(f.v);
        if (f.ci == n.children.size()) {
            out += (n.type == NodeType::Object) ? '}' : ']';
            stack.pop_back();
            continue;
        }
        if (f.ci > 0) out += ',';
        NodeId c = n.children[f.ci++];
        if (n.type == NodeType::Object) {
            const JsonNode& key = t.node(c);
            out += quote_json_string(key.key);
            out += ':';
            emit_value(key.children[0]);
        } else {
            emit_value(c);
        }
    }
    return out;
}

JsonTree sort_tree(const JsonTree& t) {
    std::vector<JsonNode> out;
    out.reserve(static_cast<std::size_t>(t.size()));
    struct Item {
        NodeId old_id;
        NodeId new_parent;
    };
    std::vector<Item> stack;
    stack.push_back({t.root(), -1});
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const JsonNode& src = t.node(it.old_id);
        NodeId id = static_cast<NodeId>(out.size());
        out.push_back({src.type, src.key, src.literal, it.new_parent, {}});
        if (it.new_parent != -1)
            out[static_cast<std::size_t>(it.new_parent)].children.push_back(id);

        std::vector<NodeId> order(src.children);
        if (src.type == NodeType::Object)
            std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
                return t.node(a).key < t.node(b).key;
            });
        for (std::size_t i = order.size(); i-- > 0;) stack.push_back({order[i], id});
    }
    return JsonTree(std::move(out));
}

std::vector<NodeId> favorable_child_order(const JsonTree& t) {
    std::vector<NodeId> out;
    out.reserve(static_cast<std::size_t>(t.size()));
    struct Frame {
        NodeId v;
        std::vector<NodeId> order;
        std::size_t ci = 0;
    };
    std::vector<Frame> stack;
    auto make_frame = [&](NodeId v) {
        const auto& ch = t.node(v).children;
        Frame f{v, {}, 0};
        f.order.reserve(ch.size());
        NodeId fav = t.favorable_child(v);
        if (fav != -1) f.order.push_back(fav);
        for (NodeId c : ch)
            if (c != fav) f.order.push_back(c);
        return f;
    };
    stack.push_back(make_frame(t.root()));
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.ci < f.order.size()) {
            NodeId c = f.order[f.ci++];
            stack.push_back(make_frame(c));
        } else {
            out.push_back(f.v);
            stack.pop_back();
        }
    }
    return out;
}

std::string dump_tree(const JsonTree& t) {
    std::string out;
    for (std::int64_t p = 1; p <= t.size(); ++p) {
        NodeId v = t.node_at_post(p);
        const JsonNode& n = t.node(v);
        out += std::to_string(p);
        out += '\t';
        out += type_tag(n.type);
        out += '\t';
        if (n.type == NodeType::Key) out += n.key;
        else if (n.type == NodeType::Literal) out += literal_text(n.literal);
        out += '\t';
        out += std::to_string(n.parent == -1 ? 0 : t.post(n.parent));
        out += '\n';
    }
    return out;
}

} // namespace jedi
