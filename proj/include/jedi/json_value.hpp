#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace jedi {

enum class NodeType : std::uint8_t { Object, Array, Key, Literal };

char type_tag(NodeType t); // '{', '[', 'K', 'L'

// Exact decimal: value = (-1)^negative * digits * 10^exp10, where digits is a
// nonempty sequence with no leading or trailing zeros. Zero is the empty digit
// string with exp10 == 0 and negative == false, so numerically equal JSON
// numbers (1, 1.0, 1e0, -0 vs 0) normalize to identical Decimals.
struct Decimal {
    bool negative = false;
    std::string digits;
    std::int64_t exp10 = 0;

    bool is_zero() const { return digits.empty(); }
    bool operator==(const Decimal&) const = default;

    // Canonical text; parsing it back reproduces the same Decimal.
    std::string to_string() const;

    static Decimal make(bool negative, std::string_view integer_part,
                        std::string_view fraction_part, std::int64_t exponent);
};

enum class LiteralKind : std::uint8_t { Null, Bool, Number, String };

struct LiteralValue {
    LiteralKind kind = LiteralKind::Null;
    bool boolean = false;
    Decimal number;
    std::string string; // UTF-8, unescaped

    bool operator==(const LiteralValue&) const = default;

    static LiteralValue null() { return {}; }
    static LiteralValue of_bool(bool b) { return {LiteralKind::Bool, b, {}, {}}; }
    static LiteralValue of_number(Decimal d) { return {LiteralKind::Number, false, std::move(d), {}}; }
    static LiteralValue of_string(std::string s) { return {LiteralKind::String, false, {}, std::move(s)}; }
};

// Escapes and quotes a string for JSON output.
std::string quote_json_string(std::string_view s);

} // namespace jedi
