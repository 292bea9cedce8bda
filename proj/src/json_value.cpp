#include "jedi/json_value.hpp"

namespace jedi {

char type_tag(NodeType t) {
    switch (t) {
    case NodeType::Object: return '{';
    case NodeType::Array: return '[';
    case NodeType::Key: return 'K';
    case NodeType::Literal: return 'L';
    }
    return '?';
}

Decimal Decimal::make(bool negative, std::string_view integer_part,
                      std::string_view fraction_part, std::int64_t exponent) {
    Decimal d;
    d.digits.reserve(integer_part.size() + fraction_part.size());
    d.digits.append(integer_part);
    d.digits.append(fraction_part);
    d.exp10 = exponent - static_cast<std::int64_t>(fraction_part.size());

    std::size_t lead = 0;
    while (lead < d.digits.size() && d.digits[lead] == '0') ++lead;
    d.digits.erase(0, lead);
    while (!d.digits.empty() && d.digits.back() == '0') {
        d.digits.pop_back();
        ++d.exp10;
    }
    if (d.digits.empty()) {
        d.exp10 = 0;
        d.negative = false;
    } else {
        d.negative = negative;
    }
    return d;
}

std::string Decimal::to_string() const {
    if (is_zero()) return "0";
    const std::int64_t n = static_cast<std::int64_t>(digits.size());
    const std::int64_t point = n + exp10; // digits before the decimal point
    std::string out;
    if (negative) out += '-';

    if (exp10 >= 0 && point <= 17) {
        out += digits;
        out.append(static_cast<std::size_t>(exp10), '0');
    } else if (exp10 < 0 && point > 0) {
        out += digits.substr(0, static_cast<std::size_t>(point));
        out += '.';
        out += digits.substr(static_cast<std::size_t>(point));
    } else if (exp10 < 0 && point <= 0 && -point <= 6) {
        out += "0.";
        out.append(static_cast<std::size_t>(-point), '0');
        out += digits;
    } else {
        out += digits[0];
        if (n > 1) {
            out += '.';
            out += digits.substr(1);
        }
        out += 'e';
        out += std::to_string(exp10 + n - 1);
    }
    return out;
}

std::string quote_json_string(std::string_view s) {
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(s.size() + 2);
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\b': out += "\\b"; break;
        case '\f': out += "\\f"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                out += "\\u00";
                out += hex[c >> 4];
                out += hex[c & 0xf];
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += '"';
    return out;
}

} // namespace jedi
