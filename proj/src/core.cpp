#include "cosmo/core.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace cosmo {

std::string to_string(const ItemId& id) {
    char prefix = id.kind == ItemKind::Q ? 'Q' : id.kind == ItemKind::P ? 'P' : 'Z';
    return prefix + std::to_string(id.number);
}

std::string to_string(LinkKind kind) {
    switch (kind) {
        case LinkKind::SubConstructorOf: return "SubConstructorOf";
        case LinkKind::InstanceOf: return "InstanceOf";
        case LinkKind::PartOf: return "PartOf";
    }
    return "";
}

std::string to_string(const CsmId& id) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "CSM%03d", id.number);
    return buf;
}

namespace {

bool all_digits(const std::string& s, std::size_t from) {
    if (from >= s.size()) return false;
    for (std::size_t i = from; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

// Variable names: ASCII letters/underscore start, then letters, digits,
// underscores. Bytes >= 0x80 count as letters so accented names survive.
bool is_var_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_var_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

bool is_var_name(const std::string& s) {
    if (s.empty() || !is_var_start(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!is_var_char(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Identifier classify_identifier(const std::string& token) {
    if (token.empty()) throw MalformedToken(token);
    if (token.size() >= 4 && token.compare(0, 3, "CSM") == 0 && all_digits(token, 3)) {
        if (token.size() != 6) throw CsmOutOfRange(token);
        int n = std::atoi(token.c_str() + 3);
        if (n < 1 || n > 14) throw CsmOutOfRange(token);
        return CsmId{n};
    }
    char head = token[0];
    if ((head == 'Q' || head == 'P' || head == 'Z') && token.size() > 1 &&
        std::isdigit(static_cast<unsigned char>(token[1]))) {
        if (!all_digits(token, 1)) throw MalformedToken(token);
        if (token[1] == '0') throw MalformedToken(token);  // no leading zeros, number >= 1
        ItemKind kind = head == 'Q' ? ItemKind::Q : head == 'P' ? ItemKind::P : ItemKind::Z;
        return ItemId{kind, std::strtoull(token.c_str() + 1, nullptr, 10)};
    }
    if (is_var_name(token)) return LocalVar{token};
    throw MalformedToken(token);
}

const Constructor* Model::find_constructor(const std::string& name) const {
    for (const auto& d : declarations)
        if (const auto* c = std::get_if<Constructor>(&d))
            if (c->name.name == name) return c;
    return nullptr;
}

std::vector<const Constructor*> Model::constructors() const {
    std::vector<const Constructor*> out;
    for (const auto& d : declarations)
        if (const auto* c = std::get_if<Constructor>(&d)) out.push_back(c);
    return out;
}

std::vector<const Link*> Model::links() const {
    std::vector<const Link*> out;
    for (const auto& d : declarations)
        if (const auto* l = std::get_if<Link>(&d)) out.push_back(l);
    return out;
}

std::string format_number(double value) {
    char buf[64];
    for (int prec : {15, 16, 17}) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

std::optional<double> parse_number(const std::string& text) {
    if (text.empty()) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) return std::nullopt;
    return v;
}

}  // namespace cosmo
