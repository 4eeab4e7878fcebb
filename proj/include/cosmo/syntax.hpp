#ifndef COSMO_SYNTAX_HPP
#define COSMO_SYNTAX_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cosmo/core.hpp"
#include "cosmo/lexicon.hpp"

namespace cosmo {

enum class SyntaxKind { Longform, Shorthand };

/// 1-based position of a token's first byte.
struct Span {
    int line = 1;
    int column = 1;
    auto operator<=>(const Span&) const = default;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
    Severity severity = Severity::Error;
    Span span;
    std::string message;
    bool operator==(const ParseDiagnostic&) const = default;
};

struct Token {
    enum class Kind { Word, Item, Csm, Number, Text, Punct, End };
    Kind kind = Kind::End;
    std::string text;  // raw spelling; for Text, the brace content
    Span span;
    ItemId item;    // valid when kind == Item
    CsmId csm;      // valid when kind == Csm
    double number = 0;  // valid when kind == Number
};

/// Tokenizes model text. Never throws; lexical problems are appended to
/// diags and a best-effort token stream is still produced. The final token
/// has kind End. Brace-delimited value constraints come out as single Text
/// tokens holding the raw content.
std::vector<Token> lex(std::string_view text, std::vector<ParseDiagnostic>& diags);

struct ParseOptions {
    std::optional<SyntaxKind> syntax;   // unset: detect
    std::optional<std::string> lang;    // unset: detect (longform only)
    const Lexicon* lexicon = nullptr;   // null: builtin
};

struct ParseResult {
    std::optional<Model> model;  // nullopt when any error diagnostic exists
    std::vector<ParseDiagnostic> diagnostics;
    std::optional<SyntaxKind> syntax;  // what was parsed (or detected)
    std::string lang;                  // empty for shorthand
    bool ok() const { return model.has_value(); }
};

ParseResult parse(std::string_view text, const ParseOptions& opts = {});

struct Undetectable : Error {
    explicit Undetectable(const std::string& why) : Error("cannot detect notation: " + why) {}
};

struct Detection {
    SyntaxKind syntax = SyntaxKind::Longform;
    std::string lang;  // empty for shorthand; one candidate for longform
};

/// Keyword-based sniff of the notation. Throws Undetectable.
Detection detect_syntax(std::string_view text, const Lexicon& lexicon = Lexicon::builtin());

/// Canonical text for a model: one declaration per paragraph, one item per
/// line inside a constructor, instantiations after the last block.
std::string serialize(const Model& model, SyntaxKind syntax, const std::string& lang = "en",
                      const Lexicon& lexicon = Lexicon::builtin());

std::string serialize_constraint(const ValueConstraint& vc);
std::string serialize_value_item(const ValueItem& item);

struct ParseFailed : Error {
    explicit ParseFailed(std::vector<ParseDiagnostic> diags);
    std::vector<ParseDiagnostic> diagnostics;
};

/// parse (detecting notation and language) + serialize. Throws ParseFailed.
std::string convert(std::string_view text, SyntaxKind to, const std::string& lang = "en",
                    const Lexicon& lexicon = Lexicon::builtin());

std::string to_string(const ParseDiagnostic& d);

}  // namespace cosmo

#endif
