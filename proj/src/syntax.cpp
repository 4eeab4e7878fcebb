#include "cosmo/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <set>
#include <sstream>

namespace cosmo {

namespace {

bool is_word_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

constexpr const char* kPunct = ":,()[]=.";

struct Lexer {
    std::string_view src;
    std::vector<ParseDiagnostic>& diags;
    std::size_t i = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return i >= src.size(); }
    char cur() const { return src[i]; }
    char peek(std::size_t k = 1) const { return i + k < src.size() ? src[i + k] : '\0'; }

    void advance() {
        if (src[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    }

    void error(Span s, const std::string& m) { diags.push_back({Severity::Error, s, m}); }
    void warn(Span s, const std::string& m) { diags.push_back({Severity::Warning, s, m}); }

    void skip_trivia() {
        while (!eof()) {
            char c = cur();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek() == '/') {
                while (!eof() && cur() != '\n') advance();
            } else {
                break;
            }
        }
    }

    // Consumes a quoted string body (opening quote already consumed),
    // appending raw bytes including the quotes to out.
    void take_string(std::string& out, Span start) {
        out += '"';
        while (!eof()) {
            char c = cur();
            advance();
            out += c;
            if (c == '\\' && !eof()) {
                out += cur();
                advance();
            } else if (c == '"') {
                return;
            }
        }
        error(start, "unterminated string literal");
    }

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_trivia();
            Span span{line, col};
            if (eof()) {
                out.push_back({Token::Kind::End, "", span, {}, {}, 0});
                return out;
            }
            char c = cur();
            if (c == '{') {
                advance();
                std::string content;
                bool closed = false;
                while (!eof()) {
                    char b = cur();
                    if (b == '}') {
                        advance();
                        closed = true;
                        break;
                    }
                    if (b == '"') {
                        advance();
                        take_string(content, span);
                    } else {
                        content += b;
                        advance();
                    }
                }
                if (!closed) error(span, "unterminated value constraint (missing '}')");
                out.push_back({Token::Kind::Text, content, span, {}, {}, 0});
            } else if (c == '"') {
                error(span, "string literal outside a value constraint");
                advance();
                std::string sink;
                take_string(sink, span);
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '-' && std::isdigit(static_cast<unsigned char>(peek())))) {
                std::string text;
                if (c == '-') {
                    text += c;
                    advance();
                }
                while (!eof() && std::isdigit(static_cast<unsigned char>(cur()))) {
                    text += cur();
                    advance();
                }
                // a dot continues the number only when digits follow; this
                // keeps Q5.Z12 style dot notation intact after items
                if (!eof() && cur() == '.' && std::isdigit(static_cast<unsigned char>(peek()))) {
                    text += '.';
                    advance();
                    while (!eof() && std::isdigit(static_cast<unsigned char>(cur()))) {
                        text += cur();
                        advance();
                    }
                }
                Token t{Token::Kind::Number, text, span, {}, {}, 0};
                t.number = parse_number(text).value_or(0);
                out.push_back(t);
            } else if (is_word_start(static_cast<unsigned char>(c))) {
                std::string word;
                while (!eof() && is_word_char(static_cast<unsigned char>(cur()))) {
                    word += cur();
                    advance();
                }
                Token t{Token::Kind::Word, word, span, {}, {}, 0};
                try {
                    Identifier id = classify_identifier(word);
                    if (auto* item = std::get_if<ItemId>(&id)) {
                        t.kind = Token::Kind::Item;
                        t.item = *item;
                    } else if (auto* csm = std::get_if<CsmId>(&id)) {
                        t.kind = Token::Kind::Csm;
                        t.csm = *csm;
                    }
                } catch (const Error&) {
                    warn(span, "'" + word + "' looks like an item id but is malformed; treating it as a variable");
                }
                out.push_back(t);
            } else if (std::strchr(kPunct, c)) {
                out.push_back({Token::Kind::Punct, std::string(1, c), span, {}, {}, 0});
                advance();
            } else {
                error(span, std::string("unexpected character '") + c + "'");
                advance();
            }
        }
    }
};

// --- value constraint sub-parser ---

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_constraint_items(const std::string& raw) {
    std::vector<std::string> pieces;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (quoted) {
            cur += c;
            if (c == '\\' && i + 1 < raw.size()) {
                cur += raw[++i];
            } else if (c == '"') {
                quoted = false;
            }
        } else if (c == '"') {
            quoted = true;
            cur += c;
        } else if (c == ',') {
            pieces.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    pieces.push_back(cur);
    return pieces;
}

std::optional<std::string> unescape_quoted(const std::string& piece) {
    if (piece.size() < 2 || piece.front() != '"' || piece.back() != '"') return std::nullopt;
    std::string out;
    for (std::size_t i = 1; i + 1 < piece.size(); ++i) {
        char c = piece[i];
        if (c == '"') return std::nullopt;  // early close: junk after the string
        if (c == '\\') {
            if (i + 2 >= piece.size()) return std::nullopt;  // escape would eat the final quote
            char e = piece[++i];
            switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                default: return std::nullopt;
            }
        } else {
            out += c;
        }
    }
    return out;
}

bool is_bare_text(const std::string& s) {
    if (s.empty() || !is_word_start(static_cast<unsigned char>(s[0]))) return false;
    if (s.back() == ' ') return false;
    for (char c : s)
        if (!is_word_char(static_cast<unsigned char>(c)) && c != ' ') return false;
    return true;
}

// --- parser ---

struct ItemError {};  // recover at the next comma
struct DeclError {};  // recover at the next declaration keyword

struct Parser {
    const std::vector<Token>& toks;
    SyntaxKind syntax;
    std::string lang;
    const Lexicon& lexicon;
    std::vector<ParseDiagnostic>& diags;
    std::size_t pos = 0;
    bool hadError = false;

    const Token& peek(std::size_t k = 0) const {
        std::size_t j = pos + k;
        return j < toks.size() ? toks[j] : toks.back();
    }
    const Token& get() {
        const Token& t = peek();
        if (pos + 1 < toks.size()) ++pos;
        return t;
    }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    bool at_punct(char c) const {
        return peek().kind == Token::Kind::Punct && peek().text[0] == c;
    }

    [[noreturn]] void fail_item(Span s, const std::string& m) {
        error(s, m);
        throw ItemError{};
    }
    [[noreturn]] void fail_decl(Span s, const std::string& m) {
        error(s, m);
        throw DeclError{};
    }
    void error(Span s, const std::string& m) {
        hadError = true;
        diags.push_back({Severity::Error, s, m});
    }
    void warn(Span s, const std::string& m) { diags.push_back({Severity::Warning, s, m}); }

    void expect_punct(char c, const char* what) {
        if (!at_punct(c)) fail_decl(peek().span, std::string("expected '") + c + "' " + what);
        get();
    }
    void expect_punct_item(char c, const char* what) {
        if (!at_punct(c)) fail_item(peek().span, std::string("expected '") + c + "' " + what);
        get();
    }

    std::optional<CsmId> keyword_of(const Token& t) const {
        if (lang == "csm" && t.kind == Token::Kind::Csm) return t.csm;
        if (t.kind == Token::Kind::Word) return lexicon.try_lookup(t.text, lang);
        return std::nullopt;
    }

    bool is_decl_start(const Token& t) const {
        if (syntax == SyntaxKind::Shorthand) {
            if (t.kind != Token::Kind::Word) return false;
            auto id = Lexicon::shorthand_lookup(t.text);
            return id && id->number >= 6 && id->number <= 10;
        }
        auto id = keyword_of(t);
        return id && id->number >= 6 && id->number <= 10;
    }

    void skip_to_declaration() {
        int depth = 0;
        while (!at_end()) {
            const Token& t = peek();
            if (t.kind == Token::Kind::Punct) {
                if (t.text[0] == '(') ++depth;
                if (t.text[0] == ')') --depth;
            }
            if (depth <= 0 && is_decl_start(t)) return;
            get();
        }
    }

    void skip_to_comma() {
        int depth = 0;
        while (!at_end()) {
            const Token& t = peek();
            if (t.kind == Token::Kind::Punct) {
                char c = t.text[0];
                if (c == '(' || c == '[') ++depth;
                if (c == ')' || c == ']') {
                    if (depth == 0) return;
                    --depth;
                }
                if (c == ',' && depth == 0) return;
            }
            if (is_decl_start(t) && depth == 0) return;
            get();
        }
    }

    LocalVar expect_var(const char* what) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Word)
            fail_item(t.span, std::string("expected a variable name ") + what);
        if (syntax == SyntaxKind::Shorthand ? Lexicon::shorthand_lookup(t.text).has_value()
                                            : keyword_of(t).has_value())
            fail_item(t.span, "keyword '" + t.text + "' cannot be used as a variable");
        get();
        return LocalVar{t.text};
    }

    ItemId expect_item(ItemKind kind, const char* what) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Item)
            fail_item(t.span, std::string("expected an item ") + what);
        if (t.item.kind != kind) {
            const char* k = kind == ItemKind::Q ? "Q" : kind == ItemKind::P ? "P" : "Z";
            fail_item(t.span, std::string("expected a ") + k + " item " + what + ", got '" +
                                  t.text + "'");
        }
        get();
        return t.item;
    }

    // --- value constraints ---

    ValueConstraint parse_constraint_text(const Token& textTok) {
        ValueConstraint vc;
        for (const auto& rawPiece : split_constraint_items(textTok.text)) {
            std::string piece = trim(rawPiece);
            if (piece.empty())
                fail_item(textTok.span, "empty value constraint item");
            vc.items.push_back(parse_constraint_piece(piece, textTok.span));
        }
        return vc;
    }

    ValueItem parse_constraint_piece(const std::string& piece, Span span) {
        if (piece.front() == '"') {
            auto text = unescape_quoted(piece);
            if (!text) fail_item(span, "bad quoted text in value constraint: " + piece);
            return TextValue{*text};
        }
        auto cmp = [&](std::size_t oplen, CmpOp op) -> ValueItem {
            auto num = parse_number(trim(piece.substr(oplen)));
            if (!num) fail_item(span, "expected a number after comparison in '" + piece + "'");
            return ComparisonValue{op, *num};
        };
        if (piece.rfind("<=", 0) == 0) return cmp(2, CmpOp::Le);
        if (piece.rfind(">=", 0) == 0) return cmp(2, CmpOp::Ge);
        if (piece.rfind("\xe2\x89\xa4", 0) == 0) return cmp(3, CmpOp::Le);  // ≤
        if (piece.rfind("\xe2\x89\xa5", 0) == 0) return cmp(3, CmpOp::Ge);  // ≥
        if (piece[0] == '<') return cmp(1, CmpOp::Lt);
        if (piece[0] == '>') return cmp(1, CmpOp::Gt);
        if (auto dots = piece.find(".."); dots != std::string::npos) {
            auto lo = parse_number(trim(piece.substr(0, dots)));
            auto hi = parse_number(trim(piece.substr(dots + 2)));
            if (!lo || !hi) fail_item(span, "bad range in value constraint: " + piece);
            if (*lo > *hi) fail_item(span, "range bounds out of order: " + piece);
            return RangeValue{*lo, *hi};
        }
        if (auto num = parse_number(piece)) return NumberValue{*num};
        try {
            Identifier id = classify_identifier(piece);
            if (auto* item = std::get_if<ItemId>(&id)) {
                if (item->kind != ItemKind::Q)
                    fail_item(span, "value constraint items must be Q items: " + piece);
                return ItemValue{*item};
            }
            return TextValue{piece};
        } catch (const Error&) {
            // fall through to bare text
        }
        if (is_bare_text(piece)) return TextValue{piece};
        fail_item(span, "cannot parse value constraint item: '" + piece + "'");
    }

    std::optional<ValueConstraint> maybe_constraint() {
        if (peek().kind != Token::Kind::Text) return std::nullopt;
        const Token& t = get();
        return parse_constraint_text(t);
    }

    // --- declarations ---

    struct BlockBuild {
        Block block;
        std::vector<RoleDecl> roles;  // textual order
        Span predSpan;
    };

    Model parse_model() {
        Model m;
        std::set<std::string> names;
        while (!at_end()) {
            try {
                parse_declaration(m, names);
            } catch (const DeclError&) {
                skip_to_declaration();
            } catch (const ItemError&) {
                skip_to_declaration();
            }
        }
        return m;
    }

    void parse_declaration(Model& m, std::set<std::string>& names) {
        const Token& t = peek();
        std::optional<CsmId> kw;
        if (syntax == SyntaxKind::Shorthand) {
            if (t.kind == Token::Kind::Word) kw = Lexicon::shorthand_lookup(t.text);
        } else {
            kw = keyword_of(t);
        }
        if (!kw || kw->number < 6 || kw->number > 10)
            fail_decl(t.span, "expected a constructor or link declaration, got '" + t.text + "'");
        get();
        switch (kw->number) {
            case 6:
            case 7: {
                Constructor c = parse_constructor(kw->number == 6 ? ConstructorKind::Instance
                                                                  : ConstructorKind::Type,
                                                  t.span);
                if (!names.insert(c.name.name).second)
                    error(t.span, "duplicate constructor name '" + c.name.name + "'");
                m.declarations.emplace_back(std::move(c));
                break;
            }
            case 8:
            case 9:
            case 10: {
                LinkKind lk = kw->number == 8   ? LinkKind::SubConstructorOf
                              : kw->number == 9 ? LinkKind::InstanceOf
                                                : LinkKind::PartOf;
                expect_punct('(', "after link keyword");
                LocalVar from = expect_var("for the link source");
                expect_punct(',', "between link endpoints");
                LocalVar to = expect_var("for the link target");
                expect_punct(')', "after link endpoints");
                if (lk != LinkKind::PartOf && from == to)
                    error(t.span, "link endpoints must differ");
                m.declarations.emplace_back(Link{lk, from, to});
                break;
            }
        }
    }

    Constructor parse_constructor(ConstructorKind kind, Span headSpan) {
        expect_punct(':', "after constructor keyword");
        LocalVar name = expect_var("for the constructor name");
        expect_punct('(', "to open the constructor body");

        std::vector<BlockBuild> builds;
        std::vector<std::pair<std::size_t, Instantiation>> flatInsts;  // positional block, decl
        while (!at_end() && !at_punct(')')) {
            if (is_decl_start(peek())) {
                error(peek().span, "unclosed constructor body (missing ')')");
                Constructor c{kind, name, {}};
                finalize(c, builds, flatInsts, headSpan);
                return c;
            }
            try {
                parse_block_item(builds, flatInsts);
            } catch (const ItemError&) {
                skip_to_comma();
            }
            if (at_punct(',')) {
                get();
                if (at_punct(')'))
                    warn(peek().span, "trailing comma before ')'");
            } else if (!at_punct(')') && !at_end() && !is_decl_start(peek())) {
                error(peek().span, "expected ',' or ')' in constructor body");
                skip_to_comma();
                if (at_punct(',')) get();
            }
        }
        if (at_punct(')'))
            get();
        else
            error(headSpan, "unclosed constructor body (missing ')')");
        Constructor c{kind, name, {}};
        finalize(c, builds, flatInsts, headSpan);
        return c;
    }

    void finalize(Constructor& c, std::vector<BlockBuild>& builds,
                  std::vector<std::pair<std::size_t, Instantiation>>& flatInsts, Span headSpan) {
        for (auto& bb : builds) {
            Block& b = bb.block;
            if (bb.roles.size() != 2) {
                error(bb.predSpan, "each block must declare exactly two roles");
                continue;
            }
            const LocalVar& v1 = b.predicate.var1;
            const LocalVar& v2 = b.predicate.var2;
            if (v1 == v2) error(bb.predSpan, "predicate variables must be distinct");
            if (bb.roles[0].var == v1 && bb.roles[1].var == v2) {
                b.role1 = bb.roles[0];
                b.role2 = bb.roles[1];
            } else if (bb.roles[0].var == v2 && bb.roles[1].var == v1) {
                b.role1 = bb.roles[1];
                b.role2 = bb.roles[0];
            } else {
                error(bb.predSpan, "role variables (" + bb.roles[0].var.name + ", " +
                                       bb.roles[1].var.name +
                                       ") do not match the predicate variables (" + v1.name +
                                       ", " + v2.name + ")");
            }
        }
        for (auto& bb : builds) c.blocks.push_back(std::move(bb.block));

        if (c.kind == ConstructorKind::Instance && flatInsts.empty())
            error(headSpan, "an instance constructor needs at least one instantiation");

        // Re-home each instantiation to the first block whose fillers include
        // its type item and that has not yet received an identical one;
        // otherwise it stays where it appeared (a validation rule then warns).
        for (auto& b : c.blocks) b.instantiations.clear();
        for (const auto& [posBlock, inst] : flatInsts) {
            std::size_t target = posBlock;
            std::size_t firstCandidate = c.blocks.size();
            bool placed = false;
            for (std::size_t bi = 0; bi < c.blocks.size(); ++bi) {
                const Block& b = c.blocks[bi];
                if (b.role1.filler != inst.typeItem && b.role2.filler != inst.typeItem) continue;
                if (firstCandidate == c.blocks.size()) firstCandidate = bi;
                auto& got = c.blocks[bi].instantiations;
                if (std::find(got.begin(), got.end(), inst) == got.end()) {
                    got.push_back(inst);
                    placed = true;
                    break;
                }
            }
            if (!placed) {
                std::size_t at = firstCandidate < c.blocks.size() ? firstCandidate : target;
                if (at < c.blocks.size()) c.blocks[at].instantiations.push_back(inst);
            }
        }
    }

    void parse_block_item(std::vector<BlockBuild>& builds,
                          std::vector<std::pair<std::size_t, Instantiation>>& flatInsts) {
        const Token& t = peek();
        if (syntax == SyntaxKind::Longform) {
            auto kw = keyword_of(t);
            if (kw) {
                switch (kw->number) {
                    case 3: parse_predicate(builds); return;
                    case 2: parse_instantiation(builds, flatInsts); return;
                    case 5: parse_function(builds); return;
                    case 11: parse_join(builds); return;
                    case 12: parse_mandatory(builds); return;
                    case 1:
                        fail_item(t.span, "'" + t.text + "' can only appear as a role filler");
                    default:
                        fail_item(t.span, "unexpected keyword '" + t.text + "' in constructor body");
                }
            }
            if (t.kind == Token::Kind::Word) {
                parse_role(builds);
                return;
            }
            fail_item(t.span, "expected a block item, got '" + t.text + "'");
        } else {
            if (t.kind == Token::Kind::Item) {
                const Token& next = peek(1);
                bool call = next.kind == Token::Kind::Punct && next.text[0] == '(';
                if (t.item.kind == ItemKind::P && call) {
                    parse_predicate(builds);
                    return;
                }
                if (t.item.kind == ItemKind::Z && call) {
                    parse_function(builds);
                    return;
                }
                if (t.item.kind == ItemKind::Q && next.kind == Token::Kind::Punct &&
                    next.text[0] == '.') {
                    parse_dot_function(builds);
                    return;
                }
                if (t.item.kind == ItemKind::Q && next.kind == Token::Kind::Punct &&
                    next.text[0] == '=') {
                    parse_instantiation(builds, flatInsts);
                    return;
                }
                fail_item(t.span, "unexpected item '" + t.text + "' in constructor body");
            }
            if (t.kind == Token::Kind::Word) {
                if (t.text == "Join") {
                    parse_join(builds);
                    return;
                }
                if (t.text == "IsMand") {
                    parse_mandatory(builds);
                    return;
                }
                parse_role(builds);
                return;
            }
            fail_item(t.span, "expected a block item, got '" + t.text + "'");
        }
    }

    BlockBuild& current_block(std::vector<BlockBuild>& builds, Span span, const char* what) {
        if (builds.empty())
            fail_item(span, std::string("a predicate must come before ") + what);
        return builds.back();
    }

    void parse_predicate(std::vector<BlockBuild>& builds) {
        Span span = peek().span;
        ItemId p{};
        LocalVar v1, v2;
        if (syntax == SyntaxKind::Longform) {
            get();  // Property keyword
            expect_punct_item('(', "after the predicate keyword");
            p = expect_item(ItemKind::P, "for the predicate");
            expect_punct_item('(', "after the predicate item");
            v1 = expect_var("for the first predicate variable");
            expect_punct_item(',', "between predicate variables");
            v2 = expect_var("for the second predicate variable");
            expect_punct_item(')', "after the predicate variables");
            expect_punct_item(')', "to close the predicate");
        } else {
            p = expect_item(ItemKind::P, "for the predicate");
            expect_punct_item('(', "after the predicate item");
            v1 = expect_var("for the first predicate variable");
            expect_punct_item(',', "between predicate variables");
            v2 = expect_var("for the second predicate variable");
            expect_punct_item(')', "after the predicate variables");
        }
        BlockBuild bb;
        bb.block.predicate = {p, v1, v2};
        bb.predSpan = span;
        builds.push_back(std::move(bb));
    }

    void parse_role(std::vector<BlockBuild>& builds) {
        Span span = peek().span;
        RoleDecl role;
        role.var = expect_var("for the role");
        if (at_punct('[')) {
            get();
            role.name = expect_item(ItemKind::Q, "for the role name");
            expect_punct_item(']', "after the role name");
        }
        expect_punct_item(':', "after the role variable");
        if (syntax == SyntaxKind::Longform) {
            auto kw = keyword_of(peek());
            if (!kw || (kw->number != 1 && kw->number != 2))
                fail_item(peek().span, "expected an object or object-type keyword after ':'");
            role.kind = kw->number == 1 ? RoleKind::Object : RoleKind::ObjectType;
            get();
            expect_punct_item('(', "after the role filler keyword");
            role.filler = expect_item(ItemKind::Q, "for the role filler");
            expect_punct_item(')', "after the role filler");
        } else {
            role.kind = RoleKind::ObjectType;
            if (at_punct('(')) {
                get();
                role.filler = expect_item(ItemKind::Q, "for the role filler");
                expect_punct_item(')', "after the role filler");
            } else if (peek().kind == Token::Kind::Number) {
                const Token& n = peek();
                std::string hint = n.text.find('.') == std::string::npos && !n.text.empty() &&
                                           n.text[0] != '-'
                                       ? " (did you mean Q" + n.text + "?)"
                                       : "";
                fail_item(n.span, "a role filler must be a Q item, not a bare number" + hint);
            } else {
                role.filler = expect_item(ItemKind::Q, "for the role filler");
            }
        }
        role.constraint = maybe_constraint();
        BlockBuild& bb = current_block(builds, span, "a role");
        if (bb.roles.size() >= 2)
            fail_item(span, "block already has two roles");
        bb.roles.push_back(std::move(role));
    }

    void parse_function(std::vector<BlockBuild>& builds) {
        Span span = peek().span;
        FunctionDecl fn;
        if (syntax == SyntaxKind::Longform) {
            get();  // Function keyword
            expect_punct_item('(', "after the function keyword");
            fn.zitem = expect_item(ItemKind::Z, "for the function");
            expect_punct_item('(', "after the function item");
            fn.args.push_back(expect_item(ItemKind::Q, "for a function argument"));
            while (at_punct(',')) {
                get();
                fn.args.push_back(expect_item(ItemKind::Q, "for a function argument"));
            }
            expect_punct_item(')', "after the function arguments");
            expect_punct_item(')', "to close the function");
        } else {
            fn.zitem = expect_item(ItemKind::Z, "for the function");
            expect_punct_item('(', "after the function item");
            fn.args.push_back(expect_item(ItemKind::Q, "for a function argument"));
            while (at_punct(',')) {
                get();
                fn.args.push_back(expect_item(ItemKind::Q, "for a function argument"));
            }
            expect_punct_item(')', "after the function arguments");
        }
        fn.constraint = maybe_constraint();
        current_block(builds, span, "a function").block.functions.push_back(std::move(fn));
    }

    void parse_dot_function(std::vector<BlockBuild>& builds) {
        Span span = peek().span;
        FunctionDecl fn;
        fn.args.push_back(expect_item(ItemKind::Q, "for the function argument"));
        expect_punct_item('.', "in dot notation");
        fn.zitem = expect_item(ItemKind::Z, "for the function");
        fn.constraint = maybe_constraint();
        current_block(builds, span, "a function").block.functions.push_back(std::move(fn));
    }

    void parse_join(std::vector<BlockBuild>& builds) {
        Span span = peek().span;
        get();  // Join keyword
        expect_punct_item('(', "after the join keyword");
        JoinDecl jd;
        jd.left = expect_join_item();
        expect_punct_item(',', "between joined items");
        jd.right = expect_join_item();
        expect_punct_item(')', "after the joined items");
        current_block(builds, span, "a join").block.joins.push_back(jd);
    }

    ItemId expect_join_item() {
        const Token& t = peek();
        if (t.kind != Token::Kind::Item || t.item.kind == ItemKind::Z)
            fail_item(t.span, "joined items must be Q or P items");
        get();
        return t.item;
    }

    void parse_mandatory(std::vector<BlockBuild>& builds) {
        Span span = peek().span;
        get();  // IsMandatory keyword
        expect_punct_item('(', "after the mandatory keyword");
        LocalVar v = expect_var("for the mandatory role");
        expect_punct_item(')', "after the mandatory role");
        current_block(builds, span, "a mandatory marker").block.mandatories.push_back(v);
    }

    void parse_instantiation(std::vector<BlockBuild>& builds,
                             std::vector<std::pair<std::size_t, Instantiation>>& flatInsts) {
        Span span = peek().span;
        Instantiation inst;
        if (syntax == SyntaxKind::Longform) {
            get();  // ObjectType keyword
            expect_punct_item('(', "after the object-type keyword");
            inst.typeItem = expect_item(ItemKind::Q, "for the instantiated type");
            expect_punct_item(')', "after the instantiated type");
        } else {
            inst.typeItem = expect_item(ItemKind::Q, "for the instantiated type");
        }
        expect_punct_item('=', "in the instantiation");
        const Token& rhs = peek();
        if (rhs.kind == Token::Kind::Item) {
            if (rhs.item.kind != ItemKind::Q)
                fail_item(rhs.span, "the selected instance must be a Q item");
            inst.instanceItem = rhs.item;
            get();
        } else if (rhs.kind == Token::Kind::Text) {
            get();
            std::string inner = trim(rhs.text);
            try {
                Identifier id = classify_identifier(inner);
                auto* item = std::get_if<ItemId>(&id);
                if (!item || item->kind != ItemKind::Q) throw MalformedToken(inner);
                inst.instanceItem = *item;
            } catch (const Error&) {
                fail_item(rhs.span, "expected a single Q item inside '={...}', got '" + inner + "'");
            }
        } else {
            fail_item(rhs.span, "expected a Q item after '='");
        }
        current_block(builds, span, "an instantiation");
        flatInsts.emplace_back(builds.size() - 1, inst);
        builds.back().block.instantiations.push_back(inst);  // positional; re-homed in finalize
    }
};

struct SniffResult {
    std::optional<SyntaxKind> syntax;
    std::vector<std::string> langs;  // longform candidates
    std::string why;                 // failure reason
};

SniffResult sniff(const std::vector<Token>& toks, const Lexicon& lexicon,
                  std::optional<SyntaxKind> syntaxHint, std::optional<std::string> langHint) {
    for (const auto& t : toks) {
        if (t.kind == Token::Kind::Csm) {
            if (langHint && *langHint != "csm")
                return {std::nullopt, {}, "first keyword is a CSM id but language '" + *langHint +
                                              "' was requested"};
            return {SyntaxKind::Longform, {"csm"}, ""};
        }
        if (t.kind != Token::Kind::Word) continue;
        bool shorthandOk = !syntaxHint || *syntaxHint == SyntaxKind::Shorthand;
        if (shorthandOk && Lexicon::shorthand_lookup(t.text))
            return {SyntaxKind::Shorthand, {}, ""};
        bool longformOk = !syntaxHint || *syntaxHint == SyntaxKind::Longform;
        if (longformOk) {
            std::vector<std::string> langs;
            if (langHint) {
                if (lexicon.try_lookup(t.text, *langHint)) langs = {*langHint};
            } else {
                langs = lexicon.languages_with_keyword(t.text);
            }
            if (!langs.empty()) return {SyntaxKind::Longform, langs, ""};
        }
        return {std::nullopt, {}, "first word '" + t.text + "' is not a keyword"};
    }
    return {std::nullopt, {}, "no keyword token found"};
}

ParseResult run_parser(const std::vector<Token>& toks, SyntaxKind syntax, const std::string& lang,
                       const Lexicon& lexicon, const std::vector<ParseDiagnostic>& lexDiags) {
    ParseResult r;
    r.syntax = syntax;
    r.lang = syntax == SyntaxKind::Shorthand ? "" : lang;
    r.diagnostics = lexDiags;
    Parser p{toks, syntax, lang, lexicon, r.diagnostics};
    Model m = p.parse_model();
    bool anyError = false;
    for (const auto& d : r.diagnostics) anyError |= d.severity == Severity::Error;
    if (!anyError) r.model = std::move(m);
    return r;
}

}  // namespace

std::vector<Token> lex(std::string_view text, std::vector<ParseDiagnostic>& diags) {
    Lexer lx{text, diags};
    return lx.run();
}

ParseResult parse(std::string_view text, const ParseOptions& opts) {
    const Lexicon& lexicon = opts.lexicon ? *opts.lexicon : Lexicon::builtin();
    if (opts.lang && !lexicon.has_language(*opts.lang) && *opts.lang != "")
        throw UnknownLanguage(*opts.lang);

    std::vector<ParseDiagnostic> lexDiags;
    std::vector<Token> toks = lex(text, lexDiags);

    if (opts.syntax && *opts.syntax == SyntaxKind::Shorthand)
        return run_parser(toks, SyntaxKind::Shorthand, "", lexicon, lexDiags);
    if (opts.syntax && opts.lang)
        return run_parser(toks, SyntaxKind::Longform, *opts.lang, lexicon, lexDiags);

    SniffResult sr = sniff(toks, lexicon, opts.syntax, opts.lang);
    if (!sr.syntax) {
        ParseResult r;
        r.diagnostics = lexDiags;
        Span at = toks.empty() ? Span{} : toks.front().span;
        r.diagnostics.push_back({Severity::Error, at, "cannot detect notation: " + sr.why});
        return r;
    }
    if (*sr.syntax == SyntaxKind::Shorthand)
        return run_parser(toks, SyntaxKind::Shorthand, "", lexicon, lexDiags);

    std::vector<ParseResult> results;
    for (const auto& lang : sr.langs)
        results.push_back(run_parser(toks, SyntaxKind::Longform, lang, lexicon, lexDiags));
    if (results.size() == 1) return results.front();

    const ParseResult* firstOk = nullptr;
    bool allEqual = true;
    for (const auto& r : results) {
        if (!r.ok()) continue;
        if (!firstOk)
            firstOk = &r;
        else if (!(*firstOk->model == *r.model))
            allEqual = false;
    }
    if (!firstOk) return results.front();
    if (allEqual) return *firstOk;

    ParseResult r;
    r.diagnostics = lexDiags;
    std::string langs;
    for (const auto& cand : sr.langs) langs += (langs.empty() ? "" : ", ") + cand;
    Span at = toks.empty() ? Span{} : toks.front().span;
    r.diagnostics.push_back({Severity::Error, at,
                             "ambiguous language: the text parses differently in: " + langs +
                                 " (pass an explicit language)"});
    return r;
}

Detection detect_syntax(std::string_view text, const Lexicon& lexicon) {
    std::vector<ParseDiagnostic> sink;
    std::vector<Token> toks = lex(text, sink);
    SniffResult sr = sniff(toks, lexicon, std::nullopt, std::nullopt);
    if (!sr.syntax) throw Undetectable(sr.why);
    Detection d;
    d.syntax = *sr.syntax;
    d.lang = sr.langs.empty() ? "" : sr.langs.front();
    return d;
}

// --- serialization ---

namespace {

std::string quote_text(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out + "\"";
}

bool serializes_bare(const std::string& s) {
    if (!is_bare_text(s)) return false;
    if (s.find(' ') != std::string::npos) return true;  // spaces exclude item/number readings
    try {
        return std::holds_alternative<LocalVar>(classify_identifier(s));
    } catch (const Error&) {
        return false;
    }
}

struct Writer {
    SyntaxKind syntax;
    const std::string& lang;
    const Lexicon& lexicon;

    std::string kw(int csm) const {
        return syntax == SyntaxKind::Longform ? lexicon.keyword(CsmId{csm}, lang)
                                              : Lexicon::shorthand_keyword(CsmId{csm});
    }

    std::string role(const RoleDecl& r) const {
        std::string out = r.var.name;
        if (r.name) out += "[" + to_string(*r.name) + "]";
        out += ":";
        if (syntax == SyntaxKind::Longform)
            out += kw(r.kind == RoleKind::Object ? 1 : 2) + "(" + to_string(r.filler) + ")";
        else
            out += to_string(r.filler);
        if (r.constraint) out += "{" + serialize_constraint(*r.constraint) + "}";
        return out;
    }

    std::string predicate(const PredicateDecl& p) const {
        std::string inner =
            to_string(p.pitem) + "(" + p.var1.name + "," + p.var2.name + ")";
        if (syntax == SyntaxKind::Longform) return kw(3) + "(" + inner + ")";
        return inner;
    }

    std::string function(const FunctionDecl& f) const {
        std::string args;
        for (std::size_t i = 0; i < f.args.size(); ++i)
            args += (i ? "," : "") + to_string(f.args[i]);
        std::string vc = f.constraint ? "{" + serialize_constraint(*f.constraint) + "}" : "";
        if (syntax == SyntaxKind::Longform)
            return kw(5) + "(" + to_string(f.zitem) + "(" + args + "))" + vc;
        if (f.args.size() == 1 && !f.constraint)
            return to_string(f.args[0]) + "." + to_string(f.zitem);
        return to_string(f.zitem) + "(" + args + ")" + vc;
    }

    std::string join(const JoinDecl& j) const {
        std::string k = syntax == SyntaxKind::Longform ? kw(11) : "Join";
        return k + "(" + to_string(j.left) + "," + to_string(j.right) + ")";
    }

    std::string mandatory(const LocalVar& v) const {
        std::string k = syntax == SyntaxKind::Longform ? kw(12) : "IsMand";
        return k + "(" + v.name + ")";
    }

    std::string instantiation(const Instantiation& inst) const {
        std::string lhs = syntax == SyntaxKind::Longform
                              ? kw(2) + "(" + to_string(inst.typeItem) + ")"
                              : to_string(inst.typeItem);
        return lhs + "={" + to_string(inst.instanceItem) + "}";
    }

    std::string constructor(const Constructor& c) const {
        std::string head = kw(c.kind == ConstructorKind::Instance ? 6 : 7);
        std::vector<std::string> lines;
        for (const auto& b : c.blocks) {
            lines.push_back(predicate(b.predicate));
            lines.push_back(role(b.role1));
            lines.push_back(role(b.role2));
            for (const auto& f : b.functions) lines.push_back(function(f));
            for (const auto& j : b.joins) lines.push_back(join(j));
            for (const auto& m : b.mandatories) lines.push_back(mandatory(m));
        }
        for (const auto& b : c.blocks)
            for (const auto& inst : b.instantiations) lines.push_back(instantiation(inst));
        std::string out = head + ":" + c.name.name + "(";
        for (std::size_t i = 0; i < lines.size(); ++i) {
            out += "\n   " + lines[i];
            if (i + 1 < lines.size()) out += ",";
        }
        out += ")";
        return out;
    }

    std::string link(const Link& l) const {
        int csm = l.kind == LinkKind::SubConstructorOf ? 8
                  : l.kind == LinkKind::InstanceOf     ? 9
                                                       : 10;
        std::string k = syntax == SyntaxKind::Longform ? kw(csm) : Lexicon::shorthand_keyword(CsmId{csm});
        return k + "(" + l.from.name + ", " + l.to.name + ")";
    }
};

}  // namespace

std::string serialize_value_item(const ValueItem& item) {
    struct V {
        std::string operator()(const TextValue& t) const {
            return serializes_bare(t.text) ? t.text : quote_text(t.text);
        }
        std::string operator()(const ItemValue& v) const { return to_string(v.item); }
        std::string operator()(const NumberValue& n) const { return format_number(n.value); }
        std::string operator()(const RangeValue& r) const {
            return format_number(r.lo) + ".." + format_number(r.hi);
        }
        std::string operator()(const ComparisonValue& c) const {
            const char* op = c.op == CmpOp::Lt   ? "<"
                             : c.op == CmpOp::Le ? "<="
                             : c.op == CmpOp::Gt ? ">"
                                                 : ">=";
            return op + format_number(c.bound);
        }
    };
    return std::visit(V{}, item);
}

std::string serialize_constraint(const ValueConstraint& vc) {
    std::string out;
    for (std::size_t i = 0; i < vc.items.size(); ++i)
        out += (i ? ", " : "") + serialize_value_item(vc.items[i]);
    return out;
}

std::string serialize(const Model& model, SyntaxKind syntax, const std::string& lang,
                      const Lexicon& lexicon) {
    if (syntax == SyntaxKind::Longform && !lexicon.has_language(lang))
        throw UnknownLanguage(lang);
    Writer w{syntax, lang, lexicon};
    std::string out;
    bool first = true;
    for (const auto& d : model.declarations) {
        if (!first) out += "\n\n";
        first = false;
        if (const auto* c = std::get_if<Constructor>(&d))
            out += w.constructor(*c);
        else
            out += w.link(std::get<Link>(d));
    }
    out += "\n";
    return out;
}

ParseFailed::ParseFailed(std::vector<ParseDiagnostic> diags)
    : Error([&] {
          std::string msg = "parse failed";
          for (const auto& d : diags)
              if (d.severity == Severity::Error) {
                  msg += ": " + to_string(d);
                  break;
              }
          return msg;
      }()),
      diagnostics(std::move(diags)) {}

std::string convert(std::string_view text, SyntaxKind to, const std::string& lang,
                    const Lexicon& lexicon) {
    ParseOptions opts;
    opts.lexicon = &lexicon;
    ParseResult r = parse(text, opts);
    if (!r.ok()) throw ParseFailed(std::move(r.diagnostics));
    return serialize(*r.model, to, lang, lexicon);
}

std::string to_string(const ParseDiagnostic& d) {
    std::string sev = d.severity == Severity::Error ? "error" : "warning";
    return std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": " + sev + ": " +
           d.message;
}

}  // namespace cosmo
