#include "doctest.h"

#include <string>
#include <vector>

#include "cosmo/syntax.hpp"
#include "fixtures.hpp"

using namespace cosmo;

namespace {

/// Token spellings with whitespace and comments stripped.
std::vector<std::string> tokens_of(const std::string& text) {
    std::vector<ParseDiagnostic> sink;
    std::vector<std::string> out;
    for (const Token& t : lex(text, sink))
        if (t.kind != Token::Kind::End) out.push_back(t.text);
    return out;
}

ParseResult parse_ok(const char* text, ParseOptions opts = {}) {
    ParseResult r = parse(text, opts);
    for (const auto& d : r.diagnostics) CAPTURE(to_string(d));
    REQUIRE(r.ok());
    return r;
}

}  // namespace

TEST_SUITE("syntax") {

TEST_CASE("longform English corpus model parses into the expected structure") {
    ParseResult r = parse_ok(fixtures::kFamilyLongEn);
    CHECK(r.syntax == SyntaxKind::Longform);
    CHECK(r.lang == "en");

    const Model& m = *r.model;
    REQUIRE(m.declarations.size() == 5);
    auto cs = m.constructors();
    REQUIRE(cs.size() == 3);
    CHECK(cs[0]->name.name == "C1");
    CHECK(cs[0]->kind == ConstructorKind::Type);
    CHECK(cs[1]->name.name == "C2");
    CHECK(cs[1]->kind == ConstructorKind::Instance);
    CHECK(cs[2]->name.name == "C3");

    auto ls = m.links();
    REQUIRE(ls.size() == 2);
    CHECK(ls[0]->kind == LinkKind::InstanceOf);
    CHECK(ls[1]->kind == LinkKind::SubConstructorOf);

    REQUIRE(cs[0]->blocks.size() == 1);
    const Block& b = cs[0]->blocks[0];
    CHECK(b.predicate.pitem == ItemId{ItemKind::P, 40});
    CHECK(b.role1.var.name == "r1");
    CHECK(b.role1.kind == RoleKind::ObjectType);
    CHECK(b.role1.filler == ItemId{ItemKind::Q, 7566});
    CHECK(b.role2.filler == ItemId{ItemKind::Q, 29514218});

    REQUIRE(cs[1]->blocks.size() == 1);
    REQUIRE(cs[1]->blocks[0].instantiations.size() == 1);
    CHECK(cs[1]->blocks[0].instantiations[0] ==
          Instantiation{ItemId{ItemKind::Q, 29514218}, ItemId{ItemKind::Q, 62070381}});

    REQUIRE(cs[2]->blocks[0].functions.size() == 1);
    CHECK(cs[2]->blocks[0].functions[0].zitem == ItemId{ItemKind::Z, 12345});
}

TEST_CASE("shorthand and longform read the same model") {
    ParseResult lf = parse_ok(fixtures::kFamilyLongEn);
    ParseResult sh = parse_ok(fixtures::kFamilyShort);
    CHECK(sh.syntax == SyntaxKind::Shorthand);
    CHECK(sh.lang.empty());
    // The shorthand fixture declares the constructors without the links.
    Model noLinks;
    for (const Constructor* c : lf.model->constructors()) noLinks.declarations.emplace_back(*c);
    CHECK(*sh.model == noLinks);

    CHECK(*parse_ok(fixtures::kDouglasShortPair).model == *parse_ok(fixtures::kDouglasLong).model);
    CHECK(*parse_ok(fixtures::kDouglasCsm).model ==
          *parse_ok(fixtures::kDouglasLongWithLink).model);
}

TEST_CASE("corpus fixtures round trip token for token") {
    struct Case {
        const char* text;
        const char* expect;  // null: the fixture itself
    };
    const Case cases[] = {
        {fixtures::kFamilyLongEn, nullptr},
        {fixtures::kFamilyShort, nullptr},
        {fixtures::kNamedRoleShort, nullptr},
        {fixtures::kFamilyLongEs, fixtures::kFamilyLongEsCanonical},
        {fixtures::kFamilyLongEsCanonical, nullptr},
        {fixtures::kDouglasShort, nullptr},
        {fixtures::kDouglasLong, nullptr},
        {fixtures::kDouglasShortPair, nullptr},
        {fixtures::kDouglasCsm, nullptr},
        {fixtures::kDouglasLongWithLink, nullptr},
    };
    for (const Case& c : cases) {
        CAPTURE(c.text);
        ParseResult r = parse_ok(c.text);
        std::string back =
            serialize(*r.model, *r.syntax, r.lang.empty() ? "en" : r.lang);
        CHECK(tokens_of(back) == tokens_of(c.expect ? c.expect : c.text));
    }
}

TEST_CASE("serialization is idempotent") {
    for (const char* text : {fixtures::kFamilyLongEn, fixtures::kDouglasShort,
                             fixtures::kDouglasCsm, fixtures::kNamedRoleShort}) {
        ParseResult r = parse_ok(text);
        for (auto syntax : {SyntaxKind::Longform, SyntaxKind::Shorthand}) {
            std::string lang = syntax == SyntaxKind::Longform ? "en" : "";
            std::string once = serialize(*r.model, syntax, "en");
            ParseOptions opts;
            opts.syntax = syntax;
            if (syntax == SyntaxKind::Longform) opts.lang = "en";
            ParseResult again = parse(once, opts);
            REQUIRE(again.ok());
            CHECK(serialize(*again.model, syntax, "en") == once);
        }
    }
}

TEST_CASE("the variant Spanish spellings parse and serialize canonically") {
    ParseResult r = parse_ok(fixtures::kFamilyLongEs);
    CHECK(r.lang == "es");
    std::string canon = serialize(*r.model, SyntaxKind::Longform, "es");
    CHECK(canon.find("Propiedad") != std::string::npos);
    CHECK(canon.find("Propriedad") == std::string::npos);
    CHECK(canon.find("TipoDeEntitdad") == std::string::npos);
    CHECK(canon.find("Funcion") != std::string::npos);
    CHECK(*r.model == *parse_ok(fixtures::kFamilyLongEn).model);
}

TEST_CASE("relexicalization is loss-free across all built-in languages") {
    const Model m = *parse_ok(fixtures::kFamilyLongEn).model;
    for (const char* lang : {"en", "es", "eu", "csm"}) {
        std::string text = serialize(m, SyntaxKind::Longform, lang);
        ParseOptions opts;
        opts.syntax = SyntaxKind::Longform;
        opts.lang = lang;
        ParseResult r = parse(text, opts);
        REQUIRE(r.ok());
        CHECK(*r.model == m);
    }
    CHECK_THROWS_AS(serialize(m, SyntaxKind::Longform, "fr"), UnknownLanguage);
}

TEST_CASE("notation and language detection") {
    Detection d = detect_syntax(fixtures::kFamilyLongEn);
    CHECK(d.syntax == SyntaxKind::Longform);
    CHECK(d.lang == "en");

    d = detect_syntax(fixtures::kFamilyLongEs);
    CHECK(d.syntax == SyntaxKind::Longform);
    CHECK(d.lang == "es");

    d = detect_syntax(fixtures::kFamilyShort);
    CHECK(d.syntax == SyntaxKind::Shorthand);
    CHECK(d.lang.empty());

    d = detect_syntax(fixtures::kDouglasCsm);
    CHECK(d.syntax == SyntaxKind::Longform);
    CHECK(d.lang == "csm");

    CHECK_THROWS_AS(detect_syntax("frobnicate(C1, C2)"), Undetectable);
    CHECK_THROWS_AS(detect_syntax("   \n// just a comment\n"), Undetectable);
}

TEST_CASE("explicit parse options override detection") {
    // Spanish text parsed with the language forced to English fails with
    // diagnostics instead of silently guessing.
    ParseOptions opts;
    opts.syntax = SyntaxKind::Longform;
    opts.lang = "en";
    ParseResult r = parse(fixtures::kFamilyLongEs, opts);
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.diagnostics.empty());

    ParseOptions unknown;
    unknown.lang = "fr";
    CHECK_THROWS_AS(parse(fixtures::kFamilyLongEn, unknown), UnknownLanguage);
}

TEST_CASE("named roles are optional sugar") {
    ParseResult r = parse_ok(fixtures::kNamedRoleShort);
    const Block& b = r.model->constructors()[0]->blocks[0];
    CHECK_FALSE(b.role1.name.has_value());
    REQUIRE(b.role2.name.has_value());
    CHECK(*b.role2.name == ItemId{ItemKind::Q, 239526});
    std::string back = serialize(*r.model, SyntaxKind::Shorthand);
    CHECK(back.find("r2[Q239526]:Q29514218") != std::string::npos);
}

TEST_CASE("value constraints parse all five alternative forms") {
    ParseResult r = parse_ok(
        "TC:C1(\n"
        "   P40(r1,r2),\n"
        "   r1:Q7566{\"north region\", Q42, 12, 3..7, <=95},\n"
        "   r2:Q29514218)\n");
    const Block& b = r.model->constructors()[0]->blocks[0];
    REQUIRE(b.role1.constraint.has_value());
    const auto& items = b.role1.constraint->items;
    REQUIRE(items.size() == 5);
    CHECK(items[0] == ValueItem{TextValue{"north region"}});
    CHECK(items[1] == ValueItem{ItemValue{ItemId{ItemKind::Q, 42}}});
    CHECK(items[2] == ValueItem{NumberValue{12}});
    CHECK(items[3] == ValueItem{RangeValue{3, 7}});
    CHECK(items[4] == ValueItem{ComparisonValue{CmpOp::Le, 95}});

    // Round trip through both notations.
    for (auto syntax : {SyntaxKind::Shorthand, SyntaxKind::Longform}) {
        std::string text = serialize(*r.model, syntax, "en");
        ParseOptions opts;
        opts.syntax = syntax;
        if (syntax == SyntaxKind::Longform) opts.lang = "en";
        ParseResult again = parse(text, opts);
        REQUIRE(again.ok());
        CHECK(*again.model == *r.model);
    }
}

TEST_CASE("constraint text that needs no quotes serializes bare") {
    CHECK(serialize_value_item(TextValue{"north region"}) == "north region");
    CHECK(serialize_value_item(TextValue{"a,b"}) == "\"a,b\"");
    CHECK(serialize_value_item(TextValue{"Q42"}) == "\"Q42\"");  // would read as an item
    CHECK(serialize_value_item(NumberValue{0.125}) == "0.125");
    CHECK(serialize_value_item(RangeValue{3, 7}) == "3..7");
    CHECK(serialize_value_item(ComparisonValue{CmpOp::Ge, 18}) == ">=18");
    CHECK(serialize_constraint(ValueConstraint{{NumberValue{1}, NumberValue{2}}}) == "1, 2");
}

TEST_CASE("constraint grammar rejects nonsense with positions") {
    ParseResult r = parse("TC:C1(P40(r1,r2), r1:Q5{7..3}, r2:Q7)");
    CHECK_FALSE(r.ok());
    bool found = false;
    for (const auto& d : r.diagnostics)
        found |= d.message.find("range bounds out of order") != std::string::npos;
    CHECK(found);

    r = parse("TC:C1(P40(r1,r2), r1:Q5{<= nine}, r2:Q7)");
    CHECK_FALSE(r.ok());
}

TEST_CASE("a missing item prefix gets a fix-it hint") {
    ParseResult r = parse(
        " IC:C5(\n"
        "   P106(r1,r2), r1:Q5, r2:Q18844224,\n"
        "   P136(r3,r4), r3:Q18844224, r4:24925,\n"
        "   Q5={Q42})\n");
    CHECK_FALSE(r.ok());
    bool hinted = false;
    for (const auto& d : r.diagnostics) {
        if (d.message.find("did you mean Q24925?") != std::string::npos) {
            hinted = true;
            CHECK(d.span.line == 3);
            CHECK(d.severity == Severity::Error);
        }
    }
    CHECK(hinted);
}

TEST_CASE("parser reports structural mistakes as diagnostics, not exceptions") {
    struct Case {
        const char* text;
        const char* want;
    };
    const Case cases[] = {
        {"TC:C1(P40(r1,r1), r1:Q5, r1:Q7)", "predicate variables must be distinct"},
        {"TC:C1(P40(r1,r2), r3:Q5, r2:Q7)", "do not match the predicate variables"},
        {"TC:C1(P40(r1,r2), r1:Q5)", "exactly two roles"},
        {"TC:C1(P40(r1,r2), r1:Q5, r2:Q7) TC:C1(P40(r1,r2), r1:Q5, r2:Q7)",
         "duplicate constructor name"},
        {"IC:C2(P40(r1,r2), r1:Q5, r2:Q7)", "needs at least one instantiation"},
        {"TC:C1(r1:Q5)", "a predicate must come before"},
        {"SubTC(C1, C1)", "link endpoints must differ"},
        {"TC:C1(P40(r1,r2), r1:Q5, r2:Q7", "unclosed constructor body"},
    };
    for (const Case& c : cases) {
        CAPTURE(c.text);
        ParseResult r = parse(c.text);
        CHECK_FALSE(r.ok());
        bool found = false;
        for (const auto& d : r.diagnostics) found |= d.message.find(c.want) != std::string::npos;
        CHECK(found);
    }
}

TEST_CASE("parse errors do not cascade past the next declaration") {
    ParseResult r = parse(
        "TC:C1(P40(r1,r2), r1:Q5, r2:P31)\n\n"
        "TC:C2(P40(r1,r2), r1:Q5, r2:Q7)\n");
    CHECK_FALSE(r.ok());  // C1's second role filler is a P item
    // Yet the diagnostics stay local to the broken declaration on line 1.
    CHECK_FALSE(r.diagnostics.empty());
    for (const auto& d : r.diagnostics) {
        CAPTURE(to_string(d));
        CHECK(d.span.line == 1);
    }
}

TEST_CASE("instantiations re-home onto the first block declaring their type") {
    // Written after the second block, Q5={Q42} belongs to the first.
    ParseResult r = parse_ok(
        "IC:C5(\n"
        "   P106(r1,r2), r1:Q5, r2:Q18844224,\n"
        "   P136(r3,r4), r3:Q18844224, r4:Q24925,\n"
        "   Q5={Q42})\n");
    const Constructor& c = *r.model->constructors()[0];
    REQUIRE(c.blocks.size() == 2);
    REQUIRE(c.blocks[0].instantiations.size() == 1);
    CHECK(c.blocks[1].instantiations.empty());

    // A duplicate spills over to the next block that also declares the type.
    ParseResult dup = parse_ok(
        "IC:C6(\n"
        "   P106(r1,r2), r1:Q5, r2:Q18844224,\n"
        "   P136(r3,r4), r3:Q5, r4:Q24925,\n"
        "   Q5={Q42}, Q5={Q42})\n");
    const Constructor& c6 = *dup.model->constructors()[0];
    CHECK(c6.blocks[0].instantiations.size() == 1);
    CHECK(c6.blocks[1].instantiations.size() == 1);
}

TEST_CASE("dot form and call form of functions are interchangeable") {
    ParseResult dot = parse_ok("TC:C1(P86(r1,r4), r1:Q2188189, r4:Q36834, Q36834.Z12345)");
    ParseResult call = parse_ok("TC:C1(P86(r1,r4), r1:Q2188189, r4:Q36834, Z12345(Q36834))");
    CHECK(*dot.model == *call.model);
    // Single-argument functions without a constraint prefer the dot form.
    std::string back = serialize(*dot.model, SyntaxKind::Shorthand);
    CHECK(back.find("Q36834.Z12345") != std::string::npos);
}

TEST_CASE("convert parses in one notation and emits another") {
    std::string shorter = convert(fixtures::kFamilyLongEn, SyntaxKind::Shorthand);
    CHECK(shorter.find("TC:C1(") != std::string::npos);
    CHECK(shorter.find("TypeConstructor") == std::string::npos);

    std::string es = convert(fixtures::kFamilyShort, SyntaxKind::Longform, "es");
    CHECK(es.find("ConstructorDeTipo:C1(") != std::string::npos);

    CHECK_THROWS_AS(convert("TC:C1(", SyntaxKind::Longform), ParseFailed);
    try {
        convert("TC:C1(", SyntaxKind::Longform);
    } catch (const ParseFailed& e) {
        CHECK_FALSE(e.diagnostics.empty());
    }
}

TEST_CASE("lexer produces positioned tokens and strips comments") {
    std::vector<ParseDiagnostic> diags;
    auto toks = lex("TC:C1 // trailing comment\n{3..7}", diags);
    REQUIRE(diags.empty());
    REQUIRE(toks.size() == 5);  // TC : C1 {3..7} <end>
    CHECK(toks[0].kind == Token::Kind::Word);
    CHECK(toks[0].text == "TC");
    CHECK(toks[0].span.line == 1);
    CHECK(toks[0].span.column == 1);
    CHECK(toks[1].kind == Token::Kind::Punct);
    CHECK(toks[2].kind == Token::Kind::Word);
    CHECK(toks[2].text == "C1");
    CHECK(toks[3].kind == Token::Kind::Text);
    CHECK(toks[3].text == "3..7");
    CHECK(toks[3].span.line == 2);
    CHECK(toks[4].kind == Token::Kind::End);

    auto items = lex("Q42 P31 CSM007 12.5", diags);
    REQUIRE(items.size() == 5);
    CHECK(items[0].kind == Token::Kind::Item);
    CHECK(items[0].item == ItemId{ItemKind::Q, 42});
    CHECK(items[2].kind == Token::Kind::Csm);
    CHECK(items[2].csm == CsmId{7});
    CHECK(items[3].kind == Token::Kind::Number);
    CHECK(items[3].number == 12.5);
}

TEST_CASE("lexing problems are diagnostics with a best-effort stream") {
    std::vector<ParseDiagnostic> diags;
    auto toks = lex("TC:C1(P40(r1,r2), r1:Q5, r2:{unclosed", diags);
    CHECK_FALSE(diags.empty());
    CHECK(toks.back().kind == Token::Kind::End);
}

}  // TEST_SUITE
