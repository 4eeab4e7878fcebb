#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cosmo/fol.hpp"
#include "cosmo/syntax.hpp"
#include "doctest.h"

using namespace cosmo;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Model parse_ok(const std::string& text) {
    ParseResult r = parse(text);
    REQUIRE(r.ok());
    return *r.model;
}

FormulaPtr atom(const char* name) { return f_atom(name, {}); }

std::string ascii(const FormulaPtr& f) { return render_formula(f, RenderStyle::Ascii); }

}  // namespace

TEST_SUITE("fol") {

TEST_CASE("golden theories render byte for byte") {
    const char* names[] = {
        "objecttype",     "property",      "role",
        "function",       "instantiation", "subconstructorof",
        "instanceof",     "partof",        "typeconstructor",
        "instanceconstructor", "join_q",   "join_p",
    };
    for (const char* name : names) {
        CAPTURE(name);
        std::string base = std::string(COSMO_GOLDEN_DIR) + "/fol/" + name;
        Model m = parse_ok(slurp(base + ".cosmo"));
        std::string rendered = render_theory(translate(m), RenderStyle::Ascii, true);
        CHECK(rendered == slurp(base + ".fol"));
    }
}

TEST_CASE("ascii rendering follows connective precedence") {
    auto A = atom("A"), B = atom("B"), C = atom("C"), D = atom("D");

    // same-kind chains stay flat, mixed kinds wrap
    CHECK(ascii(f_and_all({A, B, C})) == "A() & B() & C()");
    CHECK(ascii(f_and(f_or(A, B), C)) == "(A() | B()) & C()");
    CHECK(ascii(f_or(A, f_and(B, C))) == "A() | (B() & C())");

    // implication is right-associative and binds looser than & and |
    CHECK(ascii(f_implies(A, f_implies(B, C))) == "A() -> B() -> C()");
    CHECK(ascii(f_implies(f_implies(A, B), C)) == "(A() -> B()) -> C()");
    CHECK(ascii(f_implies(f_and(A, B), C)) == "(A() & B()) -> C()");
    CHECK(ascii(f_implies(A, f_and(B, C))) == "A() -> B() & C()");
    CHECK(ascii(f_implies(A, f_iff(B, C))) == "A() -> (B() <-> C())");

    // iff isolates both operands
    CHECK(ascii(f_iff(f_and(A, B), f_or(C, D))) == "(A() & B()) <-> (C() | D())");

    // negation wraps binary children only
    CHECK(ascii(f_not(A)) == "!A()");
    CHECK(ascii(f_not(f_and(A, B))) == "!(A() & B())");
    CHECK(ascii(f_not(f_not(A))) == "!!A()");
}

TEST_CASE("quantifiers and terms render in both styles") {
    FormulaPtr f = f_forall({"x", "y"}, f_atom("A", {Term::variable("x")}));
    CHECK(render_formula(f, RenderStyle::Ascii) == "forall x, y (A(x))");
    CHECK(render_formula(f, RenderStyle::Unicode) == "∀x,y (A(x))");

    FormulaPtr g = f_exists(
        {"o"}, f_atom("Has", {Term::constant("z12345"), Term::function("Z12345", {Term::variable("o")})}));
    CHECK(render_formula(g, RenderStyle::Ascii) == "exists o (Has(z12345, Z12345(o)))");
    CHECK(render_formula(g, RenderStyle::Unicode) == "∃o (Has(z12345, Z12345(o)))");

    auto A = atom("A"), B = atom("B");
    CHECK(render_formula(f_and(A, B), RenderStyle::Unicode) == "A() ∧ B()");
    CHECK(render_formula(f_or(A, B), RenderStyle::Unicode) == "A() ∨ B()");
    CHECK(render_formula(f_implies(A, B), RenderStyle::Unicode) == "A() → B()");
    CHECK(render_formula(f_iff(A, B), RenderStyle::Unicode) == "A() ↔ B()");
    CHECK(render_formula(f_not(A), RenderStyle::Unicode) == "¬A()");
}

TEST_CASE("a one-block type constructor translates to six labeled sentences") {
    TheoryFragment th = translate(parse_ok("TC:C1(P40(r1, r2), r1:Q5, r2:Q7)\n"));
    REQUIRE(th.lines.size() == 6);

    CHECK(th.lines[0].label == "C1");
    CHECK(render_formula(th.lines[0].formula) ==
          "forall x (C1(x) -> exists y1, y2 (Contains(x, p40, y1, y2) & r1(y1) & r2(y2)))");

    CHECK(th.lines[1].label == "C1 object type Q5");
    CHECK(render_formula(th.lines[1].formula) == "QItem(q5)");
    CHECK(th.lines[2].label == "C1 object type Q7");

    CHECK(th.lines[3].label == "C1 block 1 predicate P40");
    CHECK(render_formula(th.lines[3].formula) ==
          "PItem(p40) & forall x, y (P40(x, y) -> r1(x) & r2(y))");

    CHECK(th.lines[4].label == "C1 block 1 role r1");
    CHECK(render_formula(th.lines[4].formula) == "forall x (r1(x) -> Q5(x))");
    CHECK(th.lines[5].label == "C1 block 1 role r2");
    CHECK(render_formula(th.lines[5].formula) == "forall x (r2(x) -> Q7(x))");

    for (const TheoryLine& line : th.lines) CHECK(line.declIndex == 0);
}

TEST_CASE("instantiations add membership facts in both places") {
    TheoryFragment th = translate(parse_ok("IC:C2(P40(r1, r2), r1:Q5, r2:Q7, Q5={Q42})\n"));
    // block sentence, two object types, predicate, two roles, instantiation
    REQUIRE(th.lines.size() == 7);
    CHECK(render_formula(th.lines[0].formula) ==
          "forall x (C2(x) -> exists y1, y2 (Contains(x, p40, y1, y2) & r1(y1) & r2(y2) & "
          "QItem(q5) & QItem(q42) & Q5(q42)))");
    CHECK(th.lines[6].label == "C2 block 1 instantiation Q5=Q42");
    CHECK(render_formula(th.lines[6].formula) == "QItem(q5) & QItem(q42) & Q5(q42)");
}

TEST_CASE("links translate to implications and mereology axioms appear once") {
    const char* text =
        "TC:C1(P40(r1, r2), r1:Q5, r2:Q7)\n"
        "\n"
        "TC:C2(P40(r1, r2), r1:Q5, r2:Q7)\n"
        "\n"
        "TC:C3(P40(r1, r2), r1:Q5, r2:Q7)\n"
        "\n"
        "SubTC(C2, C1)\n"
        "\n"
        "Po(C2, C1)\n"
        "\n"
        "Po(C3, C1)\n";
    TheoryFragment th = translate(parse_ok(text));

    std::vector<std::string> labels;
    for (const TheoryLine& line : th.lines) labels.push_back(line.label);

    auto find = [&](const std::string& label) -> const TheoryLine* {
        for (const TheoryLine& line : th.lines)
            if (line.label == label) return &line;
        return nullptr;
    };

    const TheoryLine* sub = find("SubConstructorOf(C2, C1)");
    REQUIRE(sub);
    CHECK(render_formula(sub->formula) == "forall x (C2(x) -> C1(x))");
    CHECK(sub->declIndex == 3);

    const TheoryLine* po = find("PartOf(C2, C1)");
    REQUIRE(po);
    CHECK(render_formula(po->formula) ==
          "forall x (C2(x) -> exists y (C1(y) & PPartOf(x, y)))");

    // exactly one copy of each mereology axiom, attributed to the first Po
    for (const char* axiom :
         {"mereology transitivity", "mereology irreflexivity", "mereology asymmetry"}) {
        CHECK(std::count(labels.begin(), labels.end(), axiom) == 1);
        CHECK(find(axiom)->declIndex == 4);
    }
    CHECK(render_formula(find("mereology asymmetry")->formula) ==
          "forall x, y (PPartOf(x, y) -> !PPartOf(y, x))");
}

TEST_CASE("mereology axioms are absent without part-of links") {
    TheoryFragment th = translate(parse_ok("TC:C1(P40(r1, r2), r1:Q5, r2:Q7)\n"));
    for (const TheoryLine& line : th.lines)
        CHECK(line.label.find("mereology") == std::string::npos);
}

TEST_CASE("theory rendering separates entries with blank lines") {
    TheoryFragment th;
    th.lines.push_back({atom("A"), 0, "first"});
    th.lines.push_back({atom("B"), 1, "second"});
    CHECK(render_theory(th) == "# first\nA()\n\n# second\nB()\n");
    CHECK(render_theory(th, RenderStyle::Ascii, false) == "A()\n\nB()\n");
    CHECK(render_theory(TheoryFragment{}).empty());
}

TEST_CASE("item constants are lowercased item spellings") {
    CHECK(fol_constant(ItemId{ItemKind::Q, 42}) == "q42");
    CHECK(fol_constant(ItemId{ItemKind::P, 31}) == "p31");
    CHECK(fol_constant(ItemId{ItemKind::Z, 12345}) == "z12345");
}

}  // TEST_SUITE
