#include "cosmo/fol.hpp"

#include <algorithm>
#include <cctype>

namespace cosmo {

FormulaPtr f_atom(std::string pred, std::vector<Term> terms) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Atom;
    f->pred = std::move(pred);
    f->terms = std::move(terms);
    return f;
}

namespace {
FormulaPtr binary(Formula::Kind kind, FormulaPtr a, FormulaPtr b) {
    auto f = std::make_shared<Formula>();
    f->kind = kind;
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
}
FormulaPtr quantifier(Formula::Kind kind, std::vector<std::string> vars, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = kind;
    f->vars = std::move(vars);
    f->lhs = std::move(body);
    return f;
}
}  // namespace

FormulaPtr f_not(FormulaPtr f) {
    auto n = std::make_shared<Formula>();
    n->kind = Formula::Kind::Not;
    n->lhs = std::move(f);
    return n;
}
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::And, a, b); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Or, a, b); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Implies, a, b); }
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Iff, a, b); }
FormulaPtr f_forall(std::vector<std::string> vars, FormulaPtr body) {
    return quantifier(Formula::Kind::ForAll, std::move(vars), std::move(body));
}
FormulaPtr f_exists(std::vector<std::string> vars, FormulaPtr body) {
    return quantifier(Formula::Kind::Exists, std::move(vars), std::move(body));
}
FormulaPtr f_and_all(std::vector<FormulaPtr> fs) {
    FormulaPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = f_and(acc, fs[i]);
    return acc;
}

std::string fol_constant(const ItemId& id) {
    std::string s = to_string(id);
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

// --- rendering ---

namespace {

struct Symbols {
    const char* forall;
    const char* exists;
    const char* conj;
    const char* disj;
    const char* implies;
    const char* iff;
    const char* neg;
    const char* quantVarSep;
    bool spaceAfterQuantifier;
};

const Symbols kAscii{"forall", "exists", "&", "|", "->", "<->", "!", ", ", true};
const Symbols kUnicode{"∀", "∃", "∧", "∨", "→", "↔", "¬", ",",
                       false};

std::string render_term(const Term& t) {
    if (t.kind != Term::Kind::Function) return t.name;
    std::string out = t.name + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) out += (i ? ", " : "") + render_term(t.args[i]);
    return out + ")";
}

bool is_binary(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::And:
        case Formula::Kind::Or:
        case Formula::Kind::Implies:
        case Formula::Kind::Iff: return true;
        default: return false;
    }
}

std::string render(const Formula& f, const Symbols& sym);

// A child of a binary connective is wrapped when it is itself a binary
// formula of a different kind; same-kind chains of & and | stay flat and
// -> associates to the right. Iff always wraps binary operands.
std::string render_child(const Formula& child, const Formula& parent, const Symbols& sym,
                         bool rightOfImplies) {
    std::string s = render(child, sym);
    if (!is_binary(child)) return s;
    bool wrap = true;
    switch (parent.kind) {
        case Formula::Kind::And:
        case Formula::Kind::Or: wrap = child.kind != parent.kind; break;
        case Formula::Kind::Implies:
            // right-associative; & and | bind tighter than ->
            wrap = rightOfImplies ? child.kind == Formula::Kind::Iff : true;
            break;
        default: break;  // Iff wraps every binary operand
    }
    return wrap ? "(" + s + ")" : s;
}

std::string render(const Formula& f, const Symbols& sym) {
    switch (f.kind) {
        case Formula::Kind::Atom: {
            std::string out = f.pred + "(";
            for (std::size_t i = 0; i < f.terms.size(); ++i)
                out += (i ? ", " : "") + render_term(f.terms[i]);
            return out + ")";
        }
        case Formula::Kind::Not: {
            std::string inner = render(*f.lhs, sym);
            if (is_binary(*f.lhs)) inner = "(" + inner + ")";
            return sym.neg + inner;
        }
        case Formula::Kind::ForAll:
        case Formula::Kind::Exists: {
            std::string head = f.kind == Formula::Kind::ForAll ? sym.forall : sym.exists;
            if (sym.spaceAfterQuantifier) head += " ";
            for (std::size_t i = 0; i < f.vars.size(); ++i)
                head += (i ? sym.quantVarSep : "") + f.vars[i];
            return head + " (" + render(*f.lhs, sym) + ")";
        }
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            const char* op = f.kind == Formula::Kind::And ? sym.conj : sym.disj;
            return render_child(*f.lhs, f, sym, false) + " " + op + " " +
                   render_child(*f.rhs, f, sym, false);
        }
        case Formula::Kind::Implies:
            return render_child(*f.lhs, f, sym, false) + " " + sym.implies + " " +
                   render_child(*f.rhs, f, sym, true);
        case Formula::Kind::Iff:
            return render_child(*f.lhs, f, sym, false) + " " + sym.iff + " " +
                   render_child(*f.rhs, f, sym, false);
    }
    return "";
}

}  // namespace

std::string render_formula(const Formula& f, RenderStyle style) {
    return render(f, style == RenderStyle::Ascii ? kAscii : kUnicode);
}
std::string render_formula(const FormulaPtr& f, RenderStyle style) {
    return render_formula(*f, style);
}

// --- translation ---

namespace {

std::string join_pred_name(const JoinDecl& j) {
    return "Join_" + to_string(j.left) + "_" + to_string(j.right);
}

void translate_constructor(const Constructor& c, std::size_t declIndex, TheoryFragment& out) {
    const std::string& cname = c.name.name;

    // one sentence tying the constructor predicate to all its reified blocks
    std::vector<FormulaPtr> blockParts;
    for (std::size_t bi = 0; bi < c.blocks.size(); ++bi) {
        const Block& b = c.blocks[bi];
        std::string y1 = "y" + std::to_string(2 * bi + 1);
        std::string y2 = "y" + std::to_string(2 * bi + 2);
        std::vector<FormulaPtr> conj;
        conj.push_back(f_atom("Contains",
                              {Term::variable("x"), Term::constant(fol_constant(b.predicate.pitem)),
                               Term::variable(y1), Term::variable(y2)}));
        conj.push_back(f_atom(b.role1.var.name, {Term::variable(y1)}));
        conj.push_back(f_atom(b.role2.var.name, {Term::variable(y2)}));
        if (c.kind == ConstructorKind::Instance) {
            for (const auto& inst : b.instantiations) {
                conj.push_back(f_atom("QItem", {Term::constant(fol_constant(inst.typeItem))}));
                conj.push_back(f_atom("QItem", {Term::constant(fol_constant(inst.instanceItem))}));
                conj.push_back(f_atom(to_string(inst.typeItem),
                                      {Term::constant(fol_constant(inst.instanceItem))}));
            }
        }
        blockParts.push_back(f_exists({y1, y2}, f_and_all(std::move(conj))));
    }
    if (!blockParts.empty()) {
        FormulaPtr body = f_and_all(std::move(blockParts));
        out.lines.push_back({f_forall({"x"}, f_implies(f_atom(cname, {Term::variable("x")}), body)),
                             declIndex, cname});
    }

    // every object type mentioned as a role filler is a Q item
    std::vector<ItemId> seenFillers;
    for (const Block& b : c.blocks)
        for (const RoleDecl* r : {&b.role1, &b.role2}) {
            if (std::find(seenFillers.begin(), seenFillers.end(), r->filler) != seenFillers.end())
                continue;
            seenFillers.push_back(r->filler);
            out.lines.push_back({f_atom("QItem", {Term::constant(fol_constant(r->filler))}),
                                 declIndex, cname + " object type " + to_string(r->filler)});
        }

    for (std::size_t bi = 0; bi < c.blocks.size(); ++bi) {
        const Block& b = c.blocks[bi];
        std::string where = cname + " block " + std::to_string(bi + 1);

        out.lines.push_back(
            {f_and(f_atom("PItem", {Term::constant(fol_constant(b.predicate.pitem))}),
                   f_forall({"x", "y"},
                            f_implies(f_atom(to_string(b.predicate.pitem),
                                             {Term::variable("x"), Term::variable("y")}),
                                      f_and(f_atom(b.role1.var.name, {Term::variable("x")}),
                                            f_atom(b.role2.var.name, {Term::variable("y")}))))),
             declIndex, where + " predicate " + to_string(b.predicate.pitem)});

        for (const RoleDecl* r : {&b.role1, &b.role2})
            out.lines.push_back(
                {f_forall({"x"}, f_implies(f_atom(r->var.name, {Term::variable("x")}),
                                           f_atom(to_string(r->filler), {Term::variable("x")}))),
                 declIndex, where + " role " + r->var.name});

        int fnIndex = 0;
        for (const auto& fn : b.functions) {
            ++fnIndex;
            std::string o = fnIndex == 1 ? "o" : "o" + std::to_string(fnIndex);
            std::vector<Term> hasArgs{Term::constant(fol_constant(fn.zitem))};
            for (const auto& a : fn.args) hasArgs.push_back(Term::constant(fol_constant(a)));
            hasArgs.push_back(Term::function(to_string(fn.zitem), {Term::variable(o)}));
            out.lines.push_back(
                {f_and(f_atom("ZItem", {Term::constant(fol_constant(fn.zitem))}),
                       f_exists({o}, f_atom("Has", std::move(hasArgs)))),
                 declIndex, where + " function " + to_string(fn.zitem)});
        }

        for (const auto& j : b.joins) {
            FormulaPtr sentence;
            if (j.left.kind == ItemKind::P) {
                auto args = [] { return std::vector<Term>{Term::variable("x"), Term::variable("y")}; };
                sentence = f_forall({"x", "y"},
                                    f_iff(f_atom(join_pred_name(j), args()),
                                          f_or(f_atom(to_string(j.left), args()),
                                               f_atom(to_string(j.right), args()))));
            } else {
                auto arg = [] { return std::vector<Term>{Term::variable("x")}; };
                sentence = f_forall({"x"}, f_iff(f_atom(join_pred_name(j), arg()),
                                                 f_or(f_atom(to_string(j.left), arg()),
                                                      f_atom(to_string(j.right), arg()))));
            }
            out.lines.push_back({sentence, declIndex,
                                 where + " join " + to_string(j.left) + " " + to_string(j.right)});
        }

        for (const auto& inst : b.instantiations)
            out.lines.push_back(
                {f_and_all({f_atom("QItem", {Term::constant(fol_constant(inst.typeItem))}),
                            f_atom("QItem", {Term::constant(fol_constant(inst.instanceItem))}),
                            f_atom(to_string(inst.typeItem),
                                   {Term::constant(fol_constant(inst.instanceItem))})}),
                 declIndex, where + " instantiation " + to_string(inst.typeItem) + "=" +
                                to_string(inst.instanceItem)});
    }
}

void translate_link(const Link& l, std::size_t declIndex, TheoryFragment& out) {
    auto x = [] { return std::vector<Term>{Term::variable("x")}; };
    switch (l.kind) {
        case LinkKind::SubConstructorOf:
            out.lines.push_back({f_forall({"x"}, f_implies(f_atom(l.from.name, x()),
                                                           f_atom(l.to.name, x()))),
                                 declIndex, "SubConstructorOf(" + l.from.name + ", " + l.to.name + ")"});
            break;
        case LinkKind::InstanceOf:
            out.lines.push_back({f_forall({"x"}, f_implies(f_atom(l.from.name, x()),
                                                           f_atom(l.to.name, x()))),
                                 declIndex, "InstanceOf(" + l.from.name + ", " + l.to.name + ")"});
            break;
        case LinkKind::PartOf:
            out.lines.push_back(
                {f_forall({"x"},
                          f_implies(f_atom(l.from.name, x()),
                                    f_exists({"y"}, f_and(f_atom(l.to.name, {Term::variable("y")}),
                                                          f_atom("PPartOf",
                                                                 {Term::variable("x"),
                                                                  Term::variable("y")}))))),
                 declIndex, "PartOf(" + l.from.name + ", " + l.to.name + ")"});
            break;
    }
}

}  // namespace

TheoryFragment translate(const Model& model) {
    TheoryFragment out;
    std::optional<std::size_t> firstPartOf;
    for (std::size_t i = 0; i < model.declarations.size(); ++i) {
        if (const auto* c = std::get_if<Constructor>(&model.declarations[i])) {
            translate_constructor(*c, i, out);
        } else {
            const Link& l = std::get<Link>(model.declarations[i]);
            translate_link(l, i, out);
            if (l.kind == LinkKind::PartOf && !firstPartOf) firstPartOf = i;
        }
    }
    if (firstPartOf) {
        auto pp = [](const char* a, const char* b) {
            return f_atom("PPartOf", {Term::variable(a), Term::variable(b)});
        };
        out.lines.push_back({f_forall({"x", "y", "z"},
                                      f_implies(f_and(pp("x", "y"), pp("y", "z")), pp("x", "z"))),
                             *firstPartOf, "mereology transitivity"});
        out.lines.push_back({f_forall({"x"}, f_not(pp("x", "x"))), *firstPartOf,
                             "mereology irreflexivity"});
        out.lines.push_back({f_forall({"x", "y"}, f_implies(pp("x", "y"), f_not(pp("y", "x")))),
                             *firstPartOf, "mereology asymmetry"});
    }
    return out;
}

std::string render_theory(const TheoryFragment& theory, RenderStyle style, bool withLabels) {
    std::string out;
    bool first = true;
    for (const auto& line : theory.lines) {
        if (!first) out += "\n";
        first = false;
        if (withLabels) out += "# " + line.label + "\n";
        out += render_formula(line.formula, style) + "\n";
    }
    return out;
}

}  // namespace cosmo
