#ifndef COSMO_FOL_HPP
#define COSMO_FOL_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cosmo/core.hpp"

namespace cosmo {

/// First-order term: constant, variable, or function application.
struct Term {
    enum class Kind { Constant, Variable, Function };
    Kind kind = Kind::Constant;
    std::string name;
    std::vector<Term> args;  // Function only

    static Term constant(std::string n) { return {Kind::Constant, std::move(n), {}}; }
    static Term variable(std::string n) { return {Kind::Variable, std::move(n), {}}; }
    static Term function(std::string n, std::vector<Term> a) {
        return {Kind::Function, std::move(n), std::move(a)};
    }
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable formula node. Binary nodes use lhs/rhs; Not and the
/// quantifiers use lhs as their only child.
struct Formula {
    enum class Kind { Atom, Not, And, Or, Implies, Iff, ForAll, Exists };
    Kind kind = Kind::Atom;
    std::string pred;          // Atom
    std::vector<Term> terms;   // Atom
    std::vector<std::string> vars;  // ForAll / Exists
    FormulaPtr lhs, rhs;
};

FormulaPtr f_atom(std::string pred, std::vector<Term> terms);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr f_forall(std::vector<std::string> vars, FormulaPtr body);
FormulaPtr f_exists(std::vector<std::string> vars, FormulaPtr body);
/// Left-assoc conjunction of one or more formulas.
FormulaPtr f_and_all(std::vector<FormulaPtr> fs);

enum class RenderStyle { Ascii, Unicode };

std::string render_formula(const Formula& f, RenderStyle style = RenderStyle::Ascii);
std::string render_formula(const FormulaPtr& f, RenderStyle style = RenderStyle::Ascii);

/// One translated sentence plus where it came from.
struct TheoryLine {
    FormulaPtr formula;
    std::optional<std::size_t> declIndex;
    std::string label;
};

struct TheoryFragment {
    std::vector<TheoryLine> lines;
};

/// Translates a model into its first-order theory. Works on any
/// structurally well-formed model; validation is a separate concern.
TheoryFragment translate(const Model& model);

/// Labeled, blank-line-separated rendering of a whole fragment.
std::string render_theory(const TheoryFragment& theory, RenderStyle style = RenderStyle::Ascii,
                          bool withLabels = true);

/// Constant spelling for an item in formulas (q42); the matching unary or
/// binary predicate keeps the item spelling itself (Q42).
std::string fol_constant(const ItemId& id);

}  // namespace cosmo

#endif
