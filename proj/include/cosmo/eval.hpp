#ifndef COSMO_EVAL_HPP
#define COSMO_EVAL_HPP

#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cosmo/core.hpp"

namespace cosmo {

/// Object position of a triple: an item, a text literal, or a number.
using GraphValue = std::variant<ItemId, std::string, double>;

std::string render_graph_value(const GraphValue& v);

struct GraphFormatError : Error {
    GraphFormatError(int line, const std::string& what)
        : Error("graph line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

/// The part-of side table must stay a strict partial order.
struct MereologyViolation : Error {
    explicit MereologyViolation(const ItemId& item)
        : Error("part-of cycle through " + to_string(item)) {}
};

/// In-memory triple store with label, numeric-value and proper-parthood
/// side tables. Triples have set semantics.
struct KnowledgeGraph {
    struct Triple {
        ItemId subject;
        ItemId predicate;
        GraphValue object;
        bool operator==(const Triple&) const = default;
        bool operator<(const Triple& o) const {
            if (subject != o.subject) return subject < o.subject;
            if (predicate != o.predicate) return predicate < o.predicate;
            return object < o.object;
        }
    };

    std::set<Triple> triples;
    std::map<std::pair<ItemId, std::string>, std::string> labels;          // (item, lang)
    std::map<ItemId, std::map<ItemId, std::vector<double>>> numericValues;  // item -> property
    std::set<std::pair<ItemId, ItemId>> partof;         // direct proper parthood
    std::set<std::pair<ItemId, ItemId>> partofClosure;  // transitive closure

    std::optional<std::string> label(const ItemId& item, const std::string& lang) const;
    std::vector<ItemId> item_objects(const ItemId& subject, const ItemId& predicate) const;

    /// Recomputes partofClosure; throws MereologyViolation on a cycle.
    void refresh_partof_closure();
};

/// Text format, one fact per line:
///   triple <item> <P-item> (<item> | "text" | number)
///   label <item> <lang> "text"
///   partof <item> <item>
///   value <item> <P-item> <number>
/// '#' starts a comment. Throws GraphFormatError / MereologyViolation.
KnowledgeGraph parse_graph(std::istream& in);
KnowledgeGraph load_graph(const std::string& path);

/// Instance-or-subclass membership over the loaded graph: x itself, punning
/// included; or an instance (P31) of a subclass-path ancestor of q; or a
/// strict subclass (P279+) of q.
bool member_of(const ItemId& x, const ItemId& q, const KnowledgeGraph& g);

struct EvalContext {
    const KnowledgeGraph& graph;
    std::string lang = "en";
};

/// Z-item implementations with declared arities. Builtins: identity/1,
/// label/1, numvalue/1, age/1 (reference year 2023, birth years under
/// P569), concat/any arity. Implementations are partial: a missing label
/// simply yields no output.
class FunctionRegistry {
public:
    using Fn = std::function<std::optional<GraphValue>(const std::vector<GraphValue>&,
                                                       const EvalContext&)>;
    struct Entry {
        std::size_t arity = 1;
        std::string builtin;
        Fn fn;
    };

    /// Throws on an unknown builtin name or an arity the builtin rejects.
    void bind(const ItemId& zitem, const std::string& builtinName, std::size_t arity = 1);
    void bind(const ItemId& zitem, Entry entry);
    const Entry* find(const ItemId& zitem) const;
    static const std::vector<std::string>& builtin_names();

private:
    std::map<ItemId, Entry> entries_;
};

/// Manifest format, one binding per line: `<Z-item> <arity> <builtin-name>`.
/// '#' starts a comment.
FunctionRegistry load_function_manifest(const std::string& path);

/// "ob(P106,Q42,Q18844224)": injective name for a reified predicate tuple.
std::string reify(const ItemId& p, const ItemId& s, const ItemId& o);

struct BlockSelection {
    std::set<std::pair<ItemId, ItemId>> tuples;      // surviving role fillers
    std::set<std::string> reified;                   // ob(...) per matched source triple
    std::map<ItemId, std::set<std::string>> functionOutputs;  // per Z item, rendered
    std::vector<std::string> notes;                  // unknown function, arity mismatch
};

struct SelectionResult {
    LocalVar constructor;
    std::vector<BlockSelection> blocks;
    bool realisable = true;  // false when a mandatory role has no bindings
};

SelectionResult eval_constructor(const Constructor& c, const KnowledgeGraph& g,
                                 const FunctionRegistry& registry = {},
                                 const std::string& lang = "en");

struct UnresolvedEndpoint : Error {
    explicit UnresolvedEndpoint(const std::string& name)
        : Error("link endpoint '" + name + "' is not a declared constructor") {}
};

/// Checks a link against the graph. Subconstructor and instance links are
/// reified-tuple subset; part-of projects tuple subjects through the strict
/// parthood closure. Throws UnresolvedEndpoint.
bool check_link(const Link& link, const Model& model, const KnowledgeGraph& g,
                const FunctionRegistry& registry = {}, const std::string& lang = "en");

}  // namespace cosmo

#endif
