#ifndef COSMO_ALGEBRA_HPP
#define COSMO_ALGEBRA_HPP

#include <map>
#include <string>
#include <vector>

#include "cosmo/core.hpp"
#include "cosmo/eval.hpp"

namespace cosmo {

struct AlreadyType : Error {
    explicit AlreadyType(const LocalVar& name)
        : Error("'" + name.name + "' is already a type constructor") {}
};

struct AlreadyInstance : Error {
    explicit AlreadyInstance(const LocalVar& name)
        : Error("'" + name.name + "' is already an instance constructor") {}
};

struct EmptyBindings : Error {
    EmptyBindings() : Error("instantiation needs at least one type-to-instance binding") {}
};

struct UnboundType : Error {
    explicit UnboundType(const ItemId& item)
        : Error("no role is declared over " + to_string(item)), item(item) {}
    ItemId item;
};

/// Drops every instantiation and flips the kind to Type. The result is
/// named after the input with a "_gen" suffix.
Constructor generalize(const Constructor& c);

/// Type item -> instance item.
using BindingSet = std::map<ItemId, ItemId>;

/// Adds an instantiation for each binding to every block whose roles range
/// over the bound type, and flips the kind to Instance. The result is named
/// after the input with an "_inst" suffix.
Constructor instantiate(const Constructor& c, const BindingSet& bindings);

/// Direct subclass edges with reachability queries.
class SubclassTable {
public:
    void add(const ItemId& sub, const ItemId& super);
    /// a == b, or b is reachable from a over the subclass edges.
    bool narrower_eq(const ItemId& a, const ItemId& b) const;
    /// Collects the graph's subclass triples.
    static SubclassTable from_graph(const KnowledgeGraph& g);

private:
    std::map<ItemId, std::vector<ItemId>> edges_;
};

/// True when every selection admitted by `specific` is admitted by
/// `general`: each of general's blocks is matched by a specific block with
/// the same predicate, role types that are narrower or equal, at least the
/// same functions, and value constraints no wider than general's.
bool subsumes(const Constructor& general, const Constructor& specific,
              const SubclassTable& subclasses = {});

struct MergeResult {
    Constructor constructor;
    std::map<std::string, std::string> renamings;  // second input's renamed variables
};

/// Concatenates the blocks of both constructors under a new name, renaming
/// the second input's role variables with _2/_3/... suffixes where they
/// collide. The result is an instance constructor if either input is.
MergeResult merge(const Constructor& a, const Constructor& b, const std::string& newName);

}  // namespace cosmo

#endif
