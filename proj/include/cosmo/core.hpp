#ifndef COSMO_CORE_HPP
#define COSMO_CORE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cosmo {

/// Base class for all recoverable library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct MalformedToken : Error {
    explicit MalformedToken(const std::string& token)
        : Error("malformed identifier token: '" + token + "'"), token(token) {}
    std::string token;
};

struct CsmOutOfRange : Error {
    explicit CsmOutOfRange(const std::string& token)
        : Error("CSM id out of range (CSM001..CSM014): '" + token + "'"), token(token) {}
    std::string token;
};

enum class ItemKind { Q, P, Z };

/// Wikidata/Wikifunctions item reference such as Q42, P31 or Z12345.
struct ItemId {
    ItemKind kind = ItemKind::Q;
    std::uint64_t number = 1;

    auto operator<=>(const ItemId&) const = default;
};

std::string to_string(const ItemId& id);

/// Language-neutral concept id CSM001..CSM014.
struct CsmId {
    int number = 1;

    auto operator<=>(const CsmId&) const = default;
};

std::string to_string(const CsmId& id);

/// Model-local name: constructor names (C1) and role variables (r1).
struct LocalVar {
    std::string name;

    auto operator<=>(const LocalVar&) const = default;
};

using Identifier = std::variant<ItemId, CsmId, LocalVar>;

/// Splits an identifier token into item / csm / variable.
/// Throws MalformedToken and CsmOutOfRange.
Identifier classify_identifier(const std::string& token);

// --- value constraints (ORM2-style) ---

enum class CmpOp { Lt, Le, Gt, Ge };

struct TextValue {
    std::string text;
    bool operator==(const TextValue&) const = default;
};
struct ItemValue {
    ItemId item;
    bool operator==(const ItemValue&) const = default;
};
struct NumberValue {
    double value = 0;
    bool operator==(const NumberValue&) const = default;
};
struct RangeValue {
    double lo = 0;
    double hi = 0;
    bool operator==(const RangeValue&) const = default;
};
struct ComparisonValue {
    CmpOp op = CmpOp::Lt;
    double bound = 0;
    bool operator==(const ComparisonValue&) const = default;
};

using ValueItem = std::variant<TextValue, ItemValue, NumberValue, RangeValue, ComparisonValue>;

/// Brace-delimited value constraint; satisfied when any item matches.
struct ValueConstraint {
    std::vector<ValueItem> items;
    bool operator==(const ValueConstraint&) const = default;
};

// --- constructor structure ---

enum class RoleKind { Object, ObjectType };

struct RoleDecl {
    LocalVar var;
    std::optional<ItemId> name;  // optional QItem role name, pure sugar
    RoleKind kind = RoleKind::ObjectType;
    ItemId filler;               // QItem the role selects from
    std::optional<ValueConstraint> constraint;
    bool operator==(const RoleDecl&) const = default;
};

struct PredicateDecl {
    ItemId pitem;   // PItem
    LocalVar var1;
    LocalVar var2;
    bool operator==(const PredicateDecl&) const = default;
};

struct FunctionDecl {
    ItemId zitem;               // ZItem
    std::vector<ItemId> args;   // QItem argument types
    std::optional<ValueConstraint> constraint;
    bool operator==(const FunctionDecl&) const = default;
};

/// Join of two QItems or two PItems; homogeneity is a validation rule.
struct JoinDecl {
    ItemId left;
    ItemId right;
    bool operator==(const JoinDecl&) const = default;
};

struct Instantiation {
    ItemId typeItem;      // QItem appearing as a role filler
    ItemId instanceItem;  // selected QItem instance
    bool operator==(const Instantiation&) const = default;
};

/// One predicate with its two roles plus attached declarations.
struct Block {
    PredicateDecl predicate;
    RoleDecl role1;
    RoleDecl role2;
    std::vector<FunctionDecl> functions;
    std::vector<JoinDecl> joins;
    std::vector<LocalVar> mandatories;
    std::vector<Instantiation> instantiations;
    bool operator==(const Block&) const = default;
};

enum class ConstructorKind { Type, Instance };

struct Constructor {
    ConstructorKind kind = ConstructorKind::Type;
    LocalVar name;
    std::vector<Block> blocks;
    bool operator==(const Constructor&) const = default;
};

enum class LinkKind { SubConstructorOf, InstanceOf, PartOf };

/// Canonical English keyword for a link kind.
std::string to_string(LinkKind kind);

struct Link {
    LinkKind kind = LinkKind::SubConstructorOf;
    LocalVar from;
    LocalVar to;
    bool operator==(const Link&) const = default;
};

using Declaration = std::variant<Constructor, Link>;

/// Ordered sequence of constructor and link declarations.
struct Model {
    std::vector<Declaration> declarations;
    bool operator==(const Model&) const = default;

    const Constructor* find_constructor(const std::string& name) const;
    std::vector<const Constructor*> constructors() const;
    std::vector<const Link*> links() const;
};

// --- shared helpers ---

/// Shortest decimal form that parses back to exactly the same double.
std::string format_number(double value);

/// Strict double parse; returns nullopt on trailing junk.
std::optional<double> parse_number(const std::string& text);

namespace wd {
inline constexpr ItemId instance_of{ItemKind::P, 31};
inline constexpr ItemId subclass_of{ItemKind::P, 279};
}  // namespace wd

}  // namespace cosmo

#endif
