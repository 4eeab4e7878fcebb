#ifndef COSMO_SPARQL_HPP
#define COSMO_SPARQL_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cosmo/core.hpp"
#include "cosmo/eval.hpp"

namespace cosmo {

/// IRI layout of the target triple store. Defaults to Wikidata's direct
/// claims; the label and numeric predicates are private conventions used by
/// the local reference data as well.
struct SparqlConfig {
    std::string entityPrefix = "http://www.wikidata.org/entity/";
    std::string propertyPrefix = "http://www.wikidata.org/prop/direct/";
    std::string labelPredicateBase = "http://cosmo.invalid/label#";  // + language tag
    std::string numericPredicate = "http://cosmo.invalid/numericValue";
    std::string lang = "en";
};

struct EndpointConfig {
    std::string url;
    int timeoutMs = 30000;
    std::string userAgent = "cosmo-cli/0.1 (content-selection constructor tooling)";
    std::size_t maxRows = 1000;
};

/// One basic graph pattern. Membership and Subclass close over the
/// instance-of/subclass-of property paths and take an item object; the
/// other kinds take a variable object.
struct TriplePattern {
    enum class Kind {
        Predicate,   // ?s <prop/P..> ?o
        Membership,  // ?s <prop/P31>/<prop/P279>* <entity/Q..>
        Subclass,    // ?s <prop/P279>+ <entity/Q..>
        Label,       // ?s <label#lang> ?o
        Numeric,     // ?s <numericValue> ?o
    };
    Kind kind = Kind::Predicate;
    std::string subjectVar;
    ItemId item{};           // predicate item or membership class
    std::string objectVar;   // empty for Membership/Subclass
    bool operator==(const TriplePattern&) const = default;
};

struct ValuesClause {
    std::string var;
    std::vector<ItemId> items;
    bool operator==(const ValuesClause&) const = default;
};

/// One disjunct of a FILTER; the disjunction mirrors a value constraint.
struct FilterAlt {
    enum class Kind { LabelEquals, ItemEquals, NumEquals, NumRange, NumCompare };
    Kind kind = Kind::ItemEquals;
    std::string text;        // LabelEquals
    ItemId item{};           // ItemEquals
    double lo = 0, hi = 0;   // NumEquals/NumCompare use lo as the bound
    CmpOp op = CmpOp::Lt;    // NumCompare
    bool operator==(const FilterAlt&) const = default;
};

struct FilterClause {
    std::string roleVar;
    std::string labelVar;  // bound by an OPTIONAL label pattern when non-empty
    std::string numVar;    // bound by an OPTIONAL numeric pattern when non-empty
    std::vector<FilterAlt> alternatives;
    bool operator==(const FilterClause&) const = default;
};

/// Recursive pattern tree covering exactly the fragment compile() emits:
/// triples, UNION, OPTIONAL, VALUES and FILTER.
struct Pattern {
    enum class Kind { Triple, Union, Optional, Values, Filter };
    Kind kind = Kind::Triple;
    TriplePattern triple;                        // Kind::Triple
    std::vector<std::vector<Pattern>> branches;  // Kind::Union
    std::vector<Pattern> children;               // Kind::Optional
    ValuesClause values;                         // Kind::Values
    FilterClause filter;                         // Kind::Filter
    bool operator==(const Pattern&) const = default;
};

struct BlockGroup {
    int blockIndex = 0;
    bool optionalGroup = false;  // true when the block has no mandatory role
    std::string subjectVar;
    std::string objectVar;
    std::vector<Pattern> patterns;
    bool operator==(const BlockGroup&) const = default;
};

struct CompiledQuery {
    std::string text;
    std::vector<std::string> projection;  // variable names without '?'
    std::vector<BlockGroup> blockGroups;
    std::vector<std::string> notes;  // functions excluded from compilation
    SparqlConfig config;
};

CompiledQuery compile(const Constructor& c, const SparqlConfig& cfg = {});

struct ResultRow {
    int blockIndex = -1;  // -1: joined endpoint result, not block-tagged
    std::map<std::string, GraphValue> bindings;
    bool operator==(const ResultRow&) const = default;
};

struct Timeout : Error {
    explicit Timeout(const std::string& url) : Error("request to " + url + " timed out") {}
};

struct HttpError : Error {
    HttpError(int status, const std::string& what) : Error(what), status(status) {}
    int status;  // 0 when the failure happened before an HTTP status existed
};

struct MalformedResults : Error {
    explicit MalformedResults(const std::string& what)
        : Error("malformed SPARQL results: " + what) {}
};

struct UnsupportedFeature : Error {
    explicit UnsupportedFeature(const std::string& what)
        : Error("unsupported query feature: " + what) {}
};

/// Runs the query against an endpoint; one joined result set, truncated at
/// maxRows. Throws Timeout/HttpError/MalformedResults.
std::vector<ResultRow> execute(const CompiledQuery& q, const EndpointConfig& ep);

/// Interprets the compiled pattern fragment directly over a local graph,
/// each block group independently; rows carry their block index. Throws
/// UnsupportedFeature for patterns outside the compiled fragment.
std::vector<ResultRow> reference_match(const CompiledQuery& q, const KnowledgeGraph& g);

/// Projects rows onto one block's (subject, object) pairs, skipping rows
/// where either variable is unbound or non-item.
std::set<std::pair<ItemId, ItemId>> block_tuples(const std::vector<ResultRow>& rows,
                                                 const BlockGroup& group);

}  // namespace cosmo

#endif
