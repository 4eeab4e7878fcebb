#include "cosmo/sparql.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

namespace cosmo {

namespace {

std::string entity_iri(const SparqlConfig& cfg, const ItemId& item) {
    return "<" + cfg.entityPrefix + to_string(item) + ">";
}

std::string property_iri(const SparqlConfig& cfg, const ItemId& item) {
    return "<" + cfg.propertyPrefix + to_string(item) + ">";
}

std::string sparql_string(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += ch;
        }
    }
    return out + "\"";
}

/// Deduplicating append preserving first-seen order.
void push_unique(std::vector<ItemId>& items, const ItemId& item) {
    if (std::find(items.begin(), items.end(), item) == items.end()) items.push_back(item);
}

Pattern triple_pattern(TriplePattern::Kind kind, std::string subjectVar, const ItemId& item,
                       std::string objectVar = {}) {
    Pattern p;
    p.kind = Pattern::Kind::Triple;
    p.triple = {kind, std::move(subjectVar), item, std::move(objectVar)};
    return p;
}

/// The three-way membership union for one variable and one class item:
/// instance of a subclass-path ancestor, strict subclass, or the item
/// itself (punning).
void membership_branches(std::vector<std::vector<Pattern>>& branches, const std::string& var,
                         const ItemId& type) {
    branches.push_back({triple_pattern(TriplePattern::Kind::Membership, var, type)});
    branches.push_back({triple_pattern(TriplePattern::Kind::Subclass, var, type)});
    Pattern pun;
    pun.kind = Pattern::Kind::Values;
    pun.values = {var, {type}};
    branches.push_back({pun});
}

struct RoleCompilation {
    std::vector<Pattern> patterns;
};

void compile_role(std::vector<Pattern>& out, const Block& block, const RoleDecl& role,
                  const std::string& var) {
    // Type joins widen the accepted types of the role they name.
    std::vector<ItemId> types = {role.filler};
    for (const JoinDecl& join : block.joins) {
        if (join.left.kind != ItemKind::Q || join.right.kind != ItemKind::Q) continue;
        if (join.left == role.filler) push_unique(types, join.right);
        if (join.right == role.filler) push_unique(types, join.left);
    }
    Pattern membership;
    membership.kind = Pattern::Kind::Union;
    for (const ItemId& type : types) membership_branches(membership.branches, var, type);
    out.push_back(std::move(membership));

    // Instantiations pin this role to exactly the named instance each.
    for (const Instantiation& inst : block.instantiations) {
        if (inst.typeItem != role.filler) continue;
        Pattern pin;
        pin.kind = Pattern::Kind::Values;
        pin.values = {var, {inst.instanceItem}};
        out.push_back(std::move(pin));
    }

    if (!role.constraint) return;
    FilterClause filter;
    filter.roleVar = var;
    bool wantLabel = false, wantNumeric = false;
    for (const ValueItem& vi : role.constraint->items) {
        FilterAlt alt;
        if (const auto* text = std::get_if<TextValue>(&vi)) {
            alt.kind = FilterAlt::Kind::LabelEquals;
            alt.text = text->text;
            wantLabel = true;
        } else if (const auto* item = std::get_if<ItemValue>(&vi)) {
            alt.kind = FilterAlt::Kind::ItemEquals;
            alt.item = item->item;
        } else if (const auto* num = std::get_if<NumberValue>(&vi)) {
            alt.kind = FilterAlt::Kind::NumEquals;
            alt.lo = num->value;
            wantNumeric = true;
        } else if (const auto* range = std::get_if<RangeValue>(&vi)) {
            alt.kind = FilterAlt::Kind::NumRange;
            alt.lo = range->lo;
            alt.hi = range->hi;
            wantNumeric = true;
        } else if (const auto* cmp = std::get_if<ComparisonValue>(&vi)) {
            alt.kind = FilterAlt::Kind::NumCompare;
            alt.lo = cmp->bound;
            alt.op = cmp->op;
            wantNumeric = true;
        }
        filter.alternatives.push_back(std::move(alt));
    }
    if (wantLabel) {
        filter.labelVar = var + "_label";
        Pattern opt;
        opt.kind = Pattern::Kind::Optional;
        opt.children.push_back(
            triple_pattern(TriplePattern::Kind::Label, var, ItemId{}, filter.labelVar));
        out.push_back(std::move(opt));
    }
    if (wantNumeric) {
        filter.numVar = var + "_num";
        Pattern opt;
        opt.kind = Pattern::Kind::Optional;
        opt.children.push_back(
            triple_pattern(TriplePattern::Kind::Numeric, var, ItemId{}, filter.numVar));
        out.push_back(std::move(opt));
    }
    Pattern f;
    f.kind = Pattern::Kind::Filter;
    f.filter = std::move(filter);
    out.push_back(std::move(f));
}

BlockGroup compile_block(const Block& block, int index) {
    BlockGroup group;
    group.blockIndex = index;
    group.optionalGroup = block.mandatories.empty();
    group.subjectVar = "b" + std::to_string(index) + "_" + block.role1.var.name;
    group.objectVar = "b" + std::to_string(index) + "_" + block.role2.var.name;

    // Predicate joins widen which graph predicates count as this block's.
    std::vector<ItemId> preds = {block.predicate.pitem};
    for (const JoinDecl& join : block.joins) {
        if (join.left.kind != ItemKind::P || join.right.kind != ItemKind::P) continue;
        if (join.left == block.predicate.pitem) push_unique(preds, join.right);
        if (join.right == block.predicate.pitem) push_unique(preds, join.left);
    }
    if (preds.size() == 1) {
        group.patterns.push_back(triple_pattern(TriplePattern::Kind::Predicate, group.subjectVar,
                                                preds[0], group.objectVar));
    } else {
        Pattern u;
        u.kind = Pattern::Kind::Union;
        for (const ItemId& p : preds)
            u.branches.push_back({triple_pattern(TriplePattern::Kind::Predicate,
                                                 group.subjectVar, p, group.objectVar)});
        group.patterns.push_back(std::move(u));
    }

    compile_role(group.patterns, block, block.role1, group.subjectVar);
    compile_role(group.patterns, block, block.role2, group.objectVar);
    return group;
}

// ---- deterministic text rendering -------------------------------------

void render_patterns(std::ostream& os, const std::vector<Pattern>& patterns,
                     const SparqlConfig& cfg, int indent);

void render_pattern(std::ostream& os, const Pattern& p, const SparqlConfig& cfg, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    switch (p.kind) {
        case Pattern::Kind::Triple: {
            const TriplePattern& t = p.triple;
            os << pad << "?" << t.subjectVar << " ";
            switch (t.kind) {
                case TriplePattern::Kind::Predicate:
                    os << property_iri(cfg, t.item) << " ?" << t.objectVar;
                    break;
                case TriplePattern::Kind::Membership:
                    os << property_iri(cfg, wd::instance_of) << "/"
                       << property_iri(cfg, wd::subclass_of) << "* " << entity_iri(cfg, t.item);
                    break;
                case TriplePattern::Kind::Subclass:
                    os << property_iri(cfg, wd::subclass_of) << "+ " << entity_iri(cfg, t.item);
                    break;
                case TriplePattern::Kind::Label:
                    os << "<" << cfg.labelPredicateBase << cfg.lang << "> ?" << t.objectVar;
                    break;
                case TriplePattern::Kind::Numeric:
                    os << "<" << cfg.numericPredicate << "> ?" << t.objectVar;
                    break;
            }
            os << " .\n";
            break;
        }
        case Pattern::Kind::Union: {
            os << pad;
            for (std::size_t i = 0; i < p.branches.size(); ++i) {
                if (i > 0) os << " UNION ";
                os << "{\n";
                render_patterns(os, p.branches[i], cfg, indent + 1);
                os << pad << "}";
            }
            os << "\n";
            break;
        }
        case Pattern::Kind::Optional:
            os << pad << "OPTIONAL {\n";
            render_patterns(os, p.children, cfg, indent + 1);
            os << pad << "}\n";
            break;
        case Pattern::Kind::Values: {
            os << pad << "VALUES ?" << p.values.var << " {";
            for (const ItemId& item : p.values.items) os << " " << entity_iri(cfg, item);
            os << " }\n";
            break;
        }
        case Pattern::Kind::Filter: {
            const FilterClause& f = p.filter;
            os << pad << "FILTER(";
            for (std::size_t i = 0; i < f.alternatives.size(); ++i) {
                if (i > 0) os << " || ";
                const FilterAlt& alt = f.alternatives[i];
                switch (alt.kind) {
                    case FilterAlt::Kind::LabelEquals:
                        os << "(BOUND(?" << f.labelVar << ") && STR(?" << f.labelVar
                           << ") = " << sparql_string(alt.text) << ")";
                        break;
                    case FilterAlt::Kind::ItemEquals:
                        os << "?" << f.roleVar << " = " << entity_iri(cfg, alt.item);
                        break;
                    case FilterAlt::Kind::NumEquals:
                        os << "(BOUND(?" << f.numVar << ") && ?" << f.numVar << " = "
                           << format_number(alt.lo) << ")";
                        break;
                    case FilterAlt::Kind::NumRange:
                        os << "(BOUND(?" << f.numVar << ") && ?" << f.numVar
                           << " >= " << format_number(alt.lo) << " && ?" << f.numVar
                           << " <= " << format_number(alt.hi) << ")";
                        break;
                    case FilterAlt::Kind::NumCompare: {
                        const char* op = alt.op == CmpOp::Lt   ? "<"
                                         : alt.op == CmpOp::Le ? "<="
                                         : alt.op == CmpOp::Gt ? ">"
                                                               : ">=";
                        os << "(BOUND(?" << f.numVar << ") && ?" << f.numVar << " " << op << " "
                           << format_number(alt.lo) << ")";
                        break;
                    }
                }
            }
            os << ")\n";
            break;
        }
    }
}

void render_patterns(std::ostream& os, const std::vector<Pattern>& patterns,
                     const SparqlConfig& cfg, int indent) {
    for (const Pattern& p : patterns) render_pattern(os, p, cfg, indent);
}

}  // namespace

CompiledQuery compile(const Constructor& c, const SparqlConfig& cfg) {
    CompiledQuery q;
    q.config = cfg;
    for (std::size_t i = 0; i < c.blocks.size(); ++i) {
        const Block& block = c.blocks[i];
        for (const FunctionDecl& fn : block.functions)
            q.notes.push_back(to_string(fn.zitem) +
                              " is evaluated locally and is not part of this query");
        q.blockGroups.push_back(compile_block(block, static_cast<int>(i)));
    }
    for (const BlockGroup& g : q.blockGroups) {
        q.projection.push_back(g.subjectVar);
        q.projection.push_back(g.objectVar);
    }

    std::ostringstream os;
    os << "# constructor " << c.name.name << "\n";
    for (const std::string& note : q.notes) os << "# " << note << "\n";
    os << "SELECT";
    for (const std::string& var : q.projection) os << " ?" << var;
    os << " WHERE {\n";
    for (const BlockGroup& g : q.blockGroups) {
        if (g.optionalGroup) {
            os << "  OPTIONAL {\n";
            render_patterns(os, g.patterns, cfg, 2);
            os << "  }\n";
        } else {
            os << "  {\n";
            render_patterns(os, g.patterns, cfg, 2);
            os << "  }\n";
        }
    }
    os << "}\n";
    q.text = os.str();
    return q;
}

// ---- reference matcher -------------------------------------------------

namespace {

using Row = std::map<std::string, GraphValue>;

/// Extends `row` with var=value; nullopt when the var is bound differently.
std::optional<Row> bind_var(const Row& row, const std::string& var, const GraphValue& value) {
    auto it = row.find(var);
    if (it != row.end()) {
        if (it->second == value) return row;
        return std::nullopt;
    }
    Row out = row;
    out.emplace(var, value);
    return out;
}

const ItemId* bound_item(const Row& row, const std::string& var) {
    auto it = row.find(var);
    if (it == row.end()) return nullptr;
    return std::get_if<ItemId>(&it->second);
}

/// x has an instance-of parent that reaches q over zero or more subclass
/// edges.
bool instance_path(const ItemId& x, const ItemId& q, const KnowledgeGraph& g) {
    for (const auto& t : g.triples) {
        if (t.subject != x || t.predicate != wd::instance_of) continue;
        const auto* parent = std::get_if<ItemId>(&t.object);
        if (!parent) continue;
        if (*parent == q) return true;
        // reuse member_of's subclass reachability by asking for a strict
        // subclass walk from the parent
        std::deque<ItemId> queue = {*parent};
        std::set<ItemId> seen;
        while (!queue.empty()) {
            ItemId cur = queue.front();
            queue.pop_front();
            if (!seen.insert(cur).second) continue;
            for (const auto& e : g.triples) {
                if (e.subject != cur || e.predicate != wd::subclass_of) continue;
                const auto* super = std::get_if<ItemId>(&e.object);
                if (!super) continue;
                if (*super == q) return true;
                queue.push_back(*super);
            }
        }
    }
    return false;
}

bool subclass_plus(const ItemId& x, const ItemId& q, const KnowledgeGraph& g) {
    std::deque<ItemId> queue = {x};
    std::set<ItemId> seen = {x};
    while (!queue.empty()) {
        ItemId cur = queue.front();
        queue.pop_front();
        for (const auto& e : g.triples) {
            if (e.subject != cur || e.predicate != wd::subclass_of) continue;
            const auto* super = std::get_if<ItemId>(&e.object);
            if (!super) continue;
            if (*super == q) return true;
            if (seen.insert(*super).second) queue.push_back(*super);
        }
    }
    return false;
}

std::vector<Row> apply_patterns(const std::vector<Pattern>& patterns, std::vector<Row> rows,
                                const KnowledgeGraph& g, const SparqlConfig& cfg);

std::vector<Row> apply_pattern(const Pattern& p, const std::vector<Row>& rows,
                               const KnowledgeGraph& g, const SparqlConfig& cfg) {
    std::vector<Row> out;
    switch (p.kind) {
        case Pattern::Kind::Triple: {
            const TriplePattern& t = p.triple;
            for (const Row& row : rows) {
                switch (t.kind) {
                    case TriplePattern::Kind::Predicate:
                        for (const auto& e : g.triples) {
                            if (e.predicate != t.item) continue;
                            const auto* obj = std::get_if<ItemId>(&e.object);
                            if (!obj) continue;
                            auto r1 = bind_var(row, t.subjectVar, GraphValue(e.subject));
                            if (!r1) continue;
                            auto r2 = bind_var(*r1, t.objectVar, GraphValue(*obj));
                            if (r2) out.push_back(std::move(*r2));
                        }
                        break;
                    case TriplePattern::Kind::Membership:
                    case TriplePattern::Kind::Subclass: {
                        const ItemId* x = bound_item(row, t.subjectVar);
                        if (!x)
                            throw UnsupportedFeature("membership over an unbound variable ?" +
                                                     t.subjectVar);
                        bool ok = t.kind == TriplePattern::Kind::Membership
                                      ? instance_path(*x, t.item, g)
                                      : subclass_plus(*x, t.item, g);
                        if (ok) out.push_back(row);
                        break;
                    }
                    case TriplePattern::Kind::Label: {
                        const ItemId* x = bound_item(row, t.subjectVar);
                        if (!x)
                            throw UnsupportedFeature("label of an unbound variable ?" +
                                                     t.subjectVar);
                        auto text = g.label(*x, cfg.lang);
                        if (!text) break;
                        auto r = bind_var(row, t.objectVar, GraphValue(*text));
                        if (r) out.push_back(std::move(*r));
                        break;
                    }
                    case TriplePattern::Kind::Numeric: {
                        const ItemId* x = bound_item(row, t.subjectVar);
                        if (!x)
                            throw UnsupportedFeature("numeric value of an unbound variable ?" +
                                                     t.subjectVar);
                        auto it = g.numericValues.find(*x);
                        if (it == g.numericValues.end()) break;
                        for (const auto& [prop, vals] : it->second)
                            for (double v : vals) {
                                auto r = bind_var(row, t.objectVar, GraphValue(v));
                                if (r) out.push_back(std::move(*r));
                            }
                        break;
                    }
                }
            }
            break;
        }
        case Pattern::Kind::Union: {
            std::set<Row> dedup;
            for (const auto& branch : p.branches)
                for (Row& row : apply_patterns(branch, rows, g, cfg)) dedup.insert(std::move(row));
            out.assign(dedup.begin(), dedup.end());
            break;
        }
        case Pattern::Kind::Optional: {
            for (const Row& row : rows) {
                std::vector<Row> extended = apply_patterns(p.children, {row}, g, cfg);
                if (extended.empty()) {
                    out.push_back(row);
                } else {
                    out.insert(out.end(), extended.begin(), extended.end());
                }
            }
            break;
        }
        case Pattern::Kind::Values: {
            for (const Row& row : rows) {
                auto it = row.find(p.values.var);
                if (it != row.end()) {
                    const auto* item = std::get_if<ItemId>(&it->second);
                    if (item &&
                        std::find(p.values.items.begin(), p.values.items.end(), *item) !=
                            p.values.items.end())
                        out.push_back(row);
                } else {
                    for (const ItemId& item : p.values.items) {
                        Row r = row;
                        r.emplace(p.values.var, GraphValue(item));
                        out.push_back(std::move(r));
                    }
                }
            }
            break;
        }
        case Pattern::Kind::Filter: {
            const FilterClause& f = p.filter;
            for (const Row& row : rows) {
                bool keep = false;
                for (const FilterAlt& alt : f.alternatives) {
                    switch (alt.kind) {
                        case FilterAlt::Kind::LabelEquals: {
                            auto it = row.find(f.labelVar);
                            if (it == row.end()) break;
                            const auto* s = std::get_if<std::string>(&it->second);
                            keep = s && *s == alt.text;
                            break;
                        }
                        case FilterAlt::Kind::ItemEquals: {
                            const ItemId* x = bound_item(row, f.roleVar);
                            keep = x && *x == alt.item;
                            break;
                        }
                        default: {
                            auto it = row.find(f.numVar);
                            if (it == row.end()) break;
                            const auto* n = std::get_if<double>(&it->second);
                            if (!n) break;
                            if (alt.kind == FilterAlt::Kind::NumEquals) {
                                keep = *n == alt.lo;
                            } else if (alt.kind == FilterAlt::Kind::NumRange) {
                                keep = alt.lo <= *n && *n <= alt.hi;
                            } else {
                                switch (alt.op) {
                                    case CmpOp::Lt: keep = *n < alt.lo; break;
                                    case CmpOp::Le: keep = *n <= alt.lo; break;
                                    case CmpOp::Gt: keep = *n > alt.lo; break;
                                    case CmpOp::Ge: keep = *n >= alt.lo; break;
                                }
                            }
                            break;
                        }
                    }
                    if (keep) break;
                }
                if (keep) out.push_back(row);
            }
            break;
        }
    }
    return out;
}

std::vector<Row> apply_patterns(const std::vector<Pattern>& patterns, std::vector<Row> rows,
                                const KnowledgeGraph& g, const SparqlConfig& cfg) {
    for (const Pattern& p : patterns) {
        rows = apply_pattern(p, rows, g, cfg);
        if (rows.empty()) break;
    }
    return rows;
}

}  // namespace

std::vector<ResultRow> reference_match(const CompiledQuery& q, const KnowledgeGraph& g) {
    std::vector<ResultRow> out;
    for (const BlockGroup& group : q.blockGroups) {
        std::vector<Row> rows = apply_patterns(group.patterns, {Row{}}, g, q.config);
        for (Row& row : rows) out.push_back({group.blockIndex, std::move(row)});
    }
    return out;
}

std::set<std::pair<ItemId, ItemId>> block_tuples(const std::vector<ResultRow>& rows,
                                                 const BlockGroup& group) {
    std::set<std::pair<ItemId, ItemId>> out;
    for (const ResultRow& row : rows) {
        if (row.blockIndex >= 0 && row.blockIndex != group.blockIndex) continue;
        auto s = row.bindings.find(group.subjectVar);
        auto o = row.bindings.find(group.objectVar);
        if (s == row.bindings.end() || o == row.bindings.end()) continue;
        const auto* si = std::get_if<ItemId>(&s->second);
        const auto* oi = std::get_if<ItemId>(&o->second);
        if (si && oi) out.insert({*si, *oi});
    }
    return out;
}

// ---- endpoint client ----------------------------------------------------

namespace {

struct SplitUrl {
    std::string base;  // scheme://host[:port]
    std::string path;  // /sparql
};

SplitUrl split_url(const std::string& url) {
    auto scheme = url.find("://");
    if (scheme == std::string::npos) throw HttpError(0, "endpoint URL must be absolute: " + url);
    auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

GraphValue decode_binding(const nlohmann::json& b, const SparqlConfig& cfg) {
    std::string type = b.value("type", "");
    std::string value = b.value("value", "");
    if (type == "uri" && value.rfind(cfg.entityPrefix, 0) == 0) {
        std::string local = value.substr(cfg.entityPrefix.size());
        try {
            Identifier id = classify_identifier(local);
            if (const auto* item = std::get_if<ItemId>(&id)) return *item;
        } catch (const Error&) {
        }
        return value;
    }
    if (type == "literal" || type == "typed-literal") {
        std::string datatype = b.value("datatype", "");
        if (datatype.rfind("http://www.w3.org/2001/XMLSchema#", 0) == 0) {
            std::string local = datatype.substr(datatype.rfind('#') + 1);
            if (local == "integer" || local == "decimal" || local == "double" ||
                local == "float" || local == "int" || local == "long") {
                if (auto n = parse_number(value)) return *n;
            }
        }
    }
    return value;
}

}  // namespace

std::vector<ResultRow> execute(const CompiledQuery& q, const EndpointConfig& ep) {
    SplitUrl url = split_url(ep.url);
    httplib::Client client(url.base);
    client.set_connection_timeout(std::chrono::milliseconds(ep.timeoutMs));
    client.set_read_timeout(std::chrono::milliseconds(ep.timeoutMs));
    client.set_write_timeout(std::chrono::milliseconds(ep.timeoutMs));
    httplib::Headers headers = {{"Accept", "application/sparql-results+json"},
                                {"User-Agent", ep.userAgent}};
    httplib::Params params = {{"query", q.text}};
    httplib::Result res = client.Post(url.path, headers, params);
    if (!res) {
        httplib::Error err = res.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
            err == httplib::Error::Write)
            throw Timeout(ep.url);
        throw HttpError(0, "request to " + ep.url + " failed: " + httplib::to_string(err));
    }
    if (res->status < 200 || res->status >= 300)
        throw HttpError(res->status,
                        "endpoint returned HTTP " + std::to_string(res->status));

    nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) throw MalformedResults("response is not JSON");
    if (!doc.contains("results") || !doc["results"].contains("bindings") ||
        !doc["results"]["bindings"].is_array())
        throw MalformedResults("missing results.bindings array");

    std::vector<ResultRow> rows;
    for (const auto& binding : doc["results"]["bindings"]) {
        if (rows.size() >= ep.maxRows) break;
        if (!binding.is_object()) throw MalformedResults("binding row is not an object");
        ResultRow row;
        for (const auto& [var, cell] : binding.items()) {
            if (!cell.is_object()) throw MalformedResults("binding cell is not an object");
            row.bindings.emplace(var, decode_binding(cell, q.config));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace cosmo
