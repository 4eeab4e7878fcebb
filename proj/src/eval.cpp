#include "cosmo/eval.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

namespace cosmo {

namespace {

std::string quote(const std::string& s) {
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

/// Rendering used inside concat: no quotes around text.
std::string bare_render(const GraphValue& v) {
    if (const auto* item = std::get_if<ItemId>(&v)) return to_string(*item);
    if (const auto* text = std::get_if<std::string>(&v)) return *text;
    return format_number(std::get<double>(v));
}

}  // namespace

std::string render_graph_value(const GraphValue& v) {
    if (const auto* text = std::get_if<std::string>(&v)) return quote(*text);
    return bare_render(v);
}

std::optional<std::string> KnowledgeGraph::label(const ItemId& item,
                                                 const std::string& lang) const {
    auto it = labels.find({item, lang});
    if (it == labels.end()) return std::nullopt;
    return it->second;
}

std::vector<ItemId> KnowledgeGraph::item_objects(const ItemId& subject,
                                                 const ItemId& predicate) const {
    std::vector<ItemId> out;
    for (const auto& t : triples) {
        if (t.subject != subject || t.predicate != predicate) continue;
        if (const auto* item = std::get_if<ItemId>(&t.object)) out.push_back(*item);
    }
    return out;
}

void KnowledgeGraph::refresh_partof_closure() {
    std::map<ItemId, std::vector<ItemId>> adj;
    for (const auto& [a, b] : partof) adj[a].push_back(b);
    partofClosure.clear();
    for (const auto& [start, firsts] : adj) {
        std::deque<ItemId> queue(firsts.begin(), firsts.end());
        std::set<ItemId> seen;
        while (!queue.empty()) {
            ItemId cur = queue.front();
            queue.pop_front();
            if (!seen.insert(cur).second) continue;
            if (cur == start) throw MereologyViolation(start);
            partofClosure.insert({start, cur});
            auto it = adj.find(cur);
            if (it != adj.end()) queue.insert(queue.end(), it->second.begin(), it->second.end());
        }
    }
}

namespace {

struct GraphToken {
    std::string text;
    bool quoted = false;
};

std::vector<GraphToken> tokenize_graph_line(const std::string& line, int lineNo) {
    std::vector<GraphToken> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char ch = line[i];
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            ++i;
            continue;
        }
        if (ch == '#') break;  // comment to end of line
        if (ch == '"') {
            std::string text;
            ++i;
            bool closed = false;
            while (i < line.size()) {
                char c = line[i];
                if (c == '\\') {
                    if (i + 1 >= line.size())
                        throw GraphFormatError(lineNo, "dangling escape in string");
                    char esc = line[i + 1];
                    switch (esc) {
                        case '"': text += '"'; break;
                        case '\\': text += '\\'; break;
                        case 'n': text += '\n'; break;
                        case 't': text += '\t'; break;
                        case 'r': text += '\r'; break;
                        default:
                            throw GraphFormatError(lineNo, std::string("unknown escape '\\") +
                                                               esc + "'");
                    }
                    i += 2;
                    continue;
                }
                if (c == '"') {
                    closed = true;
                    ++i;
                    break;
                }
                text += c;
                ++i;
            }
            if (!closed) throw GraphFormatError(lineNo, "unterminated string");
            out.push_back({text, true});
            continue;
        }
        std::string word;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
               line[i] != '#' && line[i] != '"') {
            word += line[i];
            ++i;
        }
        out.push_back({word, false});
    }
    return out;
}

ItemId expect_item(const GraphToken& tok, int lineNo, const char* what) {
    if (tok.quoted)
        throw GraphFormatError(lineNo, std::string("expected ") + what + ", got a string");
    try {
        Identifier id = classify_identifier(tok.text);
        if (const auto* item = std::get_if<ItemId>(&id)) return *item;
    } catch (const Error&) {
    }
    throw GraphFormatError(lineNo,
                           std::string("expected ") + what + ", got '" + tok.text + "'");
}

ItemId expect_property(const GraphToken& tok, int lineNo) {
    ItemId item = expect_item(tok, lineNo, "a property item");
    if (item.kind != ItemKind::P)
        throw GraphFormatError(lineNo, "predicate must be a P item, got " + to_string(item));
    return item;
}

double expect_number(const GraphToken& tok, int lineNo) {
    if (!tok.quoted) {
        if (auto n = parse_number(tok.text)) return *n;
    }
    throw GraphFormatError(lineNo, "expected a number, got '" + tok.text + "'");
}

}  // namespace

KnowledgeGraph parse_graph(std::istream& in) {
    KnowledgeGraph g;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::vector<GraphToken> toks = tokenize_graph_line(line, lineNo);
        if (toks.empty()) continue;
        const std::string& head = toks[0].text;
        auto want = [&](std::size_t n) {
            if (toks.size() != n + 1)
                throw GraphFormatError(lineNo, "'" + head + "' takes " + std::to_string(n) +
                                                   " arguments, got " +
                                                   std::to_string(toks.size() - 1));
        };
        if (head == "triple") {
            want(3);
            ItemId s = expect_item(toks[1], lineNo, "a subject item");
            ItemId p = expect_property(toks[2], lineNo);
            GraphValue o;
            if (toks[3].quoted) {
                o = toks[3].text;
            } else {
                try {
                    Identifier id = classify_identifier(toks[3].text);
                    if (const auto* item = std::get_if<ItemId>(&id)) {
                        o = *item;
                    } else {
                        throw GraphFormatError(lineNo, "object must be an item, string or number");
                    }
                } catch (const GraphFormatError&) {
                    throw;
                } catch (const Error&) {
                    if (auto n = parse_number(toks[3].text)) {
                        o = *n;
                    } else {
                        throw GraphFormatError(lineNo, "bad object '" + toks[3].text + "'");
                    }
                }
            }
            g.triples.insert({s, p, o});
        } else if (head == "label") {
            want(3);
            ItemId item = expect_item(toks[1], lineNo, "an item");
            if (toks[2].quoted)
                throw GraphFormatError(lineNo, "expected a language tag, got a string");
            if (!toks[3].quoted)
                throw GraphFormatError(lineNo, "label text must be quoted");
            g.labels[{item, toks[2].text}] = toks[3].text;
        } else if (head == "partof") {
            want(2);
            ItemId a = expect_item(toks[1], lineNo, "an item");
            ItemId b = expect_item(toks[2], lineNo, "an item");
            g.partof.insert({a, b});
        } else if (head == "value") {
            want(3);
            ItemId item = expect_item(toks[1], lineNo, "an item");
            ItemId prop = expect_property(toks[2], lineNo);
            g.numericValues[item][prop].push_back(expect_number(toks[3], lineNo));
        } else {
            throw GraphFormatError(lineNo, "unknown directive '" + head + "'");
        }
    }
    g.refresh_partof_closure();
    return g;
}

KnowledgeGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open graph file: " + path);
    return parse_graph(in);
}

namespace {

std::map<ItemId, std::vector<ItemId>> subclass_edges(const KnowledgeGraph& g) {
    std::map<ItemId, std::vector<ItemId>> adj;
    for (const auto& t : g.triples) {
        if (t.predicate != wd::subclass_of) continue;
        if (const auto* item = std::get_if<ItemId>(&t.object)) adj[t.subject].push_back(*item);
    }
    return adj;
}

/// True when `target` is reachable from `start` over `adj` in >= 1 step.
bool reaches(const ItemId& start, const ItemId& target,
             const std::map<ItemId, std::vector<ItemId>>& adj) {
    std::deque<ItemId> queue;
    if (auto it = adj.find(start); it != adj.end())
        queue.insert(queue.end(), it->second.begin(), it->second.end());
    std::set<ItemId> seen;
    while (!queue.empty()) {
        ItemId cur = queue.front();
        queue.pop_front();
        if (!seen.insert(cur).second) continue;
        if (cur == target) return true;
        if (auto it = adj.find(cur); it != adj.end())
            queue.insert(queue.end(), it->second.begin(), it->second.end());
    }
    return false;
}

}  // namespace

bool member_of(const ItemId& x, const ItemId& q, const KnowledgeGraph& g) {
    if (x == q) return true;
    auto adj = subclass_edges(g);
    for (const ItemId& parent : g.item_objects(x, wd::instance_of))
        if (parent == q || reaches(parent, q, adj)) return true;
    return reaches(x, q, adj);
}

void FunctionRegistry::bind(const ItemId& zitem, Entry entry) {
    entries_[zitem] = std::move(entry);
}

const FunctionRegistry::Entry* FunctionRegistry::find(const ItemId& zitem) const {
    auto it = entries_.find(zitem);
    return it == entries_.end() ? nullptr : &it->second;
}

namespace {

constexpr double kReferenceYear = 2023;
const ItemId kBirthYearProperty{ItemKind::P, 569};

std::optional<double> first_numeric(const GraphValue& v, const EvalContext& ctx,
                                    const ItemId* onlyProperty) {
    if (const auto* n = std::get_if<double>(&v)) return *n;
    const auto* item = std::get_if<ItemId>(&v);
    if (!item) return std::nullopt;
    auto it = ctx.graph.numericValues.find(*item);
    if (it == ctx.graph.numericValues.end()) return std::nullopt;
    std::optional<double> best;
    for (const auto& [prop, values] : it->second) {
        if (onlyProperty && prop != *onlyProperty) continue;
        for (double n : values)
            if (!best || n < *best) best = n;
    }
    return best;
}

FunctionRegistry::Entry make_builtin(const std::string& name, std::size_t arity) {
    FunctionRegistry::Entry e;
    e.builtin = name;
    e.arity = arity;
    if (name != "concat" && arity != 1)
        throw Error("builtin '" + name + "' takes exactly 1 argument");
    if (arity == 0) throw Error("functions take at least 1 argument");
    if (name == "identity") {
        e.fn = [](const std::vector<GraphValue>& args, const EvalContext&) {
            return std::optional<GraphValue>(args[0]);
        };
    } else if (name == "label") {
        e.fn = [](const std::vector<GraphValue>& args,
                  const EvalContext& ctx) -> std::optional<GraphValue> {
            const auto* item = std::get_if<ItemId>(&args[0]);
            if (!item) return std::nullopt;
            auto text = ctx.graph.label(*item, ctx.lang);
            if (!text) return std::nullopt;
            return GraphValue(*text);
        };
    } else if (name == "numvalue") {
        e.fn = [](const std::vector<GraphValue>& args,
                  const EvalContext& ctx) -> std::optional<GraphValue> {
            auto n = first_numeric(args[0], ctx, nullptr);
            if (!n) return std::nullopt;
            return GraphValue(*n);
        };
    } else if (name == "age") {
        e.fn = [](const std::vector<GraphValue>& args,
                  const EvalContext& ctx) -> std::optional<GraphValue> {
            auto born = first_numeric(args[0], ctx, &kBirthYearProperty);
            if (!born) return std::nullopt;
            return GraphValue(kReferenceYear - *born);
        };
    } else if (name == "concat") {
        e.fn = [](const std::vector<GraphValue>& args,
                  const EvalContext&) -> std::optional<GraphValue> {
            std::string out;
            for (const auto& a : args) out += bare_render(a);
            return GraphValue(out);
        };
    } else {
        throw Error("unknown builtin function '" + name + "'");
    }
    return e;
}

}  // namespace

void FunctionRegistry::bind(const ItemId& zitem, const std::string& builtinName,
                            std::size_t arity) {
    bind(zitem, make_builtin(builtinName, arity));
}

const std::vector<std::string>& FunctionRegistry::builtin_names() {
    static const std::vector<std::string> names = {"age", "concat", "identity", "label",
                                                   "numvalue"};
    return names;
}

FunctionRegistry load_function_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open function manifest: " + path);
    FunctionRegistry reg;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::vector<GraphToken> toks = tokenize_graph_line(line, lineNo);
        if (toks.empty()) continue;
        if (toks.size() != 3)
            throw GraphFormatError(lineNo, "expected '<Z-item> <arity> <builtin-name>'");
        ItemId z = expect_item(toks[0], lineNo, "a Z item");
        if (z.kind != ItemKind::Z)
            throw GraphFormatError(lineNo, "functions must be Z items, got " + to_string(z));
        double arity = expect_number(toks[1], lineNo);
        if (arity < 1 || arity != static_cast<std::size_t>(arity))
            throw GraphFormatError(lineNo, "arity must be a positive integer");
        try {
            reg.bind(z, toks[2].text, static_cast<std::size_t>(arity));
        } catch (const Error& e) {
            throw GraphFormatError(lineNo, e.what());
        }
    }
    return reg;
}

std::string reify(const ItemId& p, const ItemId& s, const ItemId& o) {
    return "ob(" + to_string(p) + "," + to_string(s) + "," + to_string(o) + ")";
}

namespace {

/// Disjunction over the constraint's alternatives; empty lists are vacuous.
bool satisfies_constraint(const GraphValue& v, const ValueConstraint& vc,
                          const EvalContext& ctx) {
    auto numbers_of = [&](std::vector<double>& out) {
        if (const auto* n = std::get_if<double>(&v)) {
            out.push_back(*n);
            return;
        }
        const auto* item = std::get_if<ItemId>(&v);
        if (!item) return;
        auto it = ctx.graph.numericValues.find(*item);
        if (it == ctx.graph.numericValues.end()) return;
        for (const auto& [prop, values] : it->second)
            out.insert(out.end(), values.begin(), values.end());
    };
    for (const ValueItem& alt : vc.items) {
        if (const auto* text = std::get_if<TextValue>(&alt)) {
            if (const auto* s = std::get_if<std::string>(&v)) {
                if (*s == text->text) return true;
            } else if (const auto* item = std::get_if<ItemId>(&v)) {
                if (ctx.graph.label(*item, ctx.lang) == text->text) return true;
            }
            continue;
        }
        if (const auto* want = std::get_if<ItemValue>(&alt)) {
            if (const auto* item = std::get_if<ItemId>(&v))
                if (*item == want->item) return true;
            continue;
        }
        std::vector<double> numbers;
        numbers_of(numbers);
        if (const auto* num = std::get_if<NumberValue>(&alt)) {
            for (double n : numbers)
                if (n == num->value) return true;
        } else if (const auto* range = std::get_if<RangeValue>(&alt)) {
            for (double n : numbers)
                if (range->lo <= n && n <= range->hi) return true;
        } else if (const auto* cmp = std::get_if<ComparisonValue>(&alt)) {
            for (double n : numbers) {
                bool ok = false;
                switch (cmp->op) {
                    case CmpOp::Lt: ok = n < cmp->bound; break;
                    case CmpOp::Le: ok = n <= cmp->bound; break;
                    case CmpOp::Gt: ok = n > cmp->bound; break;
                    case CmpOp::Ge: ok = n >= cmp->bound; break;
                }
                if (ok) return true;
            }
        }
    }
    return false;
}

BlockSelection eval_block(const Block& block, const EvalContext& ctx,
                          const FunctionRegistry& registry, bool* realisable) {
    const KnowledgeGraph& g = ctx.graph;
    BlockSelection bs;

    // Predicate joins widen which graph predicates count as this block's.
    std::set<ItemId> preds = {block.predicate.pitem};
    auto widen = [](std::set<ItemId>& target, const JoinDecl& join, const ItemId& anchor) {
        if (join.left.kind != join.right.kind) return;
        if (join.left == anchor) target.insert(join.right);
        if (join.right == anchor) target.insert(join.left);
    };
    for (const JoinDecl& join : block.joins)
        if (join.left.kind == ItemKind::P) widen(preds, join, block.predicate.pitem);

    // Type joins widen the accepted types of the role they name.
    auto role_types = [&](const RoleDecl& role) {
        std::set<ItemId> types = {role.filler};
        for (const JoinDecl& join : block.joins)
            if (join.left.kind == ItemKind::Q) widen(types, join, role.filler);
        return types;
    };
    std::set<ItemId> types1 = role_types(block.role1);
    std::set<ItemId> types2 = role_types(block.role2);

    // Each instantiation pins every role declared over its type item to
    // exactly its instance; conflicting pins leave the block empty.
    std::map<ItemId, std::set<ItemId>> pinned;
    for (const Instantiation& inst : block.instantiations)
        pinned[inst.typeItem].insert(inst.instanceItem);
    auto pin_ok = [&](const RoleDecl& role, const ItemId& value) {
        auto it = pinned.find(role.filler);
        if (it == pinned.end()) return true;
        return it->second.size() == 1 && it->second.count(value) > 0;
    };

    auto role_ok = [&](const RoleDecl& role, const std::set<ItemId>& types,
                       const ItemId& value) {
        bool typed = false;
        for (const ItemId& q : types)
            if (member_of(value, q, g)) {
                typed = true;
                break;
            }
        if (!typed) return false;
        if (!pin_ok(role, value)) return false;
        return !role.constraint || satisfies_constraint(GraphValue(value), *role.constraint, ctx);
    };

    for (const auto& t : g.triples) {
        if (preds.count(t.predicate) == 0) continue;
        const auto* obj = std::get_if<ItemId>(&t.object);
        if (!obj) continue;
        if (!role_ok(block.role1, types1, t.subject)) continue;
        if (!role_ok(block.role2, types2, *obj)) continue;
        bs.tuples.insert({t.subject, *obj});
        bs.reified.insert(reify(t.predicate, t.subject, *obj));
    }

    auto bindings_of = [&](const ItemId& filler, bool* declared) {
        std::set<GraphValue> out;
        if (block.role1.filler == filler) {
            *declared = true;
            for (const auto& [s, o] : bs.tuples) out.insert(GraphValue(s));
        }
        if (block.role2.filler == filler) {
            *declared = true;
            for (const auto& [s, o] : bs.tuples) out.insert(GraphValue(o));
        }
        return out;
    };

    for (const LocalVar& mand : block.mandatories) {
        const RoleDecl* role = nullptr;
        if (block.role1.var == mand) role = &block.role1;
        if (block.role2.var == mand) role = &block.role2;
        if (!role) continue;  // undeclared mandatory is a validation finding
        bool declared = false;
        if (bindings_of(role->filler, &declared).empty()) *realisable = false;
    }

    for (const FunctionDecl& fn : block.functions) {
        const FunctionRegistry::Entry* entry = registry.find(fn.zitem);
        if (!entry) {
            bs.notes.push_back("no implementation registered for " + to_string(fn.zitem));
            continue;
        }
        if (entry->arity != fn.args.size()) {
            bs.notes.push_back(to_string(fn.zitem) + " expects " +
                               std::to_string(entry->arity) + " argument(s), got " +
                               std::to_string(fn.args.size()));
            continue;
        }
        std::vector<std::vector<GraphValue>> argSets;
        for (const ItemId& arg : fn.args) {
            bool declared = false;
            std::set<GraphValue> bound = bindings_of(arg, &declared);
            if (!declared) bound.insert(GraphValue(arg));
            argSets.emplace_back(bound.begin(), bound.end());
        }
        std::vector<GraphValue> picked(argSets.size(), GraphValue(0.0));
        auto& outputs = bs.functionOutputs[fn.zitem];
        std::function<void(std::size_t)> walk = [&](std::size_t depth) {
            if (depth == argSets.size()) {
                std::optional<GraphValue> out = entry->fn(picked, ctx);
                if (!out) return;
                if (fn.constraint && !satisfies_constraint(*out, *fn.constraint, ctx)) return;
                outputs.insert(render_graph_value(*out));
                return;
            }
            for (const GraphValue& v : argSets[depth]) {
                picked[depth] = v;
                walk(depth + 1);
            }
        };
        walk(0);
    }
    return bs;
}

}  // namespace

SelectionResult eval_constructor(const Constructor& c, const KnowledgeGraph& g,
                                 const FunctionRegistry& registry, const std::string& lang) {
    EvalContext ctx{g, lang};
    SelectionResult res;
    res.constructor = c.name;
    for (const Block& block : c.blocks)
        res.blocks.push_back(eval_block(block, ctx, registry, &res.realisable));
    return res;
}

namespace {

std::set<std::string> all_reified(const SelectionResult& r) {
    std::set<std::string> out;
    for (const BlockSelection& b : r.blocks) out.insert(b.reified.begin(), b.reified.end());
    return out;
}

std::set<ItemId> all_subjects(const SelectionResult& r) {
    std::set<ItemId> out;
    for (const BlockSelection& b : r.blocks)
        for (const auto& [s, o] : b.tuples) out.insert(s);
    return out;
}

}  // namespace

bool check_link(const Link& link, const Model& model, const KnowledgeGraph& g,
                const FunctionRegistry& registry, const std::string& lang) {
    const Constructor* from = model.find_constructor(link.from.name);
    if (!from) throw UnresolvedEndpoint(link.from.name);
    const Constructor* to = model.find_constructor(link.to.name);
    if (!to) throw UnresolvedEndpoint(link.to.name);

    SelectionResult fromSel = eval_constructor(*from, g, registry, lang);
    SelectionResult toSel = eval_constructor(*to, g, registry, lang);

    if (link.kind == LinkKind::PartOf) {
        std::set<ItemId> parts = all_subjects(fromSel);
        std::set<ItemId> wholes = all_subjects(toSel);
        for (const ItemId& part : parts) {
            bool placed = false;
            for (const ItemId& whole : wholes)
                if (g.partofClosure.count({part, whole}) > 0) {
                    placed = true;
                    break;
                }
            if (!placed) return false;
        }
        return true;
    }

    std::set<std::string> sub = all_reified(fromSel);
    std::set<std::string> super = all_reified(toSel);
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

}  // namespace cosmo
