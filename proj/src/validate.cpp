#include "cosmo/validate.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace cosmo {

ItemCatalog ItemCatalog::open_world() { return {}; }

ItemCatalog ItemCatalog::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open item catalog: " + path);
    ItemCatalog cat;
    cat.mode_ = Mode::File;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ss(line);
        std::string token;
        while (ss >> token) {
            Identifier id;
            try {
                id = classify_identifier(token);
            } catch (const Error&) {
                throw Error("item catalog " + path + " line " + std::to_string(lineno) +
                            ": bad item '" + token + "'");
            }
            const auto* item = std::get_if<ItemId>(&id);
            if (!item)
                throw Error("item catalog " + path + " line " + std::to_string(lineno) +
                            ": bad item '" + token + "'");
            cat.items_.insert(*item);
        }
    }
    return cat;
}

ItemCatalog ItemCatalog::from_lookup(std::function<bool(const ItemId&)> probe) {
    ItemCatalog cat;
    cat.mode_ = Mode::Lookup;
    cat.probe_ = std::move(probe);
    return cat;
}

bool ItemCatalog::contains(const ItemId& id) const {
    switch (mode_) {
        case Mode::OpenWorld: return true;
        case Mode::File: return items_.count(id) > 0;
        case Mode::Lookup: return probe_(id);
    }
    return true;
}

namespace {

struct Checker {
    const Model& model;
    const ItemCatalog& catalog;
    ValidationReport report;

    void add(const char* rule, FindingSeverity sev, std::size_t decl, const std::string& msg) {
        report.findings.push_back({rule, sev, msg, decl});
    }

    void run() {
        duplicate_names();
        links();
        blocks();
        catalog_items();
        cycles("VR11", LinkKind::SubConstructorOf, "subconstructor");
        cycles("VR12", LinkKind::PartOf, "part-of");
        tc_instantiations();
    }

    // VR01: constructor names must be unique
    void duplicate_names() {
        std::map<std::string, std::size_t> seen;
        for (std::size_t i = 0; i < model.declarations.size(); ++i) {
            const auto* c = std::get_if<Constructor>(&model.declarations[i]);
            if (!c) continue;
            auto [it, fresh] = seen.emplace(c->name.name, i);
            if (!fresh)
                add("VR01", FindingSeverity::Error, i,
                    "duplicate constructor name '" + c->name.name + "'");
        }
    }

    // VR02 resolution, VR03 instance-of typing, VR04 subconstructor kinds
    void links() {
        for (std::size_t i = 0; i < model.declarations.size(); ++i) {
            const auto* l = std::get_if<Link>(&model.declarations[i]);
            if (!l) continue;
            const Constructor* from = model.find_constructor(l->from.name);
            const Constructor* to = model.find_constructor(l->to.name);
            bool resolved = true;
            for (const auto& [end, c] : {std::pair{&l->from, from}, std::pair{&l->to, to}}) {
                if (!c) {
                    add("VR02", FindingSeverity::Error, i,
                        "link endpoint '" + end->name + "' is not a declared constructor");
                    resolved = false;
                }
            }
            if (!resolved) continue;
            if (l->kind == LinkKind::InstanceOf) {
                if (from->kind != ConstructorKind::Instance || to->kind != ConstructorKind::Type)
                    add("VR03", FindingSeverity::Warning, i,
                        "InstanceOf expects an instance constructor as source and a type "
                        "constructor as target ('" +
                            l->from.name + "' -> '" + l->to.name + "')");
            }
            if (l->kind == LinkKind::SubConstructorOf && from->kind != to->kind)
                add("VR04", FindingSeverity::Error, i,
                    "SubConstructorOf endpoints must be the same kind of constructor ('" +
                        l->from.name + "' -> '" + l->to.name + "')");
        }
    }

    // VR05 variable agreement, VR06 mandatory declared, VR07 instantiation
    // type is a filler, VR08 join homogeneity, VR10 instance constructors
    // carry an instantiation
    void blocks() {
        for (std::size_t i = 0; i < model.declarations.size(); ++i) {
            const auto* c = std::get_if<Constructor>(&model.declarations[i]);
            if (!c) continue;
            std::size_t totalInsts = 0;
            for (std::size_t bi = 0; bi < c->blocks.size(); ++bi) {
                const Block& b = c->blocks[bi];
                std::string where = "constructor '" + c->name.name + "' block " +
                                    std::to_string(bi + 1);
                if (b.predicate.var1 == b.predicate.var2 ||
                    b.role1.var != b.predicate.var1 || b.role2.var != b.predicate.var2)
                    add("VR05", FindingSeverity::Error, i,
                        where + ": role variables must match the two distinct predicate variables");
                for (const auto& m : b.mandatories)
                    if (m != b.role1.var && m != b.role2.var)
                        add("VR06", FindingSeverity::Error, i,
                            where + ": mandatory role '" + m.name +
                                "' is not declared in this block");
                for (const auto& inst : b.instantiations) {
                    ++totalInsts;
                    if (inst.typeItem != b.role1.filler && inst.typeItem != b.role2.filler)
                        add("VR07", FindingSeverity::Warning, i,
                            where + ": instantiated type " + to_string(inst.typeItem) +
                                " is not a role filler in this block");
                }
                for (const auto& j : b.joins)
                    if (j.left.kind != j.right.kind)
                        add("VR08", FindingSeverity::Error, i,
                            where + ": join must combine two Q items or two P items");
            }
            if (c->kind == ConstructorKind::Instance && totalInsts == 0)
                add("VR10", FindingSeverity::Error, i,
                    "instance constructor '" + c->name.name + "' has no instantiation");
        }
    }

    // VR09: every referenced item must exist in the catalog
    void catalog_items() {
        if (catalog.mode() == ItemCatalog::Mode::OpenWorld) return;
        for (std::size_t i = 0; i < model.declarations.size(); ++i) {
            const auto* c = std::get_if<Constructor>(&model.declarations[i]);
            if (!c) continue;
            std::set<ItemId> missing;
            auto probe = [&](const ItemId& id) {
                if (!catalog.contains(id)) missing.insert(id);
            };
            for (const Block& b : c->blocks) {
                probe(b.predicate.pitem);
                for (const RoleDecl* r : {&b.role1, &b.role2}) {
                    probe(r->filler);
                    if (r->name) probe(*r->name);
                    if (r->constraint)
                        for (const auto& vi : r->constraint->items)
                            if (const auto* item = std::get_if<ItemValue>(&vi)) probe(item->item);
                }
                for (const auto& f : b.functions) {
                    probe(f.zitem);
                    for (const auto& a : f.args) probe(a);
                    if (f.constraint)
                        for (const auto& vi : f.constraint->items)
                            if (const auto* item = std::get_if<ItemValue>(&vi)) probe(item->item);
                }
                for (const auto& j : b.joins) {
                    probe(j.left);
                    probe(j.right);
                }
                for (const auto& inst : b.instantiations) {
                    probe(inst.typeItem);
                    probe(inst.instanceItem);
                }
            }
            for (const auto& id : missing)
                add("VR09", FindingSeverity::Error, i,
                    "constructor '" + c->name.name + "' references unknown item " + to_string(id));
        }
    }

    // VR11 / VR12: the named link relation must be acyclic
    void cycles(const char* rule, LinkKind kind, const std::string& what) {
        std::map<std::string, std::vector<std::string>> edges;
        std::map<std::string, std::size_t> firstDecl;
        for (std::size_t i = 0; i < model.declarations.size(); ++i) {
            const auto* l = std::get_if<Link>(&model.declarations[i]);
            if (!l || l->kind != kind) continue;
            edges[l->from.name].push_back(l->to.name);
            firstDecl.emplace(l->from.name, i);
        }
        std::set<std::string> done, onPath;
        std::function<bool(const std::string&)> dfs = [&](const std::string& n) {
            if (onPath.count(n)) return true;
            if (done.count(n)) return false;
            onPath.insert(n);
            auto it = edges.find(n);
            if (it != edges.end())
                for (const auto& next : it->second)
                    if (dfs(next)) return true;
            onPath.erase(n);
            done.insert(n);
            return false;
        };
        for (const auto& [node, _] : edges) {
            onPath.clear();
            if (!done.count(node) && dfs(node)) {
                add(rule, FindingSeverity::Error, firstDecl[node],
                    "the " + what + " links form a cycle through '" + node + "'");
                return;  // one finding per relation is enough
            }
        }
    }

    // VR13: instantiations inside a type constructor are legal but unusual
    void tc_instantiations() {
        for (std::size_t i = 0; i < model.declarations.size(); ++i) {
            const auto* c = std::get_if<Constructor>(&model.declarations[i]);
            if (!c || c->kind != ConstructorKind::Type) continue;
            for (const Block& b : c->blocks)
                if (!b.instantiations.empty()) {
                    add("VR13", FindingSeverity::Info, i,
                        "type constructor '" + c->name.name +
                            "' carries instantiations; consider an instance constructor");
                    break;
                }
        }
    }
};

}  // namespace

ValidationReport validate(const Model& model, const ItemCatalog& catalog) {
    Checker ch{model, catalog, {}};
    ch.run();
    return ch.report;
}

std::string to_string(const Finding& f) {
    const char* sev = f.severity == FindingSeverity::Error     ? "error"
                      : f.severity == FindingSeverity::Warning ? "warning"
                                                               : "info";
    std::string out = f.rule + " " + sev + ": " + f.message;
    if (f.declIndex) out += " (declaration " + std::to_string(*f.declIndex + 1) + ")";
    return out;
}

}  // namespace cosmo
