#include "cosmo/algebra.hpp"

#include <deque>
#include <set>

namespace cosmo {

Constructor generalize(const Constructor& c) {
    if (c.kind == ConstructorKind::Type) throw AlreadyType(c.name);
    Constructor out = c;
    out.kind = ConstructorKind::Type;
    out.name.name += "_gen";
    for (Block& block : out.blocks) block.instantiations.clear();
    return out;
}

Constructor instantiate(const Constructor& c, const BindingSet& bindings) {
    if (c.kind == ConstructorKind::Instance) throw AlreadyInstance(c.name);
    if (bindings.empty()) throw EmptyBindings();
    Constructor out = c;
    out.kind = ConstructorKind::Instance;
    out.name.name += "_inst";
    for (const auto& [type, instance] : bindings) {
        bool bound = false;
        for (Block& block : out.blocks) {
            if (block.role1.filler != type && block.role2.filler != type) continue;
            block.instantiations.push_back({type, instance});
            bound = true;
        }
        if (!bound) throw UnboundType(type);
    }
    return out;
}

void SubclassTable::add(const ItemId& sub, const ItemId& super) {
    edges_[sub].push_back(super);
}

bool SubclassTable::narrower_eq(const ItemId& a, const ItemId& b) const {
    if (a == b) return true;
    std::deque<ItemId> queue = {a};
    std::set<ItemId> seen;
    while (!queue.empty()) {
        ItemId cur = queue.front();
        queue.pop_front();
        if (!seen.insert(cur).second) continue;
        if (cur == b) return true;
        if (auto it = edges_.find(cur); it != edges_.end())
            queue.insert(queue.end(), it->second.begin(), it->second.end());
    }
    return false;
}

SubclassTable SubclassTable::from_graph(const KnowledgeGraph& g) {
    SubclassTable table;
    for (const auto& t : g.triples) {
        if (t.predicate != wd::subclass_of) continue;
        if (const auto* item = std::get_if<ItemId>(&t.object)) table.add(t.subject, *item);
    }
    return table;
}

namespace {

/// True when every value admitted by `specific` is admitted by `general`.
bool alt_covered(const ValueItem& specific, const ValueItem& general,
                 const SubclassTable& subs) {
    if (const auto* st = std::get_if<TextValue>(&specific)) {
        const auto* gt = std::get_if<TextValue>(&general);
        return gt && gt->text == st->text;
    }
    if (const auto* si = std::get_if<ItemValue>(&specific)) {
        const auto* gi = std::get_if<ItemValue>(&general);
        return gi && subs.narrower_eq(si->item, gi->item);
    }
    auto admits = [](const ValueItem& vi, double n) {
        if (const auto* num = std::get_if<NumberValue>(&vi)) return n == num->value;
        if (const auto* range = std::get_if<RangeValue>(&vi))
            return range->lo <= n && n <= range->hi;
        if (const auto* cmp = std::get_if<ComparisonValue>(&vi)) {
            switch (cmp->op) {
                case CmpOp::Lt: return n < cmp->bound;
                case CmpOp::Le: return n <= cmp->bound;
                case CmpOp::Gt: return n > cmp->bound;
                case CmpOp::Ge: return n >= cmp->bound;
            }
        }
        return false;
    };
    if (const auto* sn = std::get_if<NumberValue>(&specific)) return admits(general, sn->value);
    if (const auto* sr = std::get_if<RangeValue>(&specific)) {
        // An interval is covered when general admits both endpoints and is
        // itself an interval (number/range/comparison sets are convex).
        if (std::holds_alternative<NumberValue>(general)) return sr->lo == sr->hi && admits(general, sr->lo);
        return admits(general, sr->lo) && admits(general, sr->hi);
    }
    if (const auto* sc = std::get_if<ComparisonValue>(&specific)) {
        const auto* gc = std::get_if<ComparisonValue>(&general);
        if (!gc) return false;  // only another half-line can cover a half-line
        bool sLess = sc->op == CmpOp::Lt || sc->op == CmpOp::Le;
        bool gLess = gc->op == CmpOp::Lt || gc->op == CmpOp::Le;
        if (sLess != gLess) return false;
        if (sLess) {
            // {v < b} or {v <= b} inside {v < B} / {v <= B}
            if (gc->op == CmpOp::Lt && sc->op == CmpOp::Le) return sc->bound < gc->bound;
            return sc->bound <= gc->bound;
        }
        if (gc->op == CmpOp::Gt && sc->op == CmpOp::Ge) return sc->bound > gc->bound;
        return sc->bound >= gc->bound;
    }
    return false;
}

bool constraint_covered(const std::optional<ValueConstraint>& general,
                        const std::optional<ValueConstraint>& specific,
                        const SubclassTable& subs) {
    if (!general) return true;  // unconstrained admits anything
    if (!specific) return false;
    for (const ValueItem& s : specific->items) {
        bool covered = false;
        for (const ValueItem& g : general->items)
            if (alt_covered(s, g, subs)) {
                covered = true;
                break;
            }
        if (!covered) return false;
    }
    return true;
}

bool role_covered(const RoleDecl& general, const RoleDecl& specific,
                  const SubclassTable& subs) {
    if (!subs.narrower_eq(specific.filler, general.filler)) return false;
    return constraint_covered(general.constraint, specific.constraint, subs);
}

bool block_covered(const Block& general, const Block& specific, const SubclassTable& subs) {
    // the specific predicate must be the general one or a predicate the
    // general block's joins widen it to
    if (specific.predicate.pitem != general.predicate.pitem) {
        bool joined = false;
        for (const JoinDecl& j : general.joins) {
            if (j.left.kind != ItemKind::P || j.right.kind != ItemKind::P) continue;
            joined = (j.left == general.predicate.pitem && j.right == specific.predicate.pitem) ||
                     (j.right == general.predicate.pitem && j.left == specific.predicate.pitem);
            if (joined) break;
        }
        if (!joined) return false;
    }
    if (!role_covered(general.role1, specific.role1, subs)) return false;
    if (!role_covered(general.role2, specific.role2, subs)) return false;
    for (const FunctionDecl& fn : general.functions) {
        bool found = false;
        for (const FunctionDecl& other : specific.functions)
            if (other.zitem == fn.zitem && other.args == fn.args) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

}  // namespace

bool subsumes(const Constructor& general, const Constructor& specific,
              const SubclassTable& subclasses) {
    for (const Block& g : general.blocks) {
        bool matched = false;
        for (const Block& s : specific.blocks)
            if (block_covered(g, s, subclasses)) {
                matched = true;
                break;
            }
        if (!matched) return false;
    }
    return true;
}

namespace {

void rename_var(LocalVar& var, const std::map<std::string, std::string>& renamings) {
    auto it = renamings.find(var.name);
    if (it != renamings.end()) var.name = it->second;
}

}  // namespace

MergeResult merge(const Constructor& a, const Constructor& b, const std::string& newName) {
    std::set<std::string> used;
    for (const Block& block : a.blocks) {
        used.insert(block.role1.var.name);
        used.insert(block.role2.var.name);
    }

    MergeResult result;
    for (const Block& block : b.blocks)
        for (const LocalVar* var : {&block.role1.var, &block.role2.var}) {
            if (result.renamings.count(var->name) > 0) continue;
            if (used.count(var->name) == 0) {
                used.insert(var->name);
                continue;
            }
            int suffix = 2;
            std::string candidate;
            do {
                candidate = var->name + "_" + std::to_string(suffix);
                ++suffix;
            } while (used.count(candidate) > 0);
            used.insert(candidate);
            result.renamings[var->name] = candidate;
        }

    Constructor merged;
    merged.kind = (a.kind == ConstructorKind::Instance || b.kind == ConstructorKind::Instance)
                      ? ConstructorKind::Instance
                      : ConstructorKind::Type;
    merged.name = LocalVar{newName};
    merged.blocks = a.blocks;
    for (Block block : b.blocks) {
        rename_var(block.predicate.var1, result.renamings);
        rename_var(block.predicate.var2, result.renamings);
        rename_var(block.role1.var, result.renamings);
        rename_var(block.role2.var, result.renamings);
        for (LocalVar& mand : block.mandatories) rename_var(mand, result.renamings);
        merged.blocks.push_back(std::move(block));
    }
    result.constructor = std::move(merged);
    return result;
}

}  // namespace cosmo
