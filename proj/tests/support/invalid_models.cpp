#include "support/invalid_models.hpp"

#include <stdexcept>
#include <utility>

#include "cosmo/syntax.hpp"

namespace support {
namespace {

using namespace cosmo;

Model parsed(const std::string& text) {
    ParseResult r = parse(text);
    if (!r.ok()) throw std::logic_error("invalid_models: fixture text failed to parse");
    return std::move(*r.model);
}

/// A well-formed one-block constructor: P40(r1, r2), r1:Q5, r2:Q7.
Constructor plain(ConstructorKind kind, std::string name) {
    Constructor c;
    c.kind = kind;
    c.name = {std::move(name)};
    Block b;
    b.predicate = {ItemId{ItemKind::P, 40}, {"r1"}, {"r2"}};
    b.role1 = {{"r1"}, std::nullopt, RoleKind::ObjectType, ItemId{ItemKind::Q, 5}, std::nullopt};
    b.role2 = {{"r2"}, std::nullopt, RoleKind::ObjectType, ItemId{ItemKind::Q, 7}, std::nullopt};
    c.blocks.push_back(std::move(b));
    return c;
}

constexpr const char* kPlainTc = "TC:C1(P40(r1, r2), r1:Q5, r2:Q7)\n";
constexpr const char* kPlainTc2 = "TC:C2(P40(r1, r2), r1:Q5, r2:Q7)\n";

}  // namespace

cosmo::ItemCatalog catalog_missing_q7566() {
    return ItemCatalog::from_lookup(
        [](const ItemId& id) { return id != ItemId{ItemKind::Q, 7566}; });
}

std::vector<RuleCase> rule_cases() {
    std::vector<RuleCase> out;

    // VR01: the same constructor name declared twice. The parser refuses
    // duplicate names, so the model is assembled directly.
    {
        Model m;
        m.declarations.emplace_back(plain(ConstructorKind::Type, "C1"));
        m.declarations.emplace_back(plain(ConstructorKind::Type, "C1"));
        out.push_back({"VR01", FindingSeverity::Error, std::move(m)});
    }

    // VR02: link endpoint that no declaration introduces.
    out.push_back({"VR02", FindingSeverity::Error,
                   parsed(std::string(kPlainTc) + "\nSubTC(C1, C9)\n")});

    // VR03: InstanceOf whose source is a type constructor.
    out.push_back({"VR03", FindingSeverity::Warning,
                   parsed(std::string(kPlainTc) + "\n" + kPlainTc2 + "\nInstOf(C2, C1)\n")});

    // VR04: SubConstructorOf across constructor kinds.
    out.push_back({"VR04", FindingSeverity::Error,
                   parsed(std::string(kPlainTc) +
                          "\nIC:C2(P40(r1, r2), r1:Q5, r2:Q7, Q5={Q42})\n\nSubTC(C2, C1)\n")});

    // VR05: role variable that is not a predicate variable. The parser
    // enforces agreement, so the mismatch is introduced after the fact.
    {
        Constructor c = plain(ConstructorKind::Type, "C1");
        c.blocks[0].role1.var = {"rX"};
        Model m;
        m.declarations.emplace_back(std::move(c));
        out.push_back({"VR05", FindingSeverity::Error, std::move(m)});
    }

    // VR06: mandatory role never declared in the block.
    out.push_back({"VR06", FindingSeverity::Error,
                   parsed("TC:C1(P40(r1, r2), r1:Q5, r2:Q7, IsMand(r9))\n")});

    // VR07: instantiated type that is not a role filler anywhere.
    out.push_back({"VR07", FindingSeverity::Warning,
                   parsed("IC:C2(P40(r1, r2), r1:Q5, r2:Q7, Q9={Q42})\n")});

    // VR08: join mixing a Q item with a P item.
    out.push_back({"VR08", FindingSeverity::Error,
                   parsed("TC:C1(P40(r1, r2), r1:Q5, r2:Q7, Join(Q5, P40))\n")});

    // VR09: referenced item missing from a closed catalog.
    out.push_back({"VR09", FindingSeverity::Error,
                   parsed("TC:C1(P40(r1, r2), r1:Q7566, r2:Q29514218)\n"),
                   catalog_missing_q7566()});

    // VR10: instance constructor without a single instantiation. The parser
    // demands one, so the constructor is assembled directly.
    {
        Model m;
        m.declarations.emplace_back(plain(ConstructorKind::Instance, "C2"));
        out.push_back({"VR10", FindingSeverity::Error, std::move(m)});
    }

    // VR11: subconstructor links forming a cycle.
    out.push_back({"VR11", FindingSeverity::Error,
                   parsed(std::string(kPlainTc) + "\n" + kPlainTc2 +
                          "\nSubTC(C1, C2)\n\nSubTC(C2, C1)\n")});

    // VR12: part-of link from a constructor to itself.
    out.push_back({"VR12", FindingSeverity::Error,
                   parsed(std::string(kPlainTc) + "\nPo(C1, C1)\n")});

    // VR13: type constructor carrying an instantiation (informational).
    out.push_back({"VR13", FindingSeverity::Info,
                   parsed("TC:C1(P40(r1, r2), r1:Q5, r2:Q7, Q5={Q42})\n")});

    return out;
}

}  // namespace support
