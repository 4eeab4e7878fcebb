#include "cosmo/dot.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace cosmo {

namespace {

std::string sanitize(const std::string& name) {
    std::string out;
    for (char ch : name)
        out += (std::isalnum(static_cast<unsigned char>(ch)) != 0) ? ch : '_';
    return out;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

class DotWriter {
public:
    explicit DotWriter(std::ostream& os) : os_(os) {}

    std::string item_node(const ItemId& item) {
        std::string id = "i_" + to_string(item);
        if (declaredItems_.insert(item).second)
            os_ << "  " << id << " [label=" << quote(to_string(item))
                << ", shape=ellipse];\n";
        return id;
    }

    std::string constructor_node(const std::string& name) {
        std::string id = "c_" + sanitize(name);
        return id;
    }

    void declare_constructor(const Constructor& c) {
        const char* fill = c.kind == ConstructorKind::Type ? "#d6e4f0" : "#f0e4d6";
        os_ << "  " << constructor_node(c.name.name) << " [label=" << quote(c.name.name)
            << ", shape=box, style=filled, fillcolor=" << quote(fill) << "];\n";
    }

    void write_constructor(const Constructor& c) {
        declare_constructor(c);
        std::string cnode = constructor_node(c.name.name);
        for (std::size_t b = 0; b < c.blocks.size(); ++b) {
            const Block& block = c.blocks[b];
            std::string bnode = cnode + "_b" + std::to_string(b);
            os_ << "  " << bnode << " [label=" << quote(to_string(block.predicate.pitem))
                << ", shape=box, style=rounded];\n";
            os_ << "  " << cnode << " -> " << bnode << " [label=" << quote("block " +
                std::to_string(b + 1)) << "];\n";

            for (const RoleDecl* role : {&block.role1, &block.role2}) {
                std::string label = role->var.name;
                if (role->name) label += " [" + to_string(*role->name) + "]";
                bool mandatory = false;
                for (const LocalVar& m : block.mandatories)
                    if (m == role->var) mandatory = true;
                std::string target = item_node(role->filler);
                os_ << "  " << bnode << " -> " << target << " [label=" << quote(label);
                if (mandatory) os_ << ", penwidth=2";
                if (role->constraint) os_ << ", arrowhead=normal, color=" << quote("#7a4a9e");
                os_ << "];\n";
            }

            for (std::size_t f = 0; f < block.functions.size(); ++f) {
                const FunctionDecl& fn = block.functions[f];
                std::string fnode = bnode + "_f" + std::to_string(f);
                os_ << "  " << fnode << " [label=" << quote(to_string(fn.zitem))
                    << ", shape=hexagon];\n";
                os_ << "  " << bnode << " -> " << fnode << " [style=dashed];\n";
                for (const ItemId& arg : fn.args)
                    os_ << "  " << fnode << " -> " << item_node(arg) << " [style=dashed];\n";
            }

            for (std::size_t j = 0; j < block.joins.size(); ++j) {
                const JoinDecl& join = block.joins[j];
                std::string jnode = bnode + "_j" + std::to_string(j);
                os_ << "  " << jnode << " [label=" << quote("Join")
                    << ", shape=diamond];\n";
                os_ << "  " << bnode << " -> " << jnode << ";\n";
                os_ << "  " << jnode << " -> " << item_node(join.left) << ";\n";
                os_ << "  " << jnode << " -> " << item_node(join.right) << ";\n";
            }

            for (const Instantiation& inst : block.instantiations)
                os_ << "  " << bnode << " -> " << item_node(inst.instanceItem)
                    << " [label=" << quote(to_string(inst.typeItem) + " =")
                    << ", style=dotted];\n";
        }
    }

    void write_link(const Link& link) {
        std::string from = constructor_node(link.from.name);
        std::string to = constructor_node(link.to.name);
        switch (link.kind) {
            case LinkKind::SubConstructorOf:
                os_ << "  " << from << " -> " << to
                    << " [label=" << quote("subconstructor of") << ", style=bold];\n";
                break;
            case LinkKind::InstanceOf:
                os_ << "  " << from << " -> " << to << " [label=" << quote("instance of")
                    << ", style=dashed];\n";
                break;
            case LinkKind::PartOf:
                os_ << "  " << from << " -> " << to << " [label=" << quote("part of")
                    << ", arrowhead=odiamond];\n";
                break;
        }
    }

private:
    std::ostream& os_;
    std::set<ItemId> declaredItems_;
};

}  // namespace

std::string export_dot(const Model& model) {
    std::ostringstream os;
    os << "digraph constructors {\n";
    os << "  rankdir=LR;\n";
    os << "  node [fontname=" << quote("Helvetica") << "];\n";
    os << "  edge [fontname=" << quote("Helvetica") << ", fontsize=10];\n";
    DotWriter writer(os);
    for (const Declaration& decl : model.declarations)
        if (const auto* c = std::get_if<Constructor>(&decl)) writer.write_constructor(*c);
    for (const Declaration& decl : model.declarations)
        if (const auto* link = std::get_if<Link>(&decl)) writer.write_link(*link);
    os << "}\n";
    return os.str();
}

}  // namespace cosmo
