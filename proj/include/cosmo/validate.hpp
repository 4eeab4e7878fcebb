#ifndef COSMO_VALIDATE_HPP
#define COSMO_VALIDATE_HPP

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cosmo/core.hpp"

namespace cosmo {

enum class FindingSeverity { Error, Warning, Info };

struct Finding {
    std::string rule;  // VR01..VR13
    FindingSeverity severity = FindingSeverity::Error;
    std::string message;
    std::optional<std::size_t> declIndex;  // offending declaration, when known
    bool operator==(const Finding&) const = default;
};

struct ValidationReport {
    std::vector<Finding> findings;

    /// Info findings do not affect validity.
    bool valid() const {
        for (const auto& f : findings)
            if (f.severity != FindingSeverity::Info) return false;
        return true;
    }
    std::vector<Finding> by_rule(const std::string& rule) const {
        std::vector<Finding> out;
        for (const auto& f : findings)
            if (f.rule == rule) out.push_back(f);
        return out;
    }
};

/// Where item existence checks (VR09) get their answers.
/// Open-world accepts everything; a file catalog lists known items one per
/// line; a lookup catalog delegates (e.g. to an endpoint probe).
class ItemCatalog {
public:
    enum class Mode { OpenWorld, File, Lookup };

    static ItemCatalog open_world();
    static ItemCatalog from_file(const std::string& path);  // throws Error on I/O or bad line
    static ItemCatalog from_lookup(std::function<bool(const ItemId&)> probe);

    bool contains(const ItemId& id) const;
    Mode mode() const { return mode_; }

private:
    Mode mode_ = Mode::OpenWorld;
    std::set<ItemId> items_;
    std::function<bool(const ItemId&)> probe_;
};

ValidationReport validate(const Model& model, const ItemCatalog& catalog = ItemCatalog::open_world());

std::string to_string(const Finding& f);

}  // namespace cosmo

#endif
