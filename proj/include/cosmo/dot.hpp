#ifndef COSMO_DOT_HPP
#define COSMO_DOT_HPP

#include <string>

#include "cosmo/core.hpp"

namespace cosmo {

/// Graphviz rendering of a model: one shaded node per constructor, one node
/// per block predicate, deduplicated item nodes, diamond nodes for joins,
/// and distinct edge styles per link kind. Output is deterministic.
std::string export_dot(const Model& model);

}  // namespace cosmo

#endif
