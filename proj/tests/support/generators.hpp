#ifndef COSMO_TESTS_GENERATORS_HPP
#define COSMO_TESTS_GENERATORS_HPP

#include <random>
#include <string>
#include <vector>

#include "cosmo/algebra.hpp"
#include "cosmo/core.hpp"
#include "cosmo/eval.hpp"

// Random-input machinery for the property tests and the acceptance gate.
// All generation is deterministic for a given engine state.
//
// Generated models are canonical: unique constructor names, auto-counter
// role variables, ObjectType roles only (the notations share that subset),
// and instantiations homed to the first block whose fillers contain their
// type item -- exactly the placement the parser produces -- so a
// serialize/parse round trip must reproduce the value bit for bit.

namespace support {

using Rng = std::mt19937_64;

struct GenOptions {
    int maxConstructors = 3;
    int maxBlocks = 3;
    bool withLinks = true;
    bool withRoleNames = true;
    bool withConstraints = true;
    bool withFunctions = true;
    bool withJoins = true;
    bool withMandatories = true;
    bool withInstantiations = true;
    // Draw items from the small shared pool the graph generator uses, so
    // evaluation has a realistic hit rate.
    bool sharedPools = false;
};

cosmo::ItemId random_qitem(Rng& rng, const GenOptions& opts);
cosmo::ItemId random_pitem(Rng& rng, const GenOptions& opts);
cosmo::ValueConstraint random_constraint(Rng& rng, const GenOptions& opts);

cosmo::Constructor random_constructor(Rng& rng, const std::string& name,
                                      const GenOptions& opts = {});
cosmo::Model random_model(Rng& rng, const GenOptions& opts = {});

/// Graph over the shared pools; at most maxTriples triples plus label,
/// numeric-value and acyclic part-of records.
cosmo::KnowledgeGraph random_graph(Rng& rng, int maxTriples = 50);

/// Subclass forest over the shared Q pool (edges child -> parent).
cosmo::SubclassTable random_subclasses(Rng& rng, std::vector<std::pair<cosmo::ItemId, cosmo::ItemId>>* edges = nullptr);

/// Rewrites `c` into a constructor that subsumes-covers it from below:
/// fillers narrowed along the table's edges, constraints tightened or
/// added, extra functions and blocks appended.
cosmo::Constructor specialize(Rng& rng, const cosmo::Constructor& c,
                              const std::vector<std::pair<cosmo::ItemId, cosmo::ItemId>>& subclassEdges);

}  // namespace support

#endif
