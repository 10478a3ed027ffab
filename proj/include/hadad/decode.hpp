#pragma once

#include <vector>

#include "hadad/atom.hpp"
#include "hadad/catalog.hpp"
#include "hadad/expr.hpp"

namespace hadad {

// Rebuilds the expression a subplan describes, rooted at the head term. Each
// term is produced by a name atom (leaf, constant, or view reference) or by
// an operator atom; producers are tried name-first, then in lexicographic
// order, skipping cyclic choices.
NodeId decode_candidate(ExprArena& arena, const Symbols& sym,
                        const std::vector<Atom>& atoms, TermId head,
                        const Catalog& catalog);

}
