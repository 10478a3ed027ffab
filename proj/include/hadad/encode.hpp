#pragma once

#include <unordered_map>
#include <vector>

#include "hadad/atom.hpp"
#include "hadad/catalog.hpp"
#include "hadad/constraint.hpp"
#include "hadad/expr.hpp"

namespace hadad {

// Relational image of an expression: one operator atom per operator node, a
// name atom per distinct leaf, and a size atom for every distinct node. The
// head is the root's term.
struct EncodedQuery {
    CQ query;
    std::unordered_map<NodeId, TermId> node_term;
    std::unordered_map<std::string, TermId> leaf_term;
};

EncodedQuery encode_expression(Symbols& sym, const ExprArena& arena, NodeId root,
                               const Catalog& catalog);

// Two rules per registered view: body-to-name and name-to-body.
std::vector<Constraint> view_constraints(Symbols& sym, const ExprArena& arena,
                                         const Catalog& catalog);

}
