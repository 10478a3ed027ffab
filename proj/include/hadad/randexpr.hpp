#pragma once

#include <random>
#include <vector>

#include "hadad/catalog.hpp"
#include "hadad/expr.hpp"

namespace hadad {

struct RandExprOptions {
    int steps = 16;
    int max_depth = 4;
    // Operator menu; empty selects a default mix that is safe to evaluate
    // on the tagged random instances (no elementwise division, no
    // decompositions that need structured inputs).
    std::vector<Op> ops;
};

// Builds a random well-shaped expression over the catalog leaves. Operands
// are drawn from a growing pool of subexpressions, so repeated calls with
// one arena share structure. Deterministic for a fixed rng state.
NodeId random_expression(ExprArena& arena, const Catalog& catalog, std::mt19937_64& rng,
                         const RandExprOptions& opt = {});

}
