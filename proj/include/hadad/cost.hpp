#pragma once

#include <map>
#include <vector>

#include "hadad/catalog.hpp"
#include "hadad/expr.hpp"

namespace hadad {

enum class Estimator { Naive, Mnc };

struct SparsityInput {
    Shape shape;
    double sparsity = 1.0;
};

// Worst-case output sparsity of one operator given input shapes and sparsities.
double naive_sparsity(Op op, const std::vector<SparsityInput>& inputs, Shape out);

struct CostEstimate {
    double total = 0.0;
    // Estimated stored entries per distinct node. Scalars count one entry.
    std::map<NodeId, double> per_node;
    bool saturated = false;
};

// Sum of estimated sizes of the intermediates of the expression DAG: every
// distinct node except the root and the leaves. Views are leaves; their
// sparsity is derived from the defining expression.
CostEstimate estimate_cost(const ExprArena& arena, NodeId root, const Catalog& catalog,
                           Estimator estimator = Estimator::Naive);

double expression_cost(const ExprArena& arena, NodeId root, const Catalog& catalog,
                       Estimator estimator = Estimator::Naive);

}
