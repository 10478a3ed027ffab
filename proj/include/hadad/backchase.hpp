#pragma once

#include <string>
#include <vector>

#include "hadad/chase.hpp"

namespace hadad {

// A query chased to fixpoint, with every surviving atom tagged by a distinct
// base term. Derivations made later can then name the subset of the plan
// they were read from.
struct UniversalPlan {
    ChaseInstance inst;
    CQ query;
    std::vector<std::size_t> base;  // base term p -> atom index at tag time
    ChaseStats stats;
};

UniversalPlan build_universal_plan(Symbols& sym, const CQ& q,
                                   const std::vector<Constraint>& constraints,
                                   StepBudget budget = {});

// Total size of the inputs a subplan materializes: for each distinct class
// produced by its operator atoms (query head excluded), rows * cols from the
// plan's size atoms. Classes without known dimensions count zero, scalar
// producers count one. Monotone under subplan inclusion.
double subplan_cost(const UniversalPlan& plan, const Monomial& m);

struct BackchaseOptions {
    StepBudget budget;
    ProvenanceLimits limits;
    bool prune = false;
    // Upper cost bound seeding the pruner; subplans costing more are dropped.
    // Negative means unbounded until the first complete answer tightens it.
    double threshold = -1.0;
    bool trace = false;
};

// A minimal subplan answering the query: the base atoms it reads, in their
// final merged form, and the class the query head landed on.
struct PlanCandidate {
    Monomial base;
    std::vector<Atom> atoms;
    TermId head = 0;
};

struct BackchaseResult {
    std::vector<PlanCandidate> candidates;
    ChaseStats stats;
    double threshold = -1.0;
    std::vector<std::string> trace;
};

// Re-runs the dependencies over the plan, conjoining the provenance of each
// premise image and disjoining the result into every atom the conclusion
// already maps onto. Complete query matches then yield candidate subplans,
// each re-chased from scratch to confirm it still answers the query.
BackchaseResult run_backchase(UniversalPlan& plan,
                              const std::vector<Constraint>& constraints,
                              const BackchaseOptions& opts = {});

}
