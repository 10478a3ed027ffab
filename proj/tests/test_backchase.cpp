#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "hadad/backchase.hpp"
#include "hadad/catalog.hpp"
#include "hadad/cost.hpp"
#include "hadad/encode.hpp"
#include "hadad/errors.hpp"
#include "hadad/parser.hpp"

using namespace hadad;

namespace {

MatrixDescriptor desc(const std::string& name, std::size_t r, std::size_t c) {
    MatrixDescriptor d;
    d.name = name;
    d.file = name;
    d.rows = r;
    d.cols = c;
    d.nnz = (double)r * (double)c;
    return d;
}

Catalog published_catalog() {
    Catalog cat;
    cat.add(desc("M", 50000, 100));
    cat.add(desc("N", 100, 50000));
    return cat;
}

struct Fixture {
    Symbols sym;
    ExprArena arena;
    Catalog cat = published_catalog();
    std::vector<Constraint> rules;
    EncodedQuery q;
    UniversalPlan plan;

    explicit Fixture(const std::string& text, StepBudget budget = {})
        : rules(load_pack(sym, "mmc")),
          q(encode_expression(sym, arena, parse_expression(text, arena, cat), cat)),
          plan(build_universal_plan(sym, q.query, rules, budget)) {}
};

// The multiplication atoms of a candidate with leaf terms swapped in for
// their classes, e.g. ("M", "N", "?") for M %*% N into an intermediate.
std::vector<std::array<std::string, 3>> mult_shapes(Fixture& f,
                                                    const PlanCandidate& c) {
    const ChaseInstance& inst = f.plan.inst;
    PredId mul = f.sym.preds.intern("multi_M", 3);
    auto label = [&](TermId t) -> std::string {
        TermId rep = inst.find(t);
        for (const auto& [name, term] : f.q.leaf_term)
            if (inst.find(term) == rep)
                return name;
        if (rep == inst.find(f.q.query.head.front()))
            return "root";
        return "?";
    };
    std::vector<std::array<std::string, 3>> out;
    for (const Atom& a : c.atoms)
        if (a.pred == mul)
            out.push_back({label(a.args[0]), label(a.args[1]), label(a.args[2])});
    std::sort(out.begin(), out.end());
    return out;
}

bool has_shape(Fixture& f, const PlanCandidate& c,
               const std::array<std::string, 3>& want) {
    auto shapes = mult_shapes(f, c);
    return std::find(shapes.begin(), shapes.end(), want) != shapes.end();
}

bool right_assoc(Fixture& f, const PlanCandidate& c) {
    return has_shape(f, c, {"N", "M", "?"}) && has_shape(f, c, {"M", "?", "root"}) &&
           !has_shape(f, c, {"M", "N", "?"});
}

bool left_assoc(Fixture& f, const PlanCandidate& c) {
    return has_shape(f, c, {"M", "N", "?"}) && has_shape(f, c, {"?", "M", "root"}) &&
           !has_shape(f, c, {"N", "M", "?"});
}

double min_cost(const UniversalPlan& plan, const std::vector<PlanCandidate>& cs) {
    double best = -1.0;
    for (const PlanCandidate& c : cs) {
        double v = subplan_cost(plan, c.base);
        if (best < 0.0 || v < best)
            best = v;
    }
    return best;
}

}

TEST_CASE("universal plan tags every surviving atom with its own base term") {
    Fixture f("M %*% (N %*% M)");
    REQUIRE(!f.plan.base.empty());
    CHECK(f.plan.base.size() == f.plan.inst.live_count());
    std::vector<bool> used(f.plan.base.size(), false);
    for (std::size_t i = 0; i < f.plan.inst.size(); ++i) {
        if (!f.plan.inst.live(i))
            continue;
        const Formula& g = f.plan.inst.formula(i);
        REQUIRE(g.monomials.size() == 1);
        REQUIRE(g.monomials[0].size() == 1);
        ProvTerm p = g.monomials[0][0];
        REQUIRE(p < f.plan.base.size());
        CHECK(f.plan.base[p] == i);
        CHECK(!used[p]);
        used[p] = true;
    }
    CHECK(!f.plan.stats.budget_exceeded);
}

TEST_CASE("empty query is rejected") {
    Symbols sym;
    CQ q;
    CHECK_THROWS_AS(build_universal_plan(sym, q, {}), EmptyPlan);
}

TEST_CASE("subplan cost sums distinct produced classes and skips the head") {
    Fixture f("M %*% (N %*% M)");
    const ChaseInstance& inst = f.plan.inst;
    PredId mul = f.sym.preds.intern("multi_M", 3);
    TermId m = inst.find(f.q.leaf_term.at("M"));
    TermId n = inst.find(f.q.leaf_term.at("N"));
    TermId head = inst.find(f.q.query.head.front());

    Monomial right, left;
    for (ProvTerm p = 0; p < f.plan.base.size(); ++p) {
        const Atom& a = inst.atom(inst.resolve(f.plan.base[p]));
        if (a.pred != mul)
            continue;
        TermId x = inst.find(a.args[0]);
        TermId y = inst.find(a.args[1]);
        TermId r = inst.find(a.args[2]);
        if (x == n && y == m)
            right.push_back(p);
        else if (x == m && r == head && y != n)
            right.push_back(p);
        else if (x == m && y == n)
            left.push_back(p);
        else if (y == m && r == head)
            left.push_back(p);
    }
    REQUIRE(right.size() == 2);
    REQUIRE(left.size() == 2);
    std::sort(right.begin(), right.end());
    std::sort(left.begin(), left.end());

    CHECK(subplan_cost(f.plan, right) == 100.0 * 100.0);
    CHECK(subplan_cost(f.plan, left) == 50000.0 * 50000.0);
    CHECK(subplan_cost(f.plan, monomial_union(right, left)) ==
          100.0 * 100.0 + 50000.0 * 50000.0);
    CHECK(subplan_cost(f.plan, {}) == 0.0);
}

TEST_CASE("backchase without pruning finds both multiplication orders") {
    Fixture f("M %*% (N %*% M)");
    BackchaseResult r = run_backchase(f.plan, f.rules, {});
    CHECK(!r.stats.budget_exceeded);
    REQUIRE(!r.candidates.empty());

    bool saw_right = false, saw_left = false;
    for (const PlanCandidate& c : r.candidates) {
        saw_right |= right_assoc(f, c);
        saw_left |= left_assoc(f, c);
    }
    CHECK(saw_right);
    CHECK(saw_left);
    CHECK(min_cost(f.plan, r.candidates) == 100.0 * 100.0);
}

TEST_CASE("pruning at the original cost keeps only the cheap order") {
    Fixture unpruned("M %*% (N %*% M)");
    BackchaseResult full = run_backchase(unpruned.plan, unpruned.rules, {});

    Fixture f("M %*% (N %*% M)");
    double original = expression_cost(f.arena, parse_expression("M %*% (N %*% M)", f.arena, f.cat),
                                      f.cat);
    REQUIRE(original == 100.0 * 100.0);

    BackchaseOptions opts;
    opts.prune = true;
    opts.threshold = original;
    BackchaseResult r = run_backchase(f.plan, f.rules, opts);

    REQUIRE(!r.candidates.empty());
    bool saw_right = false;
    for (const PlanCandidate& c : r.candidates) {
        CHECK(!has_shape(f, c, {"M", "N", "?"}));
        saw_right |= right_assoc(f, c);
        CHECK(subplan_cost(f.plan, c.base) <= original);
    }
    CHECK(saw_right);
    CHECK(r.threshold == original);
    CHECK(min_cost(f.plan, r.candidates) == min_cost(unpruned.plan, full.candidates));
}

TEST_CASE("a left-leaning chain is rediscovered from the expensive side") {
    Fixture f("(M %*% N) %*% M");
    BackchaseResult r = run_backchase(f.plan, f.rules, {});
    bool saw_right = false;
    for (const PlanCandidate& c : r.candidates)
        saw_right |= right_assoc(f, c);
    CHECK(saw_right);
    CHECK(min_cost(f.plan, r.candidates) == 100.0 * 100.0);
}

TEST_CASE("candidates re-chased from their own atoms answer the query") {
    Fixture f("M %*% (N %*% M)");
    BackchaseResult r = run_backchase(f.plan, f.rules, {});
    TermId head = f.plan.inst.find(f.q.query.head.front());
    for (const PlanCandidate& c : r.candidates) {
        CHECK(c.head == head);
        ChaseInstance probe(f.sym);
        for (const Atom& a : c.atoms)
            probe.add(a);
        chase_to_fixpoint(probe, f.rules);
        CHECK(query_matches(probe, f.q.query, head));
    }
}

TEST_CASE("trace lines name the fired constraint and its conjuncts") {
    Fixture f("M %*% (N %*% M)");
    BackchaseOptions opts;
    opts.trace = true;
    BackchaseResult r = run_backchase(f.plan, f.rules, opts);
    REQUIRE(!r.trace.empty());
    REQUIRE(r.stats.steps == r.trace.size());
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        const std::string& line = r.trace[i];
        CHECK(line.rfind("STEP " + std::to_string(i + 1) + " ", 0) == 0);
        bool named = line.find("la_prop:") != std::string::npos ||
                     line.find("mmc_m:") != std::string::npos;
        CHECK(named);
        CHECK(line.find("p") != std::string::npos);
    }
}

TEST_CASE("step budget interrupts the backchase but keeps partial results") {
    Fixture f("M %*% (N %*% M)");
    BackchaseOptions opts;
    opts.budget.max_steps = 3;
    BackchaseResult r = run_backchase(f.plan, f.rules, opts);
    CHECK(r.stats.budget_exceeded);
    CHECK(r.stats.steps <= 3);
    bool saw_identity = false;
    for (const PlanCandidate& c : r.candidates)
        saw_identity |= right_assoc(f, c);
    CHECK(saw_identity);
}

TEST_CASE("backchase output is reproducible") {
    auto fingerprints = [](const Fixture& f, const std::vector<PlanCandidate>& cs) {
        std::vector<std::string> out;
        for (const PlanCandidate& c : cs)
            out.push_back(show_atoms(f.sym, c.atoms) + " | " + show_formula({{c.base}}));
        return out;
    };
    Fixture a("M %*% (N %*% M)");
    Fixture b("M %*% (N %*% M)");
    BackchaseResult ra = run_backchase(a.plan, a.rules, {});
    BackchaseResult rb = run_backchase(b.plan, b.rules, {});
    CHECK(fingerprints(a, ra.candidates) == fingerprints(b, rb.candidates));
    CHECK(ra.threshold == rb.threshold);
}
