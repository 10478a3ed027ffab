#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "hadad/catalog.hpp"
#include "hadad/chase.hpp"
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

std::size_t live_with_pred(const ChaseInstance& inst, const std::string& pred) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < inst.size(); ++i)
        if (inst.live(i) &&
            inst.symbols().preds.info(inst.atom(i).pred).name == pred)
            ++n;
    return n;
}

std::vector<Atom> live_pred_atoms(const ChaseInstance& inst, const std::string& pred) {
    std::vector<Atom> out;
    for (std::size_t i = 0; i < inst.size(); ++i)
        if (inst.live(i) &&
            inst.symbols().preds.info(inst.atom(i).pred).name == pred)
            out.push_back(inst.atom(i));
    return out;
}

std::set<std::string> match_fingerprints(const std::vector<MatchResult>& matches,
                                         const Symbols& sym) {
    std::set<std::string> out;
    for (const MatchResult& m : matches) {
        std::string s;
        for (auto [v, t] : m.subst)
            s += sym.terms.show(v) + "=" + sym.terms.show(t) + ";";
        out.insert(s);
    }
    return out;
}

}

TEST_CASE("a dependency fires once and is then satisfied") {
    Symbols sym;
    auto rules = parse_constraints(sym, "name(m, f) -> tr(m, r1);", "t");
    ChaseInstance inst(sym);
    inst.add({sym.preds.intern("name", 2),
              {sym.terms.var("x"), sym.terms.name_const("M")}});

    ChaseStats stats = chase_to_fixpoint(inst, rules);
    CHECK(stats.steps == 1);
    CHECK(live_with_pred(inst, "tr") == 1);
    Atom t = live_pred_atoms(inst, "tr")[0];
    CHECK(sym.terms.is_null(t.args[1]));
    CHECK(sym.terms.generation(t.args[1]) == 1);

    ChaseStats again = chase_to_fixpoint(inst, rules);
    CHECK(again.steps == 0);
    CHECK(live_with_pred(inst, "tr") == 1);
}

TEST_CASE("an existing fact satisfies the dependency without firing") {
    Symbols sym;
    auto rules = parse_constraints(sym, "name(m, f) -> tr(m, r1);", "t");
    ChaseInstance inst(sym);
    TermId x = sym.terms.var("x");
    inst.add({sym.preds.intern("name", 2), {x, sym.terms.name_const("M")}});
    inst.add({sym.preds.intern("tr", 2), {x, sym.terms.var("y")}});

    ChaseStats stats = chase_to_fixpoint(inst, rules);
    CHECK(stats.steps == 0);
    CHECK(live_with_pred(inst, "tr") == 1);
}

TEST_CASE("equality merges cascade through dependent atoms") {
    Symbols sym;
    auto rules = parse_constraints(sym,
        "multi_M(a, b, r1), multi_M(a, b, r2) -> r1 = r2;\n"
        "tr(a, r1), tr(a, r2) -> r1 = r2;\n",
        "t");
    ChaseInstance inst(sym);
    PredId mul = sym.preds.intern("multi_M", 3);
    PredId tr = sym.preds.intern("tr", 2);
    TermId x = sym.terms.var("x"), y = sym.terms.var("y");
    TermId u = sym.terms.var("u"), v = sym.terms.var("v");
    TermId w = sym.terms.var("w"), z = sym.terms.var("z");
    inst.add({mul, {x, y, u}});
    inst.add({mul, {x, y, v}});
    inst.add({tr, {u, w}});
    inst.add({tr, {v, z}});

    chase_to_fixpoint(inst, rules);
    CHECK(live_with_pred(inst, "multi_M") == 1);
    CHECK(live_with_pred(inst, "tr") == 1);
    CHECK(inst.same(u, v));
    CHECK(inst.same(w, z));
}

TEST_CASE("inconsistent dimension claims are rejected") {
    Symbols sym;
    auto rules = parse_constraints(sym,
        "size(m, k1, z1), size(m, k2, z2) -> k1 = k2, z1 = z2;", "t");
    ChaseInstance inst(sym);
    PredId size = sym.preds.intern("size", 3);
    TermId x = sym.terms.var("x");
    inst.add({size, {x, sym.terms.dim_const(2), sym.terms.dim_const(3)}});
    inst.add({size, {x, sym.terms.dim_const(4), sym.terms.dim_const(3)}});
    CHECK_THROWS_AS(chase_to_fixpoint(inst, rules), InconsistentEGD);
}

TEST_CASE("equalities can pin a variable to a constant") {
    Symbols sym;
    auto rules = parse_constraints(sym,
        "Identity(i), size(i, k, k), trace(i, s) -> s = k;\n"
        "Identity(i), det(i, d) -> d = 1;\n",
        "t");
    ChaseInstance inst(sym);
    TermId t = sym.terms.var("t"), s = sym.terms.var("s"), d = sym.terms.var("d");
    inst.add({sym.preds.intern("Identity", 1), {t}});
    inst.add({sym.preds.intern("size", 3),
              {t, sym.terms.dim_const(7), sym.terms.dim_const(7)}});
    inst.add({sym.preds.intern("trace", 2), {t, s}});
    inst.add({sym.preds.intern("det", 2), {t, d}});

    chase_to_fixpoint(inst, rules);
    CHECK(inst.find(s) == sym.terms.dim_const(7));
    CHECK(inst.find(d) == sym.terms.dim_const(1));
}

TEST_CASE("invention depth grows along a chain and stops at the cap") {
    Symbols sym;
    auto rules = parse_constraints(sym, "step(a, b) -> step(b, c);", "t");
    ChaseInstance inst(sym);
    inst.add({sym.preds.intern("step", 2), {sym.terms.var("x0"), sym.terms.var("x1")}});

    StepBudget budget;
    budget.max_depth = 3;
    ChaseStats stats = chase_to_fixpoint(inst, rules, budget);
    CHECK(!stats.budget_exceeded);
    CHECK(live_with_pred(inst, "step") == 4);
    int deepest = 0;
    for (const Atom& a : live_pred_atoms(inst, "step"))
        deepest = std::max(deepest, sym.terms.generation(inst.find(a.args[1])));
    CHECK(deepest == 3);
}

TEST_CASE("the step budget interrupts and reports truncation") {
    Symbols sym;
    auto rules = parse_constraints(sym, "step(a, b) -> step(b, c);", "t");
    ChaseInstance inst(sym);
    inst.add({sym.preds.intern("step", 2), {sym.terms.var("x0"), sym.terms.var("x1")}});

    StepBudget budget;
    budget.max_steps = 2;
    budget.max_depth = 100;
    ChaseStats stats = chase_to_fixpoint(inst, rules, budget);
    CHECK(stats.budget_exceeded);
    CHECK(stats.steps == 2);
    CHECK(live_with_pred(inst, "step") == 3);
}

TEST_CASE("incremental matches plus earlier matches equal a fresh scan") {
    Symbols sym;
    ChaseInstance inst(sym);
    PredId mul = sym.preds.intern("multi_M", 3);
    PredId size = sym.preds.intern("size", 3);
    auto dim = [&](long long v) { return sym.terms.dim_const(v); };
    TermId t1 = sym.terms.var("t1"), t2 = sym.terms.var("t2");
    TermId t3 = sym.terms.var("t3"), t4 = sym.terms.var("t4");
    TermId t5 = sym.terms.var("t5"), t6 = sym.terms.var("t6");
    inst.add({mul, {t1, t2, t3}});
    inst.add({size, {t1, dim(5), dim(7)}});
    inst.add({mul, {t2, t1, t4}});
    inst.add({size, {t2, dim(7), dim(5)}});

    TermId a = sym.terms.var("pa"), b = sym.terms.var("pb"), r = sym.terms.var("pr");
    TermId m = sym.terms.var("pm"), n = sym.terms.var("pn");
    std::vector<Atom> premise = {{mul, {a, b, r}}, {size, {a, m, n}}};

    auto before = match_premise(inst, premise);
    CHECK(before.size() == 2);
    std::size_t watermark = inst.size();

    inst.add({mul, {t1, t5, t6}});
    inst.add({size, {t5, dim(9), dim(9)}});

    auto delta = incremental_match(inst, premise, watermark);
    auto full = match_premise(inst, premise);

    auto joined = match_fingerprints(before, sym);
    for (const std::string& s : match_fingerprints(delta, sym)) joined.insert(s);
    CHECK(joined == match_fingerprints(full, sym));
    CHECK(delta.size() == 1);
}

TEST_CASE("query matching respects the target class") {
    Symbols sym;
    ChaseInstance inst(sym);
    PredId tr = sym.preds.intern("tr", 2);
    TermId x = sym.terms.var("x"), y = sym.terms.var("y");
    inst.add({tr, {x, y}});

    CQ q;
    TermId qa = sym.terms.var("qa"), qb = sym.terms.var("qb");
    q.atoms = {{tr, {qa, qb}}};
    q.head = {qb};
    CHECK(query_matches(inst, q, y));
    CHECK(!query_matches(inst, q, x));
}

TEST_CASE("product reassociation is derivable in both directions") {
    Symbols sym;
    ExprArena arena;
    Catalog cat = published_catalog();
    auto rules = load_pack(sym, "mmc");

    NodeId left = parse_expression("(M %*% N) %*% M", arena, cat);
    NodeId right = parse_expression("M %*% (N %*% M)", arena, cat);
    EncodedQuery ql = encode_expression(sym, arena, left, cat);
    EncodedQuery qr = encode_expression(sym, arena, right, cat);

    ChaseInstance il(sym);
    for (const Atom& a : ql.query.atoms) il.add(a);
    ChaseStats sl = chase_to_fixpoint(il, rules);
    CHECK(!sl.budget_exceeded);
    CHECK(query_matches(il, qr.query, ql.query.head[0]));

    ChaseInstance ir(sym);
    for (const Atom& a : qr.query.atoms) ir.add(a);
    ChaseStats sr = chase_to_fixpoint(ir, rules);
    CHECK(!sr.budget_exceeded);
    CHECK(query_matches(ir, ql.query, qr.query.head[0]));

    // unrelated expressions do not match
    NodeId other = parse_expression("N %*% M", arena, cat);
    EncodedQuery qo = encode_expression(sym, arena, other, cat);
    CHECK(!query_matches(il, qo.query, ql.query.head[0]));
}

TEST_CASE("a chased instance is a fixpoint") {
    Symbols sym;
    ExprArena arena;
    Catalog cat = published_catalog();
    auto rules = load_pack(sym, "mmc");

    NodeId root = parse_expression("t(M %*% N)", arena, cat);
    EncodedQuery q = encode_expression(sym, arena, root, cat);
    ChaseInstance inst(sym);
    for (const Atom& a : q.query.atoms) inst.add(a);
    chase_to_fixpoint(inst, rules);

    std::uint64_t version = inst.version();
    ChaseStats again = chase_to_fixpoint(inst, rules);
    CHECK(again.steps == 0);
    CHECK(inst.version() == version);
}

TEST_CASE("constraint order does not change what the result can answer") {
    Symbols sym;
    ExprArena arena;
    Catalog cat = published_catalog();
    auto rules = load_pack(sym, "mmc");

    NodeId left = parse_expression("(M %*% N) %*% M", arena, cat);
    NodeId right = parse_expression("M %*% (N %*% M)", arena, cat);
    EncodedQuery ql = encode_expression(sym, arena, left, cat);
    EncodedQuery qr = encode_expression(sym, arena, right, cat);

    std::mt19937_64 rng(7);
    for (int round = 0; round < 3; ++round) {
        std::vector<Constraint> shuffled = rules;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        ChaseInstance inst(sym);
        for (const Atom& a : ql.query.atoms) inst.add(a);
        ChaseStats stats = chase_to_fixpoint(inst, shuffled);
        CHECK(!stats.budget_exceeded);
        CHECK(query_matches(inst, ql.query, ql.query.head[0]));
        CHECK(query_matches(inst, qr.query, ql.query.head[0]));
    }
}
