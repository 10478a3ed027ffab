#include "hadad/backchase.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "hadad/errors.hpp"

namespace hadad {

UniversalPlan build_universal_plan(Symbols& sym, const CQ& q,
                                   const std::vector<Constraint>& constraints,
                                   StepBudget budget) {
    if (q.atoms.empty())
        throw EmptyPlan("query has no atoms");
    UniversalPlan plan{ChaseInstance(sym), q, {}, {}};
    for (const Atom& a : q.atoms)
        plan.inst.add(a);
    plan.stats = chase_to_fixpoint(plan.inst, constraints, budget);
    for (std::size_t i = 0; i < plan.inst.size(); ++i) {
        if (!plan.inst.live(i))
            continue;
        plan.inst.set_formula(i, singleton_formula((ProvTerm)plan.base.size()));
        plan.base.push_back(i);
    }
    return plan;
}

namespace {

double class_entries(const ChaseInstance& inst, PredId size_pred, TermId rep) {
    const TermTable& terms = inst.symbols().terms;
    for (std::size_t idx : inst.with_term(rep)) {
        if (!inst.live(idx))
            continue;
        const Atom& a = inst.atom(idx);
        if (a.pred != size_pred || a.args[0] != rep)
            continue;
        const TermInfo& r = terms.info(a.args[1]);
        const TermInfo& c = terms.info(a.args[2]);
        if (r.kind == TermKind::DimConst && c.kind == TermKind::DimConst)
            return (double)r.dim * (double)c.dim;
    }
    return 0.0;
}

// The cache keeps only known sizes: a class without one may still get its
// size atom in a later round.
double monomial_cost(const UniversalPlan& plan, const Monomial& m,
                     std::unordered_map<TermId, double>* cache) {
    const ChaseInstance& inst = plan.inst;
    PredId size_pred = inst.symbols().preds.intern("size", 3);
    std::unordered_set<TermId> heads;
    for (TermId h : plan.query.head)
        heads.insert(inst.find(h));
    std::unordered_set<TermId> seen;
    double total = 0.0;
    for (ProvTerm p : m) {
        std::size_t idx = inst.resolve(plan.base[p]);
        const Atom& a = inst.atom(idx);
        for (int pos : inst.symbols().preds.info(a.pred).results) {
            TermId rep = inst.find(a.args[pos]);
            if (heads.count(rep) || !seen.insert(rep).second)
                continue;
            if (cache) {
                auto it = cache->find(rep);
                if (it != cache->end()) {
                    total += it->second;
                    continue;
                }
            }
            double v = class_entries(inst, size_pred, rep);
            if (cache && v > 0.0)
                cache->emplace(rep, v);
            total += v;
        }
    }
    return total;
}

}

double subplan_cost(const UniversalPlan& plan, const Monomial& m) {
    return monomial_cost(plan, m, nullptr);
}

namespace {

bool head_match(const ChaseInstance& inst, const CQ& q, const MatchResult& m) {
    for (TermId h : q.head) {
        TermId got = h;
        auto it = std::lower_bound(
            m.subst.begin(), m.subst.end(), std::make_pair(h, (TermId)0),
            [](const auto& a, const auto& b) { return a.first < b.first; });
        if (it != m.subst.end() && it->first == h)
            got = it->second;
        if (inst.find(got) != inst.find(h))
            return false;
    }
    return true;
}

Formula match_formula(const ChaseInstance& inst, const MatchResult& m,
                      std::size_t width, const MonomialCost& coster,
                      double threshold) {
    ProvenanceLimits limits;
    limits.max_monomials = width;
    Formula f;
    bool first = true;
    for (std::size_t idx : m.atoms) {
        const Formula& g = inst.formula(inst.resolve(idx));
        if (g.empty())
            return {};
        if (first) {
            f = g;
            first = false;
            continue;
        }
        f = formula_product(f, g, limits, coster, threshold);
        if (f.empty())
            return {};
    }
    return f;
}

// The cheapest complete answer assembled from the per-atom cheapest
// monomials of some query match. Itself a valid subplan, so a safe bound.
double tighten_threshold(const UniversalPlan& plan, double current,
                         const MonomialCost& coster) {
    double best = current;
    for (const MatchResult& m : match_premise(plan.inst, plan.query.atoms)) {
        if (!head_match(plan.inst, plan.query, m))
            continue;
        Monomial u;
        bool ok = true;
        for (std::size_t idx : m.atoms) {
            const Formula& g = plan.inst.formula(plan.inst.resolve(idx));
            if (g.empty()) {
                ok = false;
                break;
            }
            const Monomial* pick = &g.monomials.front();
            double pick_cost = coster(*pick);
            for (std::size_t i = 1; i < g.monomials.size(); ++i) {
                double c = coster(g.monomials[i]);
                if (c < pick_cost) {
                    pick = &g.monomials[i];
                    pick_cost = c;
                }
            }
            u = monomial_union(u, *pick);
        }
        if (!ok)
            continue;
        double c = coster(u);
        if (best < 0.0 || c < best)
            best = c;
    }
    return best;
}

int match_generation(const ChaseInstance& inst,
                     const std::vector<std::pair<TermId, TermId>>& subst) {
    const TermTable& terms = inst.symbols().terms;
    int g = 0;
    for (auto [v, t] : subst)
        g = std::max(g, terms.generation(inst.find(t)));
    return g;
}

// Fires a dependency with provenance: the conjunction of the premise images
// flows into every atom the conclusion already maps onto, or onto freshly
// invented conclusion atoms when no image exists.
bool backchase_tgd(ChaseInstance& inst, const Constraint& c, const MatchResult& m,
                   const BackchaseOptions& opts, const MonomialCost& coster,
                   double threshold, Formula& fired) {
    fired = match_formula(inst, m, opts.limits.max_stored, coster, threshold);
    if (fired.empty())
        return false;

    std::vector<std::pair<TermId, TermId>> fixed;
    fixed.reserve(m.subst.size());
    for (auto [v, t] : m.subst)
        fixed.emplace_back(v, inst.find(t));

    std::vector<MatchResult> images = match_extensions(inst, c.conclusion, fixed);
    if (!images.empty()) {
        bool changed = false;
        for (const MatchResult& e : images)
            for (std::size_t idx : e.atoms)
                changed |= inst.or_formula(idx, fired);
        return changed;
    }

    Symbols& sym = inst.symbols();
    std::unordered_map<TermId, TermId> image(fixed.begin(), fixed.end());
    if (!c.existentials.empty()) {
        int gen = match_generation(inst, fixed) + 1;
        if (gen > opts.budget.max_depth)
            return false;
        for (TermId e : c.existentials)
            image[e] = sym.terms.fresh_null(gen);
    }
    bool changed = false;
    for (const Atom& a : c.conclusion) {
        Atom grounded = a;
        for (TermId& t : grounded.args) {
            auto it = image.find(t);
            if (it != image.end())
                t = it->second;
        }
        changed |= inst.add(std::move(grounded), fired).second;
    }
    return changed;
}

std::size_t backchase_egd(ChaseInstance& inst, const Constraint& c,
                          const MatchResult& m) {
    std::unordered_map<TermId, TermId> image(m.subst.begin(), m.subst.end());
    std::size_t merges = 0;
    for (auto [l, r] : c.equalities) {
        TermId left = image.count(l) ? image.at(l) : l;
        TermId right = image.count(r) ? image.at(r) : r;
        if (inst.merge(left, right))
            ++merges;
    }
    return merges;
}

void enumerate_candidates(UniversalPlan& plan,
                          const std::vector<Constraint>& constraints,
                          const BackchaseOptions& opts, const MonomialCost& coster,
                          double threshold, BackchaseResult& out) {
    ChaseInstance& inst = plan.inst;
    // With pruning the expensive monomials are dropped outright; without it
    // the width caps keep the smallest, so an expensive-but-minimal subplan
    // is still reported.
    static const MonomialCost unranked;
    const MonomialCost& rank = opts.prune ? coster : unranked;
    Formula total;
    std::set<std::vector<std::size_t>> match_seen;
    for (const MatchResult& m : match_premise(inst, plan.query.atoms)) {
        if (!head_match(inst, plan.query, m))
            continue;
        std::vector<std::size_t> slots;
        slots.reserve(m.atoms.size());
        for (std::size_t idx : m.atoms)
            slots.push_back(inst.resolve(idx));
        if (!match_seen.insert(std::move(slots)).second)
            continue;
        Formula f = match_formula(inst, m, opts.limits.max_monomials, rank,
                                  opts.prune ? threshold : -1.0);
        total.monomials.insert(total.monomials.end(), f.monomials.begin(),
                               f.monomials.end());
    }
    enforce_limits(total, opts.limits, rank, opts.prune ? threshold : -1.0);

    // A subplan's identity is its operator and leaf atoms; size atoms only
    // carry dimensions along and may route many ways. Dedupe on the
    // projection without them and keep only inclusion-minimal projections,
    // so padded variants of a smaller subplan never surface.
    PredId size_pred = inst.symbols().preds.intern("size", 3);
    struct Entry {
        Monomial mono;
        std::vector<std::size_t> idxs;
        std::vector<std::size_t> shape;
    };
    std::vector<Entry> entries;
    std::unordered_set<std::string> seen;
    for (const Monomial& mono : total.monomials) {
        std::set<std::size_t> idxs;
        for (ProvTerm p : mono)
            idxs.insert(inst.resolve(plan.base[p]));
        Entry e{mono, {idxs.begin(), idxs.end()}, {}};
        for (std::size_t i : e.idxs)
            if (inst.atom(i).pred != size_pred)
                e.shape.push_back(i);
        std::string fp;
        for (std::size_t i : e.shape)
            fp += std::to_string(i) + ",";
        if (seen.insert(fp).second)
            entries.push_back(std::move(e));
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) {
                         if (a.shape.size() != b.shape.size())
                             return a.shape.size() < b.shape.size();
                         if (a.shape != b.shape)
                             return a.shape < b.shape;
                         return a.idxs.size() < b.idxs.size();
                     });
    std::vector<Entry> minimal;
    for (Entry& e : entries) {
        bool covered = false;
        for (const Entry& k : minimal)
            if (std::includes(e.shape.begin(), e.shape.end(), k.shape.begin(),
                              k.shape.end())) {
                covered = true;
                break;
            }
        if (!covered)
            minimal.push_back(std::move(e));
    }

    TermId head = inst.find(plan.query.head.front());
    for (const Entry& e : minimal) {
        std::vector<Atom> atoms;
        atoms.reserve(e.idxs.size());
        for (std::size_t i : e.idxs) {
            Atom a = inst.atom(i);
            for (TermId& t : a.args)
                t = inst.find(t);
            atoms.push_back(std::move(a));
        }

        ChaseInstance probe(inst.symbols());
        for (const Atom& a : atoms)
            probe.add(a);
        try {
            chase_to_fixpoint(probe, constraints, opts.budget);
        } catch (const InconsistentEGD&) {
            continue;
        }
        if (!query_matches(probe, plan.query, head))
            continue;
        out.candidates.push_back({e.mono, std::move(atoms), head});
    }
}

}

BackchaseResult run_backchase(UniversalPlan& plan,
                              const std::vector<Constraint>& constraints,
                              const BackchaseOptions& opts) {
    ChaseInstance& inst = plan.inst;
    inst.set_formula_cap(opts.limits.max_stored);
    BackchaseResult out;
    std::unordered_map<TermId, double> sizes;
    MonomialCost coster = [&plan, &sizes](const Monomial& m) {
        return monomial_cost(plan, m, &sizes);
    };
    double threshold = opts.prune ? opts.threshold : -1.0;

    // Cost-ranked caps belong to pruning; a plain run keeps the smallest
    // monomials so expensive-but-minimal subplans survive the width bound.
    static const MonomialCost unranked;
    const MonomialCost& rank = opts.prune ? coster : unranked;

    std::size_t watermark = 0;
    bool first = true;
    bool done = false;
    while (!done) {
        if (opts.prune)
            threshold = tighten_threshold(plan, threshold, coster);
        ++out.stats.rounds;
        std::size_t round_start = inst.size();
        std::uint64_t version = inst.version();
        for (const Constraint& c : constraints) {
            std::vector<MatchResult> matches =
                first ? match_premise(inst, c.premise)
                      : incremental_match(inst, c.premise, watermark);
            for (const MatchResult& m : matches) {
                if (out.stats.steps >= opts.budget.max_steps) {
                    out.stats.budget_exceeded = true;
                    done = true;
                    break;
                }
                if (c.kind == ConstraintKind::Tgd) {
                    Formula fired;
                    if (backchase_tgd(inst, c, m, opts, rank, threshold, fired)) {
                        ++out.stats.steps;
                        if (opts.trace)
                            out.trace.push_back("STEP " + std::to_string(out.stats.steps) +
                                                " " + c.id + " " + show_formula(fired));
                    }
                } else {
                    out.stats.steps += backchase_egd(inst, c, m);
                }
            }
            if (done)
                break;
        }
        if (done)
            break;
        if (inst.version() == version)
            break;
        watermark = round_start;
        first = false;
    }

    if (opts.prune)
        threshold = tighten_threshold(plan, threshold, coster);
    out.threshold = threshold;
    enumerate_candidates(plan, constraints, opts, coster, threshold, out);
    return out;
}

}
