#include "hadad/chase.hpp"

#include <algorithm>

#include "hadad/errors.hpp"

namespace hadad {

const std::vector<std::size_t> ChaseInstance::kNoAtoms;

TermId ChaseInstance::find(TermId t) const {
    auto it = parent_.find(t);
    if (it == parent_.end() || it->second == t) return t;
    TermId root = find(it->second);
    parent_[t] = root;
    return root;
}

std::size_t ChaseInstance::resolve(std::size_t idx) const {
    while (forward_[idx] != idx) idx = forward_[idx];
    return idx;
}

const std::vector<std::size_t>& ChaseInstance::with_pred(PredId p) const {
    auto it = by_pred_.find(p);
    return it == by_pred_.end() ? kNoAtoms : it->second;
}

const std::vector<std::size_t>& ChaseInstance::with_term(TermId t) const {
    auto it = by_term_.find(find(t));
    return it == by_term_.end() ? kNoAtoms : it->second;
}

std::vector<Atom> ChaseInstance::live_atoms() const {
    std::vector<Atom> out;
    out.reserve(live_count_);
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (live(i)) out.push_back(atoms_[i]);
    return out;
}

bool ChaseInstance::or_capped(Formula& into, const Formula& add) const {
    Formula merged = into;
    if (add.monomials.size() > formula_cap_) {
        Formula trimmed;
        trimmed.monomials.assign(add.monomials.begin(),
                                 add.monomials.begin() + formula_cap_);
        formula_or(merged, trimmed);
    } else {
        formula_or(merged, add);
    }
    if (merged.monomials.size() > formula_cap_)
        merged.monomials.resize(formula_cap_);
    if (merged == into) return false;
    into = std::move(merged);
    return true;
}

std::size_t ChaseInstance::append(Atom a, Formula f) {
    if (f.monomials.size() > formula_cap_) f.monomials.resize(formula_cap_);
    std::size_t idx = atoms_.size();
    index_.emplace(a, idx);
    by_pred_[a.pred].push_back(idx);
    std::vector<TermId> distinct(a.args);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (TermId t : distinct) by_term_[t].push_back(idx);
    atoms_.push_back(std::move(a));
    formulas_.push_back(std::move(f));
    forward_.push_back(idx);
    ++live_count_;
    ++version_;
    return idx;
}

std::pair<std::size_t, bool> ChaseInstance::add(Atom a, Formula f) {
    for (TermId& t : a.args) t = find(t);
    auto it = index_.find(a);
    if (it != index_.end()) {
        std::size_t idx = it->second;
        if (or_capped(formulas_[idx], f)) {
            ++version_;
            return {touch(idx), true};
        }
        return {idx, false};
    }
    return {append(std::move(a), std::move(f)), true};
}

bool ChaseInstance::or_formula(std::size_t idx, const Formula& f) {
    idx = resolve(idx);
    if (!or_capped(formulas_[idx], f)) return false;
    ++version_;
    touch(idx);
    return true;
}

std::size_t ChaseInstance::touch(std::size_t idx) {
    index_.erase(atoms_[idx]);
    --live_count_;
    std::size_t fresh = append(atoms_[idx], std::move(formulas_[idx]));
    forward_[idx] = fresh;
    return fresh;
}

std::size_t ChaseInstance::rewrite(std::size_t idx) {
    Atom updated = atoms_[idx];
    for (TermId& t : updated.args) t = find(t);
    if (updated == atoms_[idx]) return idx;
    index_.erase(atoms_[idx]);
    --live_count_;
    Formula f = std::move(formulas_[idx]);
    auto it = index_.find(updated);
    if (it != index_.end()) {
        // collapsed onto an existing atom: combine what derives them
        std::size_t target = it->second;
        forward_[idx] = target;
        ++version_;
        if (or_capped(formulas_[target], f)) target = touch(target);
        return target;
    }
    std::size_t fresh = append(std::move(updated), std::move(f));
    forward_[idx] = fresh;
    ++version_;
    return fresh;
}

bool ChaseInstance::merge(TermId a, TermId b) {
    TermId ra = find(a);
    TermId rb = find(b);
    if (ra == rb) return false;

    const TermTable& terms = sym_->terms;
    bool ca = terms.is_const(ra);
    bool cb = terms.is_const(rb);
    if (ca && cb)
        throw InconsistentEGD("cannot equate " + terms.show(ra) + " with " +
                              terms.show(rb));
    TermId rep, gone;
    if (ca || cb) {
        rep = ca ? ra : rb;
        gone = ca ? rb : ra;
    } else {
        // deterministic pick: named variables beat invented nulls, then text
        auto rank = [&](TermId t) {
            return std::make_pair(terms.is_null(t) ? 1 : 0, terms.show(t));
        };
        if (rank(ra) <= rank(rb)) {
            rep = ra;
            gone = rb;
        } else {
            rep = rb;
            gone = ra;
        }
    }
    parent_[gone] = rep;
    ++version_;

    auto moved = by_term_.find(gone);
    if (moved != by_term_.end()) {
        std::vector<std::size_t> affected = std::move(moved->second);
        by_term_.erase(moved);
        for (std::size_t idx : affected)
            if (live(idx)) rewrite(idx);
    }
    return true;
}

namespace {

// Backtracking search for homomorphisms of an atom list into the instance.
// Atoms are tried most-selective-first; candidates come from the narrowest
// index available.
class Matcher {
public:
    Matcher(const ChaseInstance& inst, const std::vector<Atom>& atoms)
        : inst_(inst), terms_(inst.symbols().terms) {
        order_ = plan(atoms);
        atoms_ = &atoms;
    }

    // yield returns false to stop the enumeration
    using Yield = std::function<bool(const std::vector<std::size_t>&,
                                     const std::unordered_map<TermId, TermId>&)>;

    void run(const std::vector<std::pair<TermId, TermId>>& fixed,
             std::optional<std::size_t> watermark, const Yield& yield) {
        subst_.clear();
        for (auto [v, t] : fixed) subst_[v] = inst_.find(t);
        chosen_.assign(atoms_->size(), 0);
        yield_ = &yield;
        stopped_ = false;
        if (!watermark) {
            delta_pos_ = order_.size();
            watermark_ = (std::size_t)-1;
            search(0);
        } else {
            watermark_ = *watermark;
            for (std::size_t d = 0; d < order_.size() && !stopped_; ++d) {
                delta_pos_ = d;
                search(0);
            }
        }
    }

private:
    // Selective atoms first: ground terms, then rarer predicates; atoms
    // sharing a variable with an earlier pick are preferred so bindings
    // narrow the scan.
    std::vector<std::size_t> plan(const std::vector<Atom>& atoms) {
        std::vector<std::size_t> order;
        std::vector<bool> used(atoms.size(), false);
        std::unordered_map<TermId, bool> bound;
        auto score = [&](std::size_t i) {
            double s = (double)inst_.with_pred(atoms[i].pred).size();
            bool connected = false;
            for (TermId t : atoms[i].args) {
                if (!terms_.is_var(t)) connected = true;
                else if (bound.count(t)) connected = true;
            }
            return std::make_pair(connected ? 0 : 1, s);
        };
        for (std::size_t n = 0; n < atoms.size(); ++n) {
            std::size_t best = atoms.size();
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                if (used[i]) continue;
                if (best == atoms.size() || score(i) < score(best)) best = i;
            }
            used[best] = true;
            order.push_back(best);
            for (TermId t : atoms[best].args)
                if (terms_.is_var(t)) bound[t] = true;
        }
        return order;
    }

    void search(std::size_t depth) {
        if (stopped_) return;
        if (depth == order_.size()) {
            stopped_ = !(*yield_)(chosen_, subst_);
            return;
        }
        std::size_t pos = order_[depth];
        const Atom& pat = (*atoms_)[pos];

        const std::vector<std::size_t>* pool = &inst_.with_pred(pat.pred);
        for (TermId t : pat.args) {
            TermId image = image_of(t);
            if (image == kUnbound) continue;
            const auto& narrower = inst_.with_term(image);
            if (narrower.size() < pool->size()) pool = &narrower;
        }

        for (std::size_t idx : *pool) {
            if (!inst_.live(idx)) continue;
            if (depth < delta_pos_ && idx >= watermark_) continue;
            if (depth == delta_pos_ && idx < watermark_) continue;
            const Atom& cand = inst_.atom(idx);
            if (cand.pred != pat.pred) continue;
            std::vector<TermId> trail;
            if (unify(pat, cand, trail)) {
                chosen_[pos] = idx;
                search(depth + 1);
            }
            for (TermId v : trail) subst_.erase(v);
            if (stopped_) return;
        }
    }

    static constexpr TermId kUnbound = (TermId)-1;

    TermId image_of(TermId t) {
        if (!terms_.is_var(t)) return inst_.find(t);
        auto it = subst_.find(t);
        return it == subst_.end() ? kUnbound : it->second;
    }

    bool unify(const Atom& pat, const Atom& cand, std::vector<TermId>& trail) {
        for (std::size_t i = 0; i < pat.args.size(); ++i) {
            TermId t = pat.args[i];
            TermId target = cand.args[i];
            if (terms_.is_var(t)) {
                auto it = subst_.find(t);
                if (it == subst_.end()) {
                    subst_[t] = target;
                    trail.push_back(t);
                } else if (it->second != target) {
                    return false;
                }
            } else if (inst_.find(t) != target) {
                return false;
            }
        }
        return true;
    }

    const ChaseInstance& inst_;
    const TermTable& terms_;
    const std::vector<Atom>* atoms_;
    std::vector<std::size_t> order_;
    std::unordered_map<TermId, TermId> subst_;
    std::vector<std::size_t> chosen_;
    const Yield* yield_ = nullptr;
    std::size_t delta_pos_ = 0;
    std::size_t watermark_ = 0;
    bool stopped_ = false;
};

std::vector<MatchResult> collect(const ChaseInstance& inst,
                                 const std::vector<Atom>& premise,
                                 std::optional<std::size_t> watermark,
                                 const std::vector<std::pair<TermId, TermId>>& fixed = {}) {
    std::vector<MatchResult> out;
    Matcher m(inst, premise);
    m.run(fixed, watermark,
          [&](const std::vector<std::size_t>& atoms,
              const std::unordered_map<TermId, TermId>& subst) {
              MatchResult r;
              r.atoms = atoms;
              r.subst.assign(subst.begin(), subst.end());
              std::sort(r.subst.begin(), r.subst.end());
              out.push_back(std::move(r));
              return true;
          });
    return out;
}

}

std::vector<MatchResult> match_premise(const ChaseInstance& inst,
                                       const std::vector<Atom>& premise) {
    return collect(inst, premise, std::nullopt);
}

std::vector<MatchResult> incremental_match(const ChaseInstance& inst,
                                           const std::vector<Atom>& premise,
                                           std::size_t watermark) {
    return collect(inst, premise, watermark);
}

std::vector<MatchResult> match_extensions(const ChaseInstance& inst,
                                          const std::vector<Atom>& atoms,
                                          const std::vector<std::pair<TermId, TermId>>& fixed) {
    return collect(inst, atoms, std::nullopt, fixed);
}

bool extension_exists(const ChaseInstance& inst, const std::vector<Atom>& atoms,
                      const std::vector<std::pair<TermId, TermId>>& fixed) {
    bool found = false;
    Matcher m(inst, atoms);
    m.run(fixed, std::nullopt,
          [&](const std::vector<std::size_t>&,
              const std::unordered_map<TermId, TermId>&) {
              found = true;
              return false;
          });
    return found;
}

bool query_matches(const ChaseInstance& inst, const CQ& q, TermId target) {
    TermId want = inst.find(target);
    bool found = false;
    Matcher m(inst, q.atoms);
    m.run({}, std::nullopt,
          [&](const std::vector<std::size_t>&,
              const std::unordered_map<TermId, TermId>& subst) {
              for (TermId h : q.head) {
                  auto it = subst.find(h);
                  TermId image = it == subst.end() ? inst.find(h) : it->second;
                  if (image != want) return true;
              }
              found = true;
              return false;
          });
    return found;
}

namespace {

int match_generation(const ChaseInstance& inst,
                     const std::vector<std::pair<TermId, TermId>>& subst) {
    const TermTable& terms = inst.symbols().terms;
    int g = 0;
    for (auto [v, t] : subst) g = std::max(g, terms.generation(inst.find(t)));
    return g;
}

bool apply_tgd(ChaseInstance& inst, const Constraint& c, const MatchResult& m,
               const StepBudget& budget) {
    std::vector<std::pair<TermId, TermId>> fixed;
    for (auto [v, t] : m.subst) fixed.emplace_back(v, inst.find(t));
    if (extension_exists(inst, c.conclusion, fixed)) return false;

    Symbols& sym = inst.symbols();
    std::unordered_map<TermId, TermId> image(fixed.begin(), fixed.end());
    if (!c.existentials.empty()) {
        int gen = match_generation(inst, fixed) + 1;
        if (gen > budget.max_depth) return false;
        for (TermId e : c.existentials) image[e] = sym.terms.fresh_null(gen);
    }

    bool changed = false;
    for (const Atom& a : c.conclusion) {
        Atom grounded = a;
        for (TermId& t : grounded.args) {
            auto it = image.find(t);
            if (it != image.end()) t = it->second;
        }
        changed |= inst.add(std::move(grounded)).second;
    }
    return changed;
}

bool apply_egd(ChaseInstance& inst, const Constraint& c, const MatchResult& m,
               std::size_t& merges) {
    std::unordered_map<TermId, TermId> image(m.subst.begin(), m.subst.end());
    bool changed = false;
    for (auto [l, r] : c.equalities) {
        auto left = image.count(l) ? image.at(l) : l;
        auto right = image.count(r) ? image.at(r) : r;
        if (inst.merge(left, right)) {
            changed = true;
            ++merges;
        }
    }
    return changed;
}

}

ChaseStats chase_to_fixpoint(ChaseInstance& inst,
                             const std::vector<Constraint>& constraints,
                             StepBudget budget) {
    ChaseStats stats;
    std::size_t watermark = 0;
    bool first = true;
    while (true) {
        ++stats.rounds;
        std::size_t round_start = inst.size();
        std::uint64_t version = inst.version();
        for (const Constraint& c : constraints) {
            std::vector<MatchResult> matches =
                first ? match_premise(inst, c.premise)
                      : incremental_match(inst, c.premise, watermark);
            for (const MatchResult& m : matches) {
                if (stats.steps >= budget.max_steps) {
                    stats.budget_exceeded = true;
                    return stats;
                }
                if (c.kind == ConstraintKind::Tgd) {
                    if (apply_tgd(inst, c, m, budget)) ++stats.steps;
                } else {
                    std::size_t merges = 0;
                    apply_egd(inst, c, m, merges);
                    stats.steps += merges;
                }
            }
        }
        if (inst.version() == version) break;
        watermark = round_start;
        first = false;
    }
    return stats;
}

}
