#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hadad/atom.hpp"
#include "hadad/constraint.hpp"
#include "hadad/provenance.hpp"

namespace hadad {

struct StepBudget {
    std::size_t max_steps = 10000;
    int max_depth = 3;
};

struct ChaseStats {
    std::size_t steps = 0;
    std::size_t rounds = 0;
    bool budget_exceeded = false;
};

// A set of atoms closed under term equalities. Atoms are stored append-only:
// a merge or formula update retires the old index and appends the refreshed
// atom, so an index range is also a change log.
class ChaseInstance {
public:
    explicit ChaseInstance(Symbols& sym) : sym_(&sym) {}

    Symbols& symbols() const { return *sym_; }

    TermId find(TermId t) const;
    bool same(TermId a, TermId b) const { return find(a) == find(b); }

    // Canonicalizes and dedups; the flag reports whether anything changed
    // (a new atom, or a formula that grew on collision).
    std::pair<std::size_t, bool> add(Atom a, Formula f = {});

    // Makes both terms name one value. False when already equal. Merging two
    // distinct constants throws InconsistentEGD.
    bool merge(TermId a, TermId b);

    // Retires and re-appends an atom so delta matching sees it again.
    std::size_t touch(std::size_t idx);

    bool live(std::size_t idx) const { return forward_[idx] == idx; }
    std::size_t resolve(std::size_t idx) const;
    const Atom& atom(std::size_t idx) const { return atoms_[idx]; }
    const Formula& formula(std::size_t idx) const { return formulas_[idx]; }
    void set_formula(std::size_t idx, Formula f) { formulas_[idx] = std::move(f); }
    bool or_formula(std::size_t idx, const Formula& f);

    // Stored formulas keep at most this many monomials, preferring the
    // canonically first (smallest) ones, so alternative-derivation growth
    // stays bounded.
    void set_formula_cap(std::size_t cap) { formula_cap_ = cap; }
    std::size_t formula_cap() const { return formula_cap_; }

    std::size_t size() const { return atoms_.size(); }
    std::size_t live_count() const { return live_count_; }
    std::uint64_t version() const { return version_; }
    std::vector<Atom> live_atoms() const;

    static const std::vector<std::size_t> kNoAtoms;
    const std::vector<std::size_t>& with_pred(PredId p) const;
    const std::vector<std::size_t>& with_term(TermId t) const;

private:
    std::size_t append(Atom a, Formula f);
    std::size_t rewrite(std::size_t idx);
    bool or_capped(Formula& into, const Formula& add) const;

    Symbols* sym_;
    std::vector<Atom> atoms_;
    std::vector<Formula> formulas_;
    std::vector<std::size_t> forward_;
    std::unordered_map<Atom, std::size_t, AtomHash> index_;
    std::unordered_map<PredId, std::vector<std::size_t>> by_pred_;
    std::unordered_map<TermId, std::vector<std::size_t>> by_term_;
    mutable std::unordered_map<TermId, TermId> parent_;
    std::size_t formula_cap_ = 16;
    std::size_t live_count_ = 0;
    std::uint64_t version_ = 0;
};

struct MatchResult {
    std::vector<std::pair<TermId, TermId>> subst;  // var, image; sorted by var
    std::vector<std::size_t> atoms;                // per premise position
};

// All homomorphisms of the atom list into the instance. The incremental form
// yields exactly the matches that use at least one atom index >= watermark.
std::vector<MatchResult> match_premise(const ChaseInstance& inst,
                                       const std::vector<Atom>& premise);
std::vector<MatchResult> incremental_match(const ChaseInstance& inst,
                                           const std::vector<Atom>& premise,
                                           std::size_t watermark);

// True when some homomorphism extends `fixed` (var, image pairs) to cover
// every atom.
bool extension_exists(const ChaseInstance& inst, const std::vector<Atom>& atoms,
                      const std::vector<std::pair<TermId, TermId>>& fixed);

// All homomorphisms of the atom list that extend `fixed`.
std::vector<MatchResult> match_extensions(const ChaseInstance& inst,
                                          const std::vector<Atom>& atoms,
                                          const std::vector<std::pair<TermId, TermId>>& fixed);

// True when the query body maps into the instance with the head landing on
// target's class.
bool query_matches(const ChaseInstance& inst, const CQ& q, TermId target);

// Restricted chase: a dependency fires only when no extension of the premise
// match already covers its conclusion. Stops at the step budget and reports
// it instead of failing.
ChaseStats chase_to_fixpoint(ChaseInstance& inst,
                             const std::vector<Constraint>& constraints,
                             StepBudget budget = {});

}
