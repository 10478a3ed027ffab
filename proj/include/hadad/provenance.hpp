#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace hadad {

// Why-provenance in disjunctive normal form. A monomial is a sorted set of
// base-atom indexes; a formula is a subset-minimal set of monomials. Most
// monomials are short, so they carry inline storage.
using ProvTerm = std::uint32_t;
using Monomial = boost::container::small_vector<ProvTerm, 12>;

struct Formula {
    std::vector<Monomial> monomials;

    bool empty() const { return monomials.empty(); }
    bool operator==(const Formula&) const = default;
};

struct ProvenanceLimits {
    std::size_t max_monomials = 4096;
    // Width bound on formulas kept per atom while chasing; conjunction
    // results wider than this are trimmed before they are stored.
    std::size_t max_stored = 8;
};

using MonomialCost = std::function<double(const Monomial&)>;

Monomial monomial_union(const Monomial& a, const Monomial& b);
bool monomial_subsumes(const Monomial& small, const Monomial& big);

Formula singleton_formula(ProvTerm p);

// Disjunction into `into`; true when the set of monomials changed.
bool formula_or(Formula& into, const Formula& add);

// Conjunction. When the result would exceed the cap, the costliest monomials
// are dropped first (ties by size, then lexicographic order). A threshold
// drops every monomial costing more than it.
Formula formula_product(const Formula& a, const Formula& b,
                        const ProvenanceLimits& limits,
                        const MonomialCost& cost = nullptr,
                        double threshold = -1.0);

void enforce_limits(Formula& f, const ProvenanceLimits& limits,
                    const MonomialCost& cost = nullptr, double threshold = -1.0);

// "p0*p2 | p1" for {{0,2},{1}}; "false" for the empty formula.
std::string show_formula(const Formula& f);

}
