#include "hadad/provenance.hpp"

#include <algorithm>

namespace hadad {

namespace {

void sort_canonical(Formula& f) {
    std::sort(f.monomials.begin(), f.monomials.end(),
              [](const Monomial& a, const Monomial& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return a < b;
              });
}

// Element-membership fingerprint: k can only subsume m when every bit of
// sig(k) is also set in sig(m).
std::uint64_t signature(const Monomial& m) {
    std::uint64_t s = 0;
    for (ProvTerm p : m)
        s |= 1ull << (p & 63);
    return s;
}

// Keeps only subset-minimal monomials. Assumes canonical order, so a
// subsuming monomial always precedes the monomials it absorbs.
void absorb(Formula& f) {
    std::vector<Monomial> kept;
    std::vector<std::uint64_t> sigs;
    kept.reserve(f.monomials.size());
    sigs.reserve(f.monomials.size());
    for (Monomial& m : f.monomials) {
        std::uint64_t s = signature(m);
        bool covered = false;
        for (std::size_t i = 0; i < kept.size(); ++i)
            if ((sigs[i] & ~s) == 0 && monomial_subsumes(kept[i], m)) {
                covered = true;
                break;
            }
        if (!covered) {
            kept.push_back(std::move(m));
            sigs.push_back(s);
        }
    }
    f.monomials = std::move(kept);
}

}

Monomial monomial_union(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool monomial_subsumes(const Monomial& small, const Monomial& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

Formula singleton_formula(ProvTerm p) {
    Formula f;
    f.monomials.push_back({p});
    return f;
}

bool formula_or(Formula& into, const Formula& add) {
    if (add.empty()) return false;
    bool changed = false;
    for (const Monomial& m : add.monomials) {
        bool covered = false;
        for (const Monomial& k : into.monomials)
            if (monomial_subsumes(k, m)) {
                covered = true;
                break;
            }
        if (covered) continue;
        std::erase_if(into.monomials,
                      [&](const Monomial& k) { return monomial_subsumes(m, k); });
        into.monomials.push_back(m);
        changed = true;
    }
    if (changed) sort_canonical(into);
    return changed;
}

Formula formula_product(const Formula& a, const Formula& b,
                        const ProvenanceLimits& limits, const MonomialCost& cost,
                        double threshold) {
    Formula out;
    out.monomials.reserve(a.monomials.size() * b.monomials.size());
    for (const Monomial& ma : a.monomials)
        for (const Monomial& mb : b.monomials)
            out.monomials.push_back(monomial_union(ma, mb));
    enforce_limits(out, limits, cost, threshold);
    return out;
}

void enforce_limits(Formula& f, const ProvenanceLimits& limits,
                    const MonomialCost& cost, double threshold) {
    std::sort(f.monomials.begin(), f.monomials.end());
    f.monomials.erase(std::unique(f.monomials.begin(), f.monomials.end()),
                      f.monomials.end());
    sort_canonical(f);
    if (cost && threshold >= 0.0)
        std::erase_if(f.monomials,
                      [&](const Monomial& m) { return cost(m) > threshold; });
    // Absorption is quadratic; a grossly oversized set is pre-capped first.
    // Only larger monomials are dropped, which absorption could never keep
    // in favour of a smaller one anyway.
    std::size_t slack = 4 * limits.max_monomials;
    if (f.monomials.size() > slack)
        f.monomials.resize(slack);
    absorb(f);
    if (f.monomials.size() > limits.max_monomials) {
        std::vector<std::pair<double, std::size_t>> ranked(f.monomials.size());
        for (std::size_t i = 0; i < f.monomials.size(); ++i)
            ranked[i] = {cost ? cost(f.monomials[i]) : 0.0, i};
        std::stable_sort(ranked.begin(), ranked.end(),
                         [&](const auto& a, const auto& b) {
                             if (a.first != b.first) return a.first < b.first;
                             const Monomial& ma = f.monomials[a.second];
                             const Monomial& mb = f.monomials[b.second];
                             if (ma.size() != mb.size()) return ma.size() < mb.size();
                             return ma < mb;
                         });
        std::vector<Monomial> kept;
        kept.reserve(limits.max_monomials);
        for (std::size_t i = 0; i < limits.max_monomials; ++i)
            kept.push_back(std::move(f.monomials[ranked[i].second]));
        f.monomials = std::move(kept);
        sort_canonical(f);
    }
}

std::string show_formula(const Formula& f) {
    if (f.empty())
        return "false";
    std::string out;
    for (std::size_t i = 0; i < f.monomials.size(); ++i) {
        if (i)
            out += " | ";
        for (std::size_t j = 0; j < f.monomials[i].size(); ++j) {
            if (j)
                out += "*";
            out += "p" + std::to_string(f.monomials[i][j]);
        }
    }
    return out;
}

}
