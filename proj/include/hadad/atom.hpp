#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace hadad {

using TermId = std::uint32_t;
using PredId = std::uint32_t;

enum class TermKind { Var, NameConst, DimConst, Null };

struct TermInfo {
    TermKind kind = TermKind::Var;
    std::string text;
    long long dim = 0;
    // Invention depth for nulls: one more than the deepest term that fed the
    // premise match which created them. Constants and variables are depth 0.
    int generation = 0;
};

class TermTable {
public:
    TermId var(const std::string& name);
    TermId name_const(const std::string& s);
    TermId dim_const(long long v);
    TermId fresh_null(int generation);

    const TermInfo& info(TermId t) const { return terms_[t]; }
    bool is_var(TermId t) const { return info(t).kind == TermKind::Var; }
    bool is_null(TermId t) const { return info(t).kind == TermKind::Null; }
    bool is_const(TermId t) const {
        TermKind k = info(t).kind;
        return k == TermKind::NameConst || k == TermKind::DimConst;
    }
    int generation(TermId t) const { return info(t).generation; }
    std::string show(TermId t) const;
    std::size_t size() const { return terms_.size(); }

private:
    std::vector<TermInfo> terms_;
    std::unordered_map<std::string, TermId> vars_;
    std::unordered_map<std::string, TermId> names_;
    std::unordered_map<long long, TermId> dims_;
};

struct PredInfo {
    std::string name;
    std::size_t arity = 0;
    bool builtin = false;
    // Argument positions holding terms the operator produces, e.g. {2} for
    // multi_M(a, b, r) or {1, 2} for QR(m, q, r). Empty for metadata
    // predicates (name, size, type, ...) and for user-defined predicates.
    std::vector<int> results;
};

// Predicate names with fixed arities. The matrix-relation predicates are
// preregistered; any other predicate is admitted and has its arity fixed by
// first use.
class PredTable {
public:
    PredTable();
    PredId intern(const std::string& name, std::size_t arity);
    const PredInfo& info(PredId p) const { return preds_[p]; }
    std::size_t size() const { return preds_.size(); }

private:
    std::vector<PredInfo> preds_;
    std::unordered_map<std::string, PredId> index_;
};

struct Symbols {
    TermTable terms;
    PredTable preds;
};

struct Atom {
    PredId pred = 0;
    std::vector<TermId> args;

    bool operator==(const Atom& o) const = default;
};

struct AtomHash {
    std::size_t operator()(const Atom& a) const {
        std::size_t h = a.pred * 0x9e3779b97f4a7c15ull;
        for (TermId t : a.args)
            h = (h ^ t) * 0x100000001b3ull;
        return h;
    }
};

struct CQ {
    std::vector<TermId> head;
    std::vector<Atom> atoms;
};

std::string show_atom(const Symbols& sym, const Atom& a);
std::string show_atoms(const Symbols& sym, const std::vector<Atom>& atoms);

}
