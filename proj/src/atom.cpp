#include "hadad/atom.hpp"

#include "hadad/errors.hpp"

namespace hadad {

TermId TermTable::var(const std::string& name) {
    auto it = vars_.find(name);
    if (it != vars_.end())
        return it->second;
    TermId id = (TermId)terms_.size();
    terms_.push_back({TermKind::Var, name, 0, 0});
    vars_.emplace(name, id);
    return id;
}

TermId TermTable::name_const(const std::string& s) {
    auto it = names_.find(s);
    if (it != names_.end())
        return it->second;
    TermId id = (TermId)terms_.size();
    terms_.push_back({TermKind::NameConst, s, 0, 0});
    names_.emplace(s, id);
    return id;
}

TermId TermTable::dim_const(long long v) {
    auto it = dims_.find(v);
    if (it != dims_.end())
        return it->second;
    TermId id = (TermId)terms_.size();
    terms_.push_back({TermKind::DimConst, std::to_string(v), v, 0});
    dims_.emplace(v, id);
    return id;
}

TermId TermTable::fresh_null(int generation) {
    TermId id = (TermId)terms_.size();
    terms_.push_back({TermKind::Null, "_" + std::to_string(id), 0, generation});
    return id;
}

std::string TermTable::show(TermId t) const {
    const TermInfo& i = info(t);
    switch (i.kind) {
    case TermKind::NameConst: return "\"" + i.text + "\"";
    default: return i.text;
    }
}

namespace {

struct BuiltinPred {
    const char* name;
    std::size_t arity;
    std::initializer_list<int> results;
};

constexpr BuiltinPred kBuiltins[] = {
    {"name", 2, {}},        {"size", 3, {}},        {"Zero", 1, {}},
    {"Identity", 1, {}},    {"type", 2, {}},        {"multi_M", 3, {2}},
    {"add_M", 3, {2}},      {"div_M", 3, {2}},      {"multi_E", 3, {2}},
    {"multi_MS", 3, {2}},   {"tr", 2, {1}},         {"inv_M", 2, {1}},
    {"det", 2, {1}},        {"trace", 2, {1}},      {"diag", 2, {1}},
    {"exp", 2, {1}},        {"adj", 2, {1}},        {"sum_D", 3, {2}},
    {"product_D", 3, {2}},  {"sum", 2, {1}},        {"rowSums", 2, {1}},
    {"colSums", 2, {1}},    {"rowMean", 2, {1}},    {"colMean", 2, {1}},
    {"rowVar", 2, {1}},     {"colVar", 2, {1}},     {"rowMax", 2, {1}},
    {"rowMin", 2, {1}},     {"colMax", 2, {1}},     {"colMin", 2, {1}},
    {"min", 2, {1}},        {"max", 2, {1}},        {"mean", 2, {1}},
    {"var", 2, {1}},        {"rev", 2, {1}},        {"QR", 3, {1, 2}},
    {"CHO", 2, {1}},        {"LU", 3, {1, 2}},      {"LUP", 4, {1, 2, 3}},
    {"add_s", 3, {2}},      {"multi_s", 3, {2}},    {"inv_s", 2, {1}},
    {"pow", 3, {2}},        {"deriveFrom", 3, {}},  {"indicator", 3, {}},
    {"concat", 3, {2}},
};

}

PredTable::PredTable() {
    for (const BuiltinPred& b : kBuiltins) {
        PredId id = (PredId)preds_.size();
        preds_.push_back({b.name, b.arity, true, b.results});
        index_.emplace(b.name, id);
    }
}

PredId PredTable::intern(const std::string& name, std::size_t arity) {
    auto it = index_.find(name);
    if (it != index_.end()) {
        const PredInfo& p = preds_[it->second];
        if (p.arity != arity)
            throw ArityError(name + " takes " + std::to_string(p.arity) + " arguments, got " +
                             std::to_string(arity));
        return it->second;
    }
    PredId id = (PredId)preds_.size();
    preds_.push_back({name, arity, false});
    index_.emplace(name, id);
    return id;
}

std::string show_atom(const Symbols& sym, const Atom& a) {
    std::string out = sym.preds.info(a.pred).name + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i)
            out += ", ";
        out += sym.terms.show(a.args[i]);
    }
    return out + ")";
}

std::string show_atoms(const Symbols& sym, const std::vector<Atom>& atoms) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i)
            out += ", ";
        out += show_atom(sym, atoms[i]);
    }
    return out;
}

}
