#include "hadad/decode.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "hadad/errors.hpp"

namespace hadad {

namespace {

const std::unordered_map<std::string, Op>& op_table() {
    static const std::unordered_map<std::string, Op> table = {
        {"add_M", Op::Add},        {"add_s", Op::Add},
        {"multi_M", Op::MatMul},   {"multi_E", Op::ElemMul},
        {"div_M", Op::ElemDiv},    {"multi_MS", Op::ScalarMul},
        {"multi_s", Op::ScalarMul},{"tr", Op::Transpose},
        {"inv_M", Op::Inverse},    {"inv_s", Op::Inverse},
        {"det", Op::Det},          {"trace", Op::Trace},
        {"diag", Op::Diag},        {"exp", Op::Exp},
        {"adj", Op::Adj},          {"sum", Op::Sum},
        {"rowSums", Op::RowSums},  {"colSums", Op::ColSums},
        {"rowMean", Op::RowMeans}, {"colMean", Op::ColMeans},
        {"rowVar", Op::RowVars},   {"colVar", Op::ColVars},
        {"rowMax", Op::RowMaxs},   {"rowMin", Op::RowMins},
        {"colMax", Op::ColMaxs},   {"colMin", Op::ColMins},
        {"min", Op::Min},          {"max", Op::Max},
        {"mean", Op::Mean},        {"var", Op::Var},
        {"rev", Op::Rev},          {"CHO", Op::Cho},
        {"QR", Op::Qr},            {"LU", Op::Lu},
        {"LUP", Op::Lup},          {"sum_D", Op::DSum},
        {"product_D", Op::DProd},  {"concat", Op::Concat},
        {"pow", Op::Pow},
    };
    return table;
}

struct CycleDetected {};

class Decoder {
public:
    Decoder(ExprArena& arena, const Symbols& sym, const std::vector<Atom>& atoms,
            const Catalog& catalog)
        : arena_(arena), sym_(sym), catalog_(catalog) {
        for (const Atom& a : atoms)
            index(a);
        for (auto& [t, ps] : producers_)
            std::stable_sort(ps.begin(), ps.end(),
                             [](const Producer& a, const Producer& b) {
                                 if ((a.pos < 0) != (b.pos < 0))
                                     return a.pos < 0;
                                 return a.key < b.key;
                             });
    }

    NodeId term(TermId t) {
        auto hit = done_.find(t);
        if (hit != done_.end())
            return hit->second;
        if (sym_.terms.info(t).kind == TermKind::DimConst) {
            NodeId n = arena_.constant((double)sym_.terms.info(t).dim);
            done_.emplace(t, n);
            return n;
        }
        if (!visiting_.insert(t).second)
            throw CycleDetected{};

        auto found = producers_.find(t);
        std::size_t tried = 0;
        if (found != producers_.end()) {
            for (const Producer& p : found->second) {
                ++tried;
                try {
                    NodeId n = build(p);
                    visiting_.erase(t);
                    done_.emplace(t, n);
                    return n;
                } catch (const CycleDetected&) {
                }
            }
        }
        visiting_.erase(t);
        if (tried > 1)
            throw AmbiguousProducer("every producer of " + show(t) + " is cyclic");
        throw DanglingResult("no producer for " + show(t));
    }

private:
    struct Producer {
        const Atom* atom;
        int pos;          // result position; -1 for a name atom
        std::string key;  // deterministic order among operator producers
    };

    void index(const Atom& a) {
        const PredInfo& info = sym_.preds.info(a.pred);
        if (info.name == "name") {
            producers_[a.args[0]].push_back({&a, -1, show(a.args[1])});
            return;
        }
        if (info.results.empty())
            return;
        // Only the first result of a decomposition has a surface form.
        int pos = info.results.front();
        std::string key = info.name;
        for (TermId arg : a.args)
            key += "," + show(arg);
        producers_[a.args[pos]].push_back({&a, pos, std::move(key)});
    }

    NodeId build(const Producer& p) {
        if (p.pos < 0)
            return named(show(p.atom->args[1]));

        const PredInfo& info = sym_.preds.info(p.atom->pred);
        std::vector<NodeId> kids;
        for (std::size_t i = 0; i < p.atom->args.size(); ++i) {
            if (std::find(info.results.begin(), info.results.end(), (int)i) !=
                info.results.end())
                continue;
            kids.push_back(term(p.atom->args[i]));
        }
        return arena_.mk(op_table().at(info.name), std::move(kids));
    }

    NodeId named(const std::string& text) {
        if (catalog_.has_view(text))
            return arena_.view_ref(text);
        for (const auto& [nm, d] : catalog_.descriptors)
            if (d.file == text)
                return arena_.leaf(d.name);
        if (catalog_.find(text))
            return arena_.leaf(text);
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end && *end == '\0' && end != text.c_str())
            return arena_.constant(v);
        throw DanglingResult("name \"" + text + "\" is not in the catalog");
    }

    std::string show(TermId t) const {
        const TermInfo& info = sym_.terms.info(t);
        if (info.kind == TermKind::DimConst)
            return std::to_string(info.dim);
        return info.text;
    }

    ExprArena& arena_;
    const Symbols& sym_;
    const Catalog& catalog_;
    std::unordered_map<TermId, std::vector<Producer>> producers_;
    std::unordered_map<TermId, NodeId> done_;
    std::unordered_set<TermId> visiting_;
};

}

NodeId decode_candidate(ExprArena& arena, const Symbols& sym,
                        const std::vector<Atom>& atoms, TermId head,
                        const Catalog& catalog) {
    return Decoder(arena, sym, atoms, catalog).term(head);
}

}
