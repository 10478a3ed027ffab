#include "hadad/encode.hpp"

#include <cstdio>
#include <string>
#include <unordered_set>

#include "hadad/errors.hpp"

namespace hadad {

namespace {

class Encoder {
public:
    Encoder(Symbols& sym, const ExprArena& arena, const Catalog& catalog)
        : sym_(sym), arena_(arena), catalog_(catalog) {}

    EncodedQuery run(NodeId root) {
        shapes_ = infer_shapes(arena_, root, catalog_);
        for (NodeId id : arena_.topo_order(root))
            encode_node(id);
        out_.query.head = {out_.node_term.at(root)};
        return std::move(out_);
    }

    // Body only, for view rules: the caller owns head placement.
    std::vector<Atom> body(NodeId root, TermId& root_term) {
        shapes_ = infer_shapes(arena_, root, catalog_);
        for (NodeId id : arena_.topo_order(root))
            encode_node(id);
        root_term = out_.node_term.at(root);
        return std::move(out_.query.atoms);
    }

private:
    PredId pred(const char* name, std::size_t arity) {
        return sym_.preds.intern(name, arity);
    }

    void emit(const char* p, std::vector<TermId> args) {
        out_.query.atoms.push_back({pred(p, args.size()), std::move(args)});
    }

    TermId node_var(NodeId id) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "n%llx",
                      (unsigned long long)arena_.node(id).hash);
        std::string text = buf;
        auto it = var_owner_.find(text);
        if (it != var_owner_.end() && it->second != id)
            text += "_" + std::to_string(id);
        var_owner_.emplace(text, id);
        return sym_.terms.var(text);
    }

    void emit_size(TermId t, std::size_t rows, std::size_t cols) {
        emit("size", {t, sym_.terms.dim_const((long long)rows),
                      sym_.terms.dim_const((long long)cols)});
    }

    void emit_tags(TermId t, const MatrixDescriptor& d) {
        for (const std::string& tag : d.tags) {
            if (tag == "Z") {
                emit("Zero", {t});
            } else if (tag == "I") {
                emit("Identity", {t});
            } else {
                emit("type", {t, sym_.terms.name_const(tag)});
            }
        }
    }

    // A leaf pulled in as the source of a derived matrix, not itself a node of
    // the expression. Reuses the expression's term when the leaf also appears
    // there.
    TermId source_term(const std::string& name) {
        auto known = out_.leaf_term.find(name);
        if (known != out_.leaf_term.end()) return known->second;
        const MatrixDescriptor& d = catalog_.need(name);
        TermId t = sym_.terms.var("src_" + name);
        out_.leaf_term.emplace(name, t);
        emit("name", {t, sym_.terms.name_const(d.file)});
        emit_size(t, d.rows, d.cols);
        emit_tags(t, d);
        emit_derivation(t, d);
        return t;
    }

    void emit_derivation(TermId t, const MatrixDescriptor& d) {
        if (!d.derive) return;
        TermId left = source_term(d.derive->left);
        TermId right = source_term(d.derive->right);
        TermId ind = source_term(d.derive->indicator);
        emit("deriveFrom", {t, left, right});
        emit("indicator", {t, ind, right});
    }

    void encode_node(NodeId id) {
        const Node& n = arena_.node(id);
        TermId t = node_var(id);
        out_.node_term.emplace(id, t);
        Shape shape = shapes_.at(id);

        switch (n.op) {
            case Op::Leaf: {
                const MatrixDescriptor& d = catalog_.need(n.name);
                if (!out_.leaf_term.count(n.name)) out_.leaf_term.emplace(n.name, t);
                emit("name", {t, sym_.terms.name_const(d.file)});
                emit_tags(t, d);
                emit_derivation(t, d);
                break;
            }
            case Op::Const:
                emit("name", {t, sym_.terms.name_const(format_constant(n.value))});
                break;
            case Op::ViewRef:
                emit("name", {t, sym_.terms.name_const(n.name)});
                break;
            default:
                encode_operator(id, n, t, shape);
                break;
        }
        emit_size(t, shape.rows, shape.cols);
    }

    void encode_operator(NodeId id, const Node& n, TermId t, Shape shape) {
        std::vector<TermId> k;
        for (NodeId kid : n.kids) k.push_back(out_.node_term.at(kid));
        auto kid_shape = [&](int i) { return shapes_.at(n.kids[i]); };

        switch (n.op) {
            case Op::Add:
                if (kid_shape(0).is_scalar() && kid_shape(1).is_scalar())
                    emit("add_s", {k[0], k[1], t});
                else
                    emit("add_M", {k[0], k[1], t});
                break;
            case Op::MatMul:
                emit("multi_M", {k[0], k[1], t});
                break;
            case Op::ElemMul:
                emit("multi_E", {k[0], k[1], t});
                break;
            case Op::ElemDiv:
                emit("div_M", {k[0], k[1], t});
                break;
            case Op::ScalarMul: {
                bool s0 = kid_shape(0).is_scalar();
                bool s1 = kid_shape(1).is_scalar();
                if (s0 && s1)
                    emit("multi_s", {k[0], k[1], t});
                else if (s0)
                    emit("multi_MS", {k[0], k[1], t});
                else
                    emit("multi_MS", {k[1], k[0], t});
                break;
            }
            case Op::Transpose: emit("tr", {k[0], t}); break;
            case Op::Inverse: emit("inv_M", {k[0], t}); break;
            case Op::Det: emit("det", {k[0], t}); break;
            case Op::Trace: emit("trace", {k[0], t}); break;
            case Op::Diag: emit("diag", {k[0], t}); break;
            case Op::Exp: emit("exp", {k[0], t}); break;
            case Op::Adj: emit("adj", {k[0], t}); break;
            case Op::Sum: emit("sum", {k[0], t}); break;
            case Op::RowSums: emit("rowSums", {k[0], t}); break;
            case Op::ColSums: emit("colSums", {k[0], t}); break;
            case Op::RowMeans: emit("rowMean", {k[0], t}); break;
            case Op::ColMeans: emit("colMean", {k[0], t}); break;
            case Op::RowVars: emit("rowVar", {k[0], t}); break;
            case Op::ColVars: emit("colVar", {k[0], t}); break;
            case Op::RowMaxs: emit("rowMax", {k[0], t}); break;
            case Op::RowMins: emit("rowMin", {k[0], t}); break;
            case Op::ColMaxs: emit("colMax", {k[0], t}); break;
            case Op::ColMins: emit("colMin", {k[0], t}); break;
            case Op::Min: emit("min", {k[0], t}); break;
            case Op::Max: emit("max", {k[0], t}); break;
            case Op::Mean: emit("mean", {k[0], t}); break;
            case Op::Var: emit("var", {k[0], t}); break;
            case Op::Rev: emit("rev", {k[0], t}); break;
            case Op::Cho: emit("CHO", {k[0], t}); break;
            case Op::Qr: {
                TermId r = factor_var(id, "r");
                emit("QR", {k[0], t, r});
                emit_size(r, kid_shape(0).cols, kid_shape(0).cols);
                break;
            }
            case Op::Lu: {
                TermId u = factor_var(id, "u");
                emit("LU", {k[0], t, u});
                emit_size(u, shape.rows, shape.cols);
                break;
            }
            case Op::Lup: {
                TermId u = factor_var(id, "u");
                TermId p = factor_var(id, "p");
                emit("LUP", {k[0], t, u, p});
                emit_size(u, shape.rows, shape.cols);
                emit_size(p, shape.rows, shape.cols);
                break;
            }
            case Op::DSum: emit("sum_D", {k[0], k[1], t}); break;
            case Op::DProd: emit("product_D", {k[0], k[1], t}); break;
            case Op::Concat: emit("concat", {k[0], k[1], t}); break;
            case Op::Pow: emit("pow", {k[0], k[1], t}); break;
            default:
                throw UnsupportedOperator(std::string("cannot encode ") + op_name(n.op));
        }
    }

    // Companion factor of a decomposition node (the part the expression does
    // not name).
    TermId factor_var(NodeId id, const char* suffix) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "n%llx_%s",
                      (unsigned long long)arena_.node(id).hash, suffix);
        return sym_.terms.var(buf);
    }

    Symbols& sym_;
    const ExprArena& arena_;
    const Catalog& catalog_;
    std::unordered_map<NodeId, Shape> shapes_;
    std::unordered_map<std::string, NodeId> var_owner_;
    EncodedQuery out_;
};

}

EncodedQuery encode_expression(Symbols& sym, const ExprArena& arena, NodeId root,
                               const Catalog& catalog) {
    return Encoder(sym, arena, catalog).run(root);
}

std::vector<Constraint> view_constraints(Symbols& sym, const ExprArena& arena,
                                         const Catalog& catalog) {
    std::vector<Constraint> out;
    for (const std::string& name : catalog.view_order) {
        const ViewDef& view = catalog.views.at(name);
        TermId root = 0;
        std::vector<Atom> body = Encoder(sym, arena, catalog).body(view.root, root);
        Atom named{sym.preds.intern("name", 2), {root, sym.terms.name_const(name)}};

        Constraint io;
        io.kind = ConstraintKind::Tgd;
        io.id = "view:" + name + ":io";
        io.premise = body;
        io.conclusion = {named};
        out.push_back(std::move(io));

        Constraint oi;
        oi.kind = ConstraintKind::Tgd;
        oi.id = "view:" + name + ":oi";
        oi.premise = {named};
        oi.conclusion = body;
        std::unordered_set<TermId> seen;
        for (const Atom& a : body)
            for (TermId t : a.args)
                if (sym.terms.is_var(t) && t != root && seen.insert(t).second)
                    oi.existentials.push_back(t);
        out.push_back(std::move(oi));
    }
    return out;
}

}
