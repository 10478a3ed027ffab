#include "hadad/cost.hpp"

#include <algorithm>
#include <cmath>

#include "hadad/errors.hpp"
#include "hadad/mnc.hpp"

namespace hadad {

namespace {

double clamp01(double s) { return std::max(0.0, std::min(1.0, s)); }

double cells(Shape s) { return (double)s.rows * (double)s.cols; }

}

double naive_sparsity(Op op, const std::vector<SparsityInput>& inputs, Shape out) {
    auto s = [&](std::size_t i) { return inputs.at(i).sparsity; };
    auto in = [&](std::size_t i) { return inputs.at(i).shape; };
    switch (op) {
    case Op::Add:
        return clamp01(s(0) + s(1));
    case Op::MatMul: {
        double n = (double)in(0).cols;
        return clamp01(s(0) * n) * clamp01(s(1) * n);
    }
    case Op::ElemMul:
        return std::min(s(0), s(1));
    case Op::ElemDiv:
        return s(0);
    case Op::ScalarMul: {
        std::size_t sc = in(0).is_scalar() ? 0 : 1;
        if (s(sc) == 0.0)
            return 0.0;
        if (out.is_scalar())
            return 1.0;
        return s(1 - sc);
    }
    case Op::Transpose:
    case Op::Rev:
        return s(0);
    case Op::Inverse:
    case Op::Exp:
    case Op::Adj:
    case Op::Cho:
    case Op::Qr:
    case Op::Lu:
    case Op::Lup:
        return s(0);
    case Op::Det:
    case Op::Trace:
    case Op::Sum:
    case Op::Min:
    case Op::Max:
    case Op::Mean:
    case Op::Var:
    case Op::Pow:
        return 1.0;
    case Op::RowSums:
    case Op::RowMeans:
    case Op::RowVars:
    case Op::RowMaxs:
    case Op::RowMins:
        return clamp01(s(0) * (double)in(0).cols);
    case Op::ColSums:
    case Op::ColMeans:
    case Op::ColVars:
    case Op::ColMaxs:
    case Op::ColMins:
        return clamp01(s(0) * (double)in(0).rows);
    case Op::Diag:
        return clamp01(s(0) * cells(in(0)) / cells(out));
    case Op::DSum:
        return clamp01((s(0) * cells(in(0)) + s(1) * cells(in(1))) / cells(out));
    case Op::DProd:
        return s(0) * s(1);
    case Op::Concat:
        return clamp01((s(0) * cells(in(0)) + s(1) * cells(in(1))) / cells(out));
    default:
        throw UnsupportedOperator("no sparsity rule for this node kind");
    }
}

namespace {

struct NodeEst {
    Shape shape;
    double sparsity = 1.0;
    MncHistogram hist;
};

class CostEval {
public:
    CostEval(const ExprArena& arena, const Catalog& catalog, Estimator est)
        : arena_(arena), catalog_(catalog), est_(est) {}

    const NodeEst& get(NodeId id) {
        auto it = memo_.find(id);
        if (it != memo_.end())
            return it->second;
        const Node& n = arena_.node(id);
        NodeEst e;
        if (n.op == Op::Leaf) {
            const MatrixDescriptor& d = catalog_.need(n.name);
            e.shape = {d.rows, d.cols};
            e.sparsity = d.sparsity();
            if (est_ == Estimator::Mnc)
                e.hist = histogram_for(d);
        } else if (n.op == Op::Const) {
            e.shape = {1, 1};
            e.sparsity = n.value != 0.0 ? 1.0 : 0.0;
            if (est_ == Estimator::Mnc)
                e.hist = uniform_histogram(e.shape, e.sparsity);
        } else if (n.op == Op::ViewRef) {
            const ViewDef& v = catalog_.views.at(n.name);
            const NodeEst& body = get(v.root);
            e.shape = v.shape;
            e.sparsity = body.sparsity;
            if (est_ == Estimator::Mnc)
                e.hist = body.hist;
        } else {
            std::vector<SparsityInput> in;
            std::vector<Shape> shapes;
            std::vector<const MncHistogram*> hists;
            for (NodeId kid : n.kids) {
                const NodeEst& k = get(kid);
                in.push_back({k.shape, k.sparsity});
                shapes.push_back(k.shape);
                hists.push_back(&k.hist);
            }
            e.shape = op_shape(n.op, shapes);
            bool mnc_op = n.op == Op::MatMul || n.op == Op::Transpose ||
                          n.op == Op::ElemMul || n.op == Op::Add;
            if (est_ == Estimator::Mnc && mnc_op) {
                MncResult r;
                switch (n.op) {
                case Op::MatMul: r = mnc_multiply(*hists[0], *hists[1]); break;
                case Op::Transpose: r = mnc_transpose(*hists[0]); break;
                case Op::ElemMul: r = mnc_elem_multiply(*hists[0], *hists[1]); break;
                default: r = mnc_add(*hists[0], *hists[1]); break;
                }
                e.hist = std::move(r.hist);
                double c = cells(e.shape);
                e.sparsity = c > 0.0 ? r.nnz / c : 0.0;
            } else {
                e.sparsity = naive_sparsity(n.op, in, e.shape);
                if (est_ == Estimator::Mnc)
                    e.hist = uniform_histogram(e.shape, e.sparsity);
            }
        }
        return memo_.emplace(id, std::move(e)).first->second;
    }

private:
    const ExprArena& arena_;
    const Catalog& catalog_;
    Estimator est_;
    std::map<NodeId, NodeEst> memo_;
};

}

CostEstimate estimate_cost(const ExprArena& arena, NodeId root, const Catalog& catalog,
                           Estimator estimator) {
    CostEval eval(arena, catalog, estimator);
    CostEstimate out;
    for (NodeId id : arena.topo_order(root)) {
        const Node& n = arena.node(id);
        const NodeEst& e = eval.get(id);
        double entries = e.shape.is_scalar() ? 1.0 : cells(e.shape) * e.sparsity;
        out.per_node[id] = entries;
        bool leaf = n.op == Op::Leaf || n.op == Op::Const || n.op == Op::ViewRef;
        if (id == root || leaf)
            continue;
        out.total += entries;
    }
    if (std::isinf(out.total))
        out.saturated = true;
    return out;
}

double expression_cost(const ExprArena& arena, NodeId root, const Catalog& catalog,
                       Estimator estimator) {
    return estimate_cost(arena, root, catalog, estimator).total;
}

}
