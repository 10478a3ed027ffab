#include "hadad/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "hadad/errors.hpp"

namespace hadad {

namespace {

const Matrix& lookup(const Env& env, const std::string& name) {
    auto it = env.find(name);
    if (it == env.end()) throw UnknownName(name);
    return it->second;
}

Matrix eval_op(Op op, const std::vector<const Matrix*>& k) {
    switch (op) {
        case Op::Add: return add(*k[0], *k[1]);
        case Op::MatMul: return matmul(*k[0], *k[1]);
        case Op::ElemMul: return elem_mul(*k[0], *k[1]);
        case Op::ElemDiv: return elem_div(*k[0], *k[1]);
        case Op::ScalarMul: {
            if (k[0]->is_scalar()) return scalar_mul(k[0]->scalar(), *k[1]);
            if (k[1]->is_scalar()) return scalar_mul(k[1]->scalar(), *k[0]);
            throw ShapeMismatch("scalar multiply without a scalar operand");
        }
        case Op::Transpose: return transpose(*k[0]);
        case Op::Inverse: return inverse(*k[0]);
        case Op::Det: return Matrix::scalar_of(determinant(*k[0]));
        case Op::Trace: return Matrix::scalar_of(trace_of(*k[0]));
        case Op::Diag: return diag_of(*k[0]);
        case Op::Exp: return matrix_exp(*k[0]);
        case Op::Adj: return adjugate(*k[0]);
        case Op::Sum: return Matrix::scalar_of(sum_all(*k[0]));
        case Op::Min: return Matrix::scalar_of(min_all(*k[0]));
        case Op::Max: return Matrix::scalar_of(max_all(*k[0]));
        case Op::Mean: return Matrix::scalar_of(mean_all(*k[0]));
        case Op::Var: return Matrix::scalar_of(var_all(*k[0]));
        case Op::RowSums: return row_sums(*k[0]);
        case Op::ColSums: return col_sums(*k[0]);
        case Op::RowMeans: return row_means(*k[0]);
        case Op::ColMeans: return col_means(*k[0]);
        case Op::RowVars: return row_vars(*k[0]);
        case Op::ColVars: return col_vars(*k[0]);
        case Op::RowMaxs: return row_maxs(*k[0]);
        case Op::RowMins: return row_mins(*k[0]);
        case Op::ColMaxs: return col_maxs(*k[0]);
        case Op::ColMins: return col_mins(*k[0]);
        case Op::Rev: return reverse_rows(*k[0]);
        case Op::Cho: return cholesky(*k[0]);
        case Op::Qr: return qr_householder(*k[0]).q;
        case Op::Lu: return lu_doolittle(*k[0]).l;
        case Op::Lup: return lu_partial_pivot(*k[0]).l;
        case Op::DSum: return direct_sum(*k[0], *k[1]);
        case Op::DProd: return kronecker(*k[0], *k[1]);
        case Op::Concat: return hconcat(*k[0], *k[1]);
        case Op::Pow: {
            if (!k[0]->is_scalar() || !k[1]->is_scalar())
                throw ShapeMismatch("pow on non-scalars");
            return Matrix::scalar_of(std::pow(k[0]->scalar(), k[1]->scalar()));
        }
        default:
            throw UnsupportedOperator(op_name(op));
    }
}

}

Matrix eval_numeric(const ExprArena& arena, NodeId root, const Env& bindings) {
    std::unordered_map<NodeId, Matrix> memo;
    for (NodeId id : arena.topo_order(root)) {
        const Node& n = arena.node(id);
        Matrix value;
        switch (n.op) {
            case Op::Leaf:
            case Op::ViewRef:
                value = lookup(bindings, n.name);
                break;
            case Op::Const:
                value = Matrix::scalar_of(n.value);
                break;
            default: {
                std::vector<const Matrix*> kids;
                kids.reserve(n.kids.size());
                for (NodeId kid : n.kids) kids.push_back(&memo.at(kid));
                value = eval_op(n.op, kids);
            }
        }
        if (!all_finite(value))
            throw NumericOverflow(std::string("while evaluating ") + op_name(n.op));
        memo.emplace(id, std::move(value));
    }
    return memo.at(root);
}

std::size_t scaled_dim(const Catalog& catalog, std::size_t dim, std::size_t scale) {
    std::size_t dmax = 1;
    for (const auto& [name, d] : catalog.descriptors) {
        dmax = std::max(dmax, d.rows);
        dmax = std::max(dmax, d.cols);
    }
    if (dmax <= scale) return dim;
    auto v = (std::size_t)std::llround((double)dim * (double)scale / (double)dmax);
    return std::max<std::size_t>(1, v);
}

namespace {

std::uint64_t name_seed(std::uint64_t seed, const std::string& name) {
    std::uint64_t h = 0xcbf29ce484222325ull ^ seed;
    for (char c : name) {
        h ^= (unsigned char)c;
        h *= 0x100000001b3ull;
    }
    return h;
}

Matrix generate(const MatrixDescriptor& d, std::size_t r, std::size_t c,
                std::uint64_t seed) {
    std::mt19937_64 rng(name_seed(seed, d.name));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.5, 2.0);

    if (d.has_tag("Z")) return Matrix::zeros(r, c);
    if (d.has_tag("I")) return Matrix::identity(r);
    if (d.has_tag("P")) {
        std::vector<std::size_t> perm(r);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Matrix m(r, r);
        for (std::size_t i = 0; i < r; ++i) m.at(i, perm[i]) = 1.0;
        return m;
    }
    if (r == 1 && c == 1) return Matrix::scalar_of(pos(rng));
    if (d.has_tag("O")) {
        Matrix g(r, c);
        for (double& v : g.a) v = uni(rng);
        return qr_householder(g).q;
    }
    if (d.has_tag("S")) {
        Matrix g(r, r);
        for (double& v : g.a) v = uni(rng);
        Matrix m = matmul(transpose(g), g);
        for (std::size_t i = 0; i < r; ++i) m.at(i, i) += 1.0 + 0.1 * (double)r;
        return m;
    }
    if (d.has_tag("L") || d.has_tag("U")) {
        bool lower = d.has_tag("L");
        Matrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                if (i == j)
                    m.at(i, j) = 1.0 + std::abs(uni(rng));
                else if ((lower && j < i) || (!lower && j > i))
                    m.at(i, j) = uni(rng);
            }
        return m;
    }

    Matrix m(r, c);
    for (double& v : m.a) v = uni(rng);
    if (r == c) {
        // diagonal shift keeps square catalog matrices comfortably invertible
        for (std::size_t i = 0; i < r; ++i) m.at(i, i) += (double)r;
    }
    double s = d.sparsity();
    if (s < 1.0) {
        std::bernoulli_distribution keep(s);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                if (r == c && i == j) continue;
                if (!keep(rng)) m.at(i, j) = 0.0;
            }
    }
    return m;
}

}

Env random_instance(const Catalog& catalog, std::uint64_t seed, std::size_t scale,
                    const ExprArena* arena) {
    Env env;
    for (const auto& [name, d] : catalog.descriptors) {
        if (d.derive) continue;
        std::size_t r = scaled_dim(catalog, d.rows, scale);
        std::size_t c = scaled_dim(catalog, d.cols, scale);
        env.emplace(name, generate(d, r, c, seed));
    }
    // joined matrices are assembled from their sources: m = [left | indicator * right]
    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& [name, d] : catalog.descriptors) {
            if (!d.derive || env.count(name)) continue;
            const DerivedSource& ds = *d.derive;
            if (!env.count(ds.left) || !env.count(ds.right) || !env.count(ds.indicator))
                continue;
            env.emplace(name, hconcat(env.at(ds.left),
                                      matmul(env.at(ds.indicator), env.at(ds.right))));
            progress = true;
        }
    }
    for (const auto& [name, d] : catalog.descriptors)
        if (!env.count(name)) throw UnknownName("derived sources for " + name);
    if (arena) {
        for (const std::string& vname : catalog.view_order) {
            const ViewDef& vd = catalog.views.at(vname);
            env.emplace(vname, eval_numeric(*arena, vd.root, env));
        }
    }
    return env;
}

}
