#include "hadad/randexpr.hpp"

#include <algorithm>

namespace hadad {

namespace {

struct Entry {
    NodeId id;
    Shape shape;
    int depth;
};

const std::vector<Op>& default_menu() {
    static const std::vector<Op> menu = {
        Op::Add,      Op::MatMul,  Op::ElemMul, Op::ScalarMul, Op::Transpose,
        Op::Inverse,  Op::Trace,   Op::Sum,     Op::RowSums,   Op::ColSums,
        Op::Rev,      Op::DSum,    Op::Concat,  Op::Mean,      Op::Diag,
    };
    return menu;
}

}

NodeId random_expression(ExprArena& arena, const Catalog& catalog, std::mt19937_64& rng,
                         const RandExprOptions& opt) {
    const std::vector<Op>& menu = opt.ops.empty() ? default_menu() : opt.ops;
    std::vector<Entry> pool;
    for (const auto& [name, d] : catalog.descriptors)
        pool.push_back({arena.leaf(name), {d.rows, d.cols}, 0});
    pool.push_back({arena.constant(2.0), {1, 1}, 0});
    pool.push_back({arena.constant(0.5), {1, 1}, 0});

    auto pick = [&](auto pred) -> const Entry* {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (pred(pool[i]))
                idx.push_back(i);
        if (idx.empty())
            return nullptr;
        return &pool[idx[rng() % idx.size()]];
    };
    auto any = [](const Entry&) { return true; };
    auto square = [](const Entry& e) { return e.shape.rows == e.shape.cols; };

    Entry best{0, {1, 1}, -1};
    for (int step = 0; step < opt.steps; ++step) {
        Op op = menu[rng() % menu.size()];
        std::vector<const Entry*> kids;
        switch (op) {
        case Op::Add:
        case Op::ElemMul: {
            const Entry* a = pick(any);
            const Entry* b = pick([&](const Entry& e) { return e.shape == a->shape; });
            kids = {a, b};
            break;
        }
        case Op::MatMul: {
            const Entry* a = pick(any);
            const Entry* b = pick([&](const Entry& e) { return e.shape.rows == a->shape.cols; });
            kids = {a, b};
            break;
        }
        case Op::ScalarMul: {
            const Entry* a = pick([](const Entry& e) { return e.shape.is_scalar(); });
            const Entry* b = pick(any);
            if (a && b && rng() % 2)
                kids = {b, a};
            else
                kids = {a, b};
            break;
        }
        case Op::Pow: {
            const Entry* a = pick([](const Entry& e) { return e.shape.is_scalar(); });
            const Entry* b = pick([](const Entry& e) { return e.shape.is_scalar(); });
            kids = {a, b};
            break;
        }
        case Op::Inverse:
        case Op::Trace:
        case Op::Det:
        case Op::Exp:
            kids = {pick(square)};
            break;
        case Op::DSum: {
            kids = {pick(any), pick(any)};
            break;
        }
        case Op::Concat: {
            const Entry* a = pick(any);
            const Entry* b = pick([&](const Entry& e) { return e.shape.rows == a->shape.rows; });
            kids = {a, b};
            break;
        }
        default:
            kids = {pick(any)};
            break;
        }
        if (std::any_of(kids.begin(), kids.end(), [](const Entry* k) { return k == nullptr; }))
            continue;
        int depth = 0;
        std::vector<NodeId> ids;
        std::vector<Shape> shapes;
        for (const Entry* k : kids) {
            depth = std::max(depth, k->depth);
            ids.push_back(k->id);
            shapes.push_back(k->shape);
        }
        depth += 1;
        if (depth > opt.max_depth)
            continue;
        Shape out = op_shape(op, shapes);
        pool.push_back({arena.mk(op, ids), out, depth});
        if (depth >= best.depth)
            best = pool.back();
    }
    if (best.depth < 0)
        return arena.mk(Op::Transpose, {pool.front().id});
    return best.id;
}

}
