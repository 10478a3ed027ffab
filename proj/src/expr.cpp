#include "hadad/expr.hpp"

#include <cstdio>
#include <cstring>
#include <functional>

#include "hadad/errors.hpp"

namespace hadad {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

std::uint64_t hash_node(const Node& n) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    h = mix(h, (std::uint64_t)n.op * 0x100000001b3ull + 1);
    for (char c : n.name) h = mix(h, (std::uint64_t)(unsigned char)c);
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(n.value));
    std::memcpy(&bits, &n.value, sizeof(bits));
    h = mix(h, bits);
    for (NodeId k : n.kids) h = mix(h, k + 0x9e37u);
    return h;
}

bool same_node(const Node& a, const Node& b) {
    return a.op == b.op && a.name == b.name && a.value == b.value && a.kids == b.kids;
}

}

std::string format_constant(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // prefer the short form when it round-trips
    char shortbuf[64];
    std::snprintf(shortbuf, sizeof(shortbuf), "%g", v);
    double back = 0.0;
    std::sscanf(shortbuf, "%lf", &back);
    return back == v ? std::string(shortbuf) : std::string(buf);
}

NodeId ExprArena::intern(Node n) {
    // child hashes feed the content hash so equal hashes track equal structure
    std::uint64_t content = 0xcbf29ce484222325ull;
    content = mix(content, (std::uint64_t)n.op + 1);
    for (char c : n.name) content = mix(content, (std::uint64_t)(unsigned char)c);
    std::uint64_t bits;
    std::memcpy(&bits, &n.value, sizeof(bits));
    content = mix(content, bits);
    for (NodeId k : n.kids) content = mix(content, nodes_[k].hash);
    n.hash = content;

    std::uint64_t bucket = hash_node(n);
    auto& ids = pool_[bucket];
    for (NodeId id : ids)
        if (same_node(nodes_[id], n)) return id;
    NodeId id = (NodeId)nodes_.size();
    nodes_.push_back(std::move(n));
    ids.push_back(id);
    return id;
}

NodeId ExprArena::leaf(const std::string& name) {
    Node n;
    n.op = Op::Leaf;
    n.name = name;
    return intern(std::move(n));
}

NodeId ExprArena::constant(double v) {
    Node n;
    n.op = Op::Const;
    n.value = v;
    return intern(std::move(n));
}

NodeId ExprArena::view_ref(const std::string& name) {
    Node n;
    n.op = Op::ViewRef;
    n.name = name;
    return intern(std::move(n));
}

NodeId ExprArena::mk(Op op, std::vector<NodeId> kids) {
    Node n;
    n.op = op;
    n.kids = std::move(kids);
    return intern(std::move(n));
}

std::vector<NodeId> ExprArena::topo_order(NodeId root) const {
    std::vector<NodeId> out;
    std::vector<char> seen(nodes_.size(), 0);
    std::function<void(NodeId)> walk = [&](NodeId id) {
        if (seen[id]) return;
        seen[id] = 1;
        for (NodeId k : nodes_[id].kids) walk(k);
        out.push_back(id);
    };
    walk(root);
    return out;
}

std::size_t ExprArena::count_operator_nodes(NodeId root) const {
    std::size_t n = 0;
    for (NodeId id : topo_order(root)) {
        Op op = nodes_[id].op;
        if (op != Op::Leaf && op != Op::Const && op != Op::ViewRef) ++n;
    }
    return n;
}

const char* op_name(Op op) {
    switch (op) {
        case Op::Leaf: return "leaf";
        case Op::Const: return "const";
        case Op::ViewRef: return "view";
        case Op::Add: return "add";
        case Op::MatMul: return "matmul";
        case Op::ElemMul: return "elemmul";
        case Op::ElemDiv: return "elemdiv";
        case Op::ScalarMul: return "scalarmul";
        case Op::Transpose: return "t";
        case Op::Inverse: return "solve";
        case Op::Det: return "det";
        case Op::Trace: return "trace";
        case Op::Diag: return "diag";
        case Op::Exp: return "exp";
        case Op::Adj: return "adj";
        case Op::Sum: return "sum";
        case Op::RowSums: return "rowSums";
        case Op::ColSums: return "colSums";
        case Op::RowMeans: return "rowMeans";
        case Op::ColMeans: return "colMeans";
        case Op::RowVars: return "rowVars";
        case Op::ColVars: return "colVars";
        case Op::RowMaxs: return "rowMaxs";
        case Op::RowMins: return "rowMins";
        case Op::ColMaxs: return "colMaxs";
        case Op::ColMins: return "colMins";
        case Op::Min: return "min";
        case Op::Max: return "max";
        case Op::Mean: return "mean";
        case Op::Var: return "var";
        case Op::Rev: return "rev";
        case Op::Cho: return "cho";
        case Op::Qr: return "qr";
        case Op::Lu: return "lu";
        case Op::Lup: return "lup";
        case Op::DSum: return "dsum";
        case Op::DProd: return "dprod";
        case Op::Concat: return "concat";
        case Op::Pow: return "pow";
    }
    return "?";
}

bool op_is_binary(Op op) {
    switch (op) {
        case Op::Add:
        case Op::MatMul:
        case Op::ElemMul:
        case Op::ElemDiv:
        case Op::ScalarMul:
            return true;
        default:
            return false;
    }
}

namespace {

struct Emitter {
    const ExprArena& arena;
    Dialect dialect;

    std::string run(NodeId id) const {
        const Node& n = arena.node(id);
        switch (n.op) {
            case Op::Leaf:
            case Op::ViewRef:
                return n.name;
            case Op::Const:
                if (n.value < 0.0) return "(0 - " + format_constant(-n.value) + ")";
                return format_constant(n.value);
            case Op::Add: {
                // subtraction is stored as a + (-1 * b); print it back as a - b
                const Node& rhs = arena.node(n.kids[1]);
                if (rhs.op == Op::ScalarMul && arena.node(rhs.kids[0]).op == Op::Const &&
                    arena.node(rhs.kids[0]).value == -1.0)
                    return operand(n.kids[0]) + " - " + operand(rhs.kids[1]);
                return operand(n.kids[0]) + " + " + operand(n.kids[1]);
            }
            case Op::MatMul:
                return operand(n.kids[0]) + " %*% " + operand(n.kids[1]);
            case Op::ElemMul:
            case Op::ScalarMul:
                return operand(n.kids[0]) + " * " + operand(n.kids[1]);
            case Op::ElemDiv:
                return operand(n.kids[0]) + " / " + operand(n.kids[1]);
            case Op::Adj:
            case Op::DSum:
            case Op::DProd:
                if (dialect == Dialect::Dml)
                    throw UnsupportedInDialect(std::string(op_name(n.op)) + " in dml");
                break;
            default:
                break;
        }
        if (n.op == Op::Pow && dialect == Dialect::R)
            return "(" + run(n.kids[0]) + ")^(" + run(n.kids[1]) + ")";
        if (n.op == Op::Concat && dialect == Dialect::R)
            return "cbind(" + run(n.kids[0]) + ", " + run(n.kids[1]) + ")";
        std::string out = op_name(n.op);
        out += "(";
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
            if (i) out += ", ";
            out += run(n.kids[i]);
        }
        out += ")";
        return out;
    }

    std::string operand(NodeId id) const {
        const Node& n = arena.node(id);
        if (op_is_binary(n.op)) return "(" + run(id) + ")";
        return run(id);
    }
};

}

std::string emit(const ExprArena& arena, NodeId root, Dialect dialect) {
    return Emitter{arena, dialect}.run(root);
}

}
