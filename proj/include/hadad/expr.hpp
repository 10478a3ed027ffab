#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace hadad {

enum class Op {
    Leaf,
    Const,
    ViewRef,
    Add,
    MatMul,
    ElemMul,
    ElemDiv,
    ScalarMul,
    Transpose,
    Inverse,
    Det,
    Trace,
    Diag,
    Exp,
    Adj,
    Sum,
    RowSums,
    ColSums,
    RowMeans,
    ColMeans,
    RowVars,
    ColVars,
    RowMaxs,
    RowMins,
    ColMaxs,
    ColMins,
    Min,
    Max,
    Mean,
    Var,
    Rev,
    Cho,
    Qr,
    Lu,
    Lup,
    DSum,
    DProd,
    Concat,
    Pow,
};

using NodeId = std::uint32_t;

struct Node {
    Op op = Op::Leaf;
    std::string name;          // Leaf / ViewRef
    double value = 0.0;        // Const
    std::vector<NodeId> kids;
    std::uint64_t hash = 0;    // stable content hash of the subtree
};

// Hash-consed expression arena: structurally identical subtrees share one id.
class ExprArena {
public:
    NodeId leaf(const std::string& name);
    NodeId constant(double v);
    NodeId view_ref(const std::string& name);
    NodeId mk(Op op, std::vector<NodeId> kids);

    const Node& node(NodeId id) const { return nodes_[id]; }
    std::size_t size() const { return nodes_.size(); }

    // distinct nodes of the subtree, children before parents
    std::vector<NodeId> topo_order(NodeId root) const;
    std::size_t count_operator_nodes(NodeId root) const;

private:
    NodeId intern(Node n);

    std::vector<Node> nodes_;
    std::unordered_map<std::uint64_t, std::vector<NodeId>> pool_;
};

enum class Dialect { Generic, R, Dml };

std::string emit(const ExprArena& arena, NodeId root, Dialect dialect);

const char* op_name(Op op);
bool op_is_binary(Op op);

// Shortest decimal form that parses back to the same double.
std::string format_constant(double v);

}
