#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hadad/expr.hpp"

namespace hadad {

struct MncVectors {
    std::vector<double> row_counts;
    std::vector<double> col_counts;
};

// Marks a matrix as the join of two sources: m = [left | indicator %*% right].
struct DerivedSource {
    std::string left;
    std::string right;
    std::string indicator;
};

struct MatrixDescriptor {
    std::string name;
    std::string file;     // constant used in name atoms; defaults to name
    std::size_t rows = 1;
    std::size_t cols = 1;
    double nnz = 1.0;
    std::vector<std::string> tags;   // subset of S, L, U, O, P, I, Z
    std::optional<MncVectors> mnc;
    std::optional<DerivedSource> derive;

    double sparsity() const {
        double cells = (double)rows * (double)cols;
        return cells > 0 ? nnz / cells : 0.0;
    }
    bool has_tag(const std::string& t) const;
};

struct Shape {
    std::size_t rows = 1;
    std::size_t cols = 1;
    bool operator==(const Shape&) const = default;
    bool is_scalar() const { return rows == 1 && cols == 1; }
};

struct ViewDef {
    std::string name;
    std::string text;
    NodeId root = 0;
    Shape shape;
};

struct Catalog {
    std::map<std::string, MatrixDescriptor> descriptors;
    std::map<std::string, ViewDef> views;
    std::vector<std::string> view_order;

    void add(MatrixDescriptor d);
    const MatrixDescriptor* find(const std::string& name) const;
    const MatrixDescriptor& need(const std::string& name) const;
    bool has_view(const std::string& name) const { return views.count(name) > 0; }
};

Catalog load_catalog(const std::string& path);

// View files hold one `name := expression` definition per line.
void load_views(Catalog& catalog, const std::string& path, ExprArena& arena);
void register_view(Catalog& catalog, const std::string& name, const std::string& text,
                   ExprArena& arena);

// Shape of an operator node given its children's shapes.
Shape op_shape(Op op, const std::vector<Shape>& kids);

std::unordered_map<NodeId, Shape> infer_shapes(const ExprArena& arena, NodeId root,
                                               const Catalog& catalog);
Shape infer_shape(const ExprArena& arena, NodeId root, const Catalog& catalog);

}
