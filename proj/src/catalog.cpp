#include "hadad/catalog.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hadad/errors.hpp"
#include "hadad/parser.hpp"

namespace hadad {

bool MatrixDescriptor::has_tag(const std::string& t) const {
    for (const auto& s : tags)
        if (s == t) return true;
    return false;
}

void Catalog::add(MatrixDescriptor d) {
    if (descriptors.count(d.name))
        throw Error("duplicate catalog name: " + d.name);
    if (d.file.empty()) d.file = d.name;
    if (d.has_tag("I")) {
        if (d.rows != d.cols) throw Error("identity tag on non-square " + d.name);
        d.nnz = (double)d.rows;
    }
    if (d.has_tag("Z")) d.nnz = 0.0;
    if (d.nnz > (double)d.rows * (double)d.cols)
        throw Error("nnz exceeds capacity for " + d.name);
    descriptors.emplace(d.name, std::move(d));
}

const MatrixDescriptor* Catalog::find(const std::string& name) const {
    auto it = descriptors.find(name);
    return it == descriptors.end() ? nullptr : &it->second;
}

const MatrixDescriptor& Catalog::need(const std::string& name) const {
    const MatrixDescriptor* d = find(name);
    if (!d) throw UnknownName(name);
    return *d;
}

Catalog load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open catalog file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw SyntaxError("catalog " + path + ": " + e.what());
    }
    if (!doc.is_array()) throw SyntaxError("catalog must be a JSON array: " + path);

    Catalog cat;
    for (const auto& obj : doc) {
        MatrixDescriptor d;
        d.name = obj.at("name").get<std::string>();
        d.rows = obj.at("rows").get<std::size_t>();
        d.cols = obj.at("cols").get<std::size_t>();
        d.nnz = obj.contains("nnz") ? obj.at("nnz").get<double>()
                                    : (double)d.rows * (double)d.cols;
        if (obj.contains("file")) d.file = obj.at("file").get<std::string>();
        if (obj.contains("tags"))
            for (const auto& t : obj.at("tags")) d.tags.push_back(t.get<std::string>());
        if (obj.contains("derive")) {
            const auto& dv = obj.at("derive");
            d.derive = DerivedSource{dv.at("left").get<std::string>(),
                                     dv.at("right").get<std::string>(),
                                     dv.at("indicator").get<std::string>()};
        }
        cat.add(std::move(d));
    }

    // optional per-matrix nnz histograms live in sidecar .mnc files next to the catalog
    std::error_code ec;
    auto dir = std::filesystem::path(path).parent_path();
    if (dir.empty()) dir = ".";
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.path().extension() != ".mnc") continue;
        std::ifstream min(entry.path());
        if (!min) continue;
        nlohmann::json mdoc;
        try {
            min >> mdoc;
        } catch (const std::exception& e) {
            throw SyntaxError("mnc sidecar " + entry.path().string() + ": " + e.what());
        }
        auto it = cat.descriptors.find(mdoc.at("name").get<std::string>());
        if (it == cat.descriptors.end()) continue;
        MncVectors v;
        for (const auto& x : mdoc.at("row_counts")) v.row_counts.push_back(x.get<double>());
        for (const auto& x : mdoc.at("col_counts")) v.col_counts.push_back(x.get<double>());
        if (v.row_counts.size() != it->second.rows || v.col_counts.size() != it->second.cols)
            throw ShapeMismatch("mnc histogram dims for " + it->second.name);
        it->second.mnc = std::move(v);
    }
    return cat;
}

void register_view(Catalog& catalog, const std::string& name, const std::string& text,
                   ExprArena& arena) {
    if (catalog.views.count(name) || catalog.descriptors.count(name))
        throw Error("duplicate view name: " + name);
    ViewDef vd;
    vd.name = name;
    vd.text = text;
    vd.root = parse_expression(text, arena, catalog);
    vd.shape = infer_shape(arena, vd.root, catalog);
    catalog.views.emplace(name, std::move(vd));
    catalog.view_order.push_back(name);
}

void load_views(Catalog& catalog, const std::string& path, ExprArena& arena) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open view file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto sep = line.find(":=");
        if (sep == std::string::npos)
            throw SyntaxError("view file " + path + " line " + std::to_string(lineno) +
                              ": expected `name := expression`");
        std::string name = line.substr(0, sep);
        std::string text = line.substr(sep + 2);
        auto trim = [](std::string& s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
        };
        trim(name);
        trim(text);
        if (name.empty() || text.empty())
            throw SyntaxError("view file " + path + " line " + std::to_string(lineno) +
                              ": empty name or body");
        register_view(catalog, name, text, arena);
    }
}

namespace {

std::string shape_str(const Shape& s) {
    return std::to_string(s.rows) + "x" + std::to_string(s.cols);
}

[[noreturn]] void mismatch(Op op, const std::vector<Shape>& kids) {
    std::string msg = op_name(op);
    for (const auto& k : kids) msg += " " + shape_str(k);
    throw ShapeMismatch(msg);
}

}

Shape op_shape(Op op, const std::vector<Shape>& kids) {
    auto arity = [&](std::size_t n) {
        if (kids.size() != n)
            throw ArityError(std::string(op_name(op)) + " expects " + std::to_string(n) +
                             " operands");
    };
    auto square = [&](const Shape& s) {
        if (s.rows != s.cols)
            throw NonSquare(std::string(op_name(op)) + " on " + shape_str(s));
    };
    switch (op) {
        case Op::Leaf:
        case Op::Const:
        case Op::ViewRef:
            throw Error("op_shape called on a leaf kind");
        case Op::Add:
        case Op::ElemMul:
        case Op::ElemDiv:
            arity(2);
            if (!(kids[0] == kids[1])) mismatch(op, kids);
            return kids[0];
        case Op::MatMul:
            arity(2);
            if (kids[0].cols != kids[1].rows) mismatch(op, kids);
            return {kids[0].rows, kids[1].cols};
        case Op::ScalarMul:
            arity(2);
            if (kids[0].is_scalar()) return kids[1];
            if (kids[1].is_scalar()) return kids[0];
            mismatch(op, kids);
        case Op::Transpose:
            arity(1);
            return {kids[0].cols, kids[0].rows};
        case Op::Inverse:
        case Op::Exp:
        case Op::Adj:
        case Op::Cho:
        case Op::Lu:
        case Op::Lup:
            arity(1);
            square(kids[0]);
            return kids[0];
        case Op::Det:
        case Op::Trace:
            arity(1);
            square(kids[0]);
            return {1, 1};
        case Op::Qr:
            arity(1);
            if (kids[0].rows < kids[0].cols) mismatch(op, kids);
            return kids[0];
        case Op::Diag:
            arity(1);
            if (kids[0].rows == 1 || kids[0].cols == 1) {
                std::size_t n = std::max(kids[0].rows, kids[0].cols);
                return {n, n};
            }
            return {std::min(kids[0].rows, kids[0].cols), 1};
        case Op::Sum:
        case Op::Min:
        case Op::Max:
        case Op::Mean:
        case Op::Var:
            arity(1);
            return {1, 1};
        case Op::RowSums:
        case Op::RowMeans:
        case Op::RowVars:
        case Op::RowMaxs:
        case Op::RowMins:
            arity(1);
            return {kids[0].rows, 1};
        case Op::ColSums:
        case Op::ColMeans:
        case Op::ColVars:
        case Op::ColMaxs:
        case Op::ColMins:
            arity(1);
            return {1, kids[0].cols};
        case Op::Rev:
            arity(1);
            return kids[0];
        case Op::DSum:
            arity(2);
            return {kids[0].rows + kids[1].rows, kids[0].cols + kids[1].cols};
        case Op::DProd:
            arity(2);
            return {kids[0].rows * kids[1].rows, kids[0].cols * kids[1].cols};
        case Op::Concat:
            arity(2);
            if (kids[0].rows != kids[1].rows) mismatch(op, kids);
            return {kids[0].rows, kids[0].cols + kids[1].cols};
        case Op::Pow:
            arity(2);
            if (!kids[0].is_scalar() || !kids[1].is_scalar()) mismatch(op, kids);
            return {1, 1};
    }
    throw Error("op_shape: unhandled operator");
}

std::unordered_map<NodeId, Shape> infer_shapes(const ExprArena& arena, NodeId root,
                                               const Catalog& catalog) {
    std::unordered_map<NodeId, Shape> shapes;
    for (NodeId id : arena.topo_order(root)) {
        const Node& n = arena.node(id);
        switch (n.op) {
            case Op::Leaf: {
                const MatrixDescriptor& d = catalog.need(n.name);
                shapes[id] = {d.rows, d.cols};
                break;
            }
            case Op::Const:
                shapes[id] = {1, 1};
                break;
            case Op::ViewRef: {
                auto it = catalog.views.find(n.name);
                if (it == catalog.views.end()) throw UnknownName(n.name);
                shapes[id] = it->second.shape;
                break;
            }
            default: {
                std::vector<Shape> kid_shapes;
                kid_shapes.reserve(n.kids.size());
                for (NodeId k : n.kids) kid_shapes.push_back(shapes.at(k));
                shapes[id] = op_shape(n.op, kid_shapes);
            }
        }
    }
    return shapes;
}

Shape infer_shape(const ExprArena& arena, NodeId root, const Catalog& catalog) {
    return infer_shapes(arena, root, catalog).at(root);
}

}
