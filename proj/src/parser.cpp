#include "hadad/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "hadad/errors.hpp"

namespace hadad {

namespace {

enum class Tok { Name, Number, Plus, Minus, Star, Slash, MatMul, LParen, RParen, Comma,
                 PostInv, PostT, End };

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    std::size_t pos = 0;
};

struct Lexer {
    const std::string& src;
    std::size_t i = 0;

    [[noreturn]] void fail(std::size_t pos, const std::string& msg) const {
        throw SyntaxError("at position " + std::to_string(pos) + ": " + msg);
    }

    Token next() {
        while (i < src.size() && std::isspace((unsigned char)src[i])) ++i;
        std::size_t pos = i;
        if (i >= src.size()) return {Tok::End, "", 0.0, pos};
        char c = src[i];
        if (std::isalpha((unsigned char)c) || c == '_') {
            std::size_t b = i;
            while (i < src.size() &&
                   (std::isalnum((unsigned char)src[i]) || src[i] == '_'))
                ++i;
            return {Tok::Name, src.substr(b, i - b), 0.0, pos};
        }
        if (std::isdigit((unsigned char)c)) {
            std::size_t b = i;
            while (i < src.size() && std::isdigit((unsigned char)src[i])) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                while (i < src.size() && std::isdigit((unsigned char)src[i])) ++i;
            }
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t save = i++;
                if (i < src.size() && (src[i] == '+' || src[i] == '-')) ++i;
                if (i < src.size() && std::isdigit((unsigned char)src[i])) {
                    while (i < src.size() && std::isdigit((unsigned char)src[i])) ++i;
                } else {
                    i = save;
                }
            }
            std::string t = src.substr(b, i - b);
            return {Tok::Number, t, std::strtod(t.c_str(), nullptr), pos};
        }
        switch (c) {
            case '+': ++i; return {Tok::Plus, "+", 0.0, pos};
            case '-': ++i; return {Tok::Minus, "-", 0.0, pos};
            case '*': ++i; return {Tok::Star, "*", 0.0, pos};
            case '/': ++i; return {Tok::Slash, "/", 0.0, pos};
            case '(': ++i; return {Tok::LParen, "(", 0.0, pos};
            case ')': ++i; return {Tok::RParen, ")", 0.0, pos};
            case ',': ++i; return {Tok::Comma, ",", 0.0, pos};
            case '%':
                if (src.compare(i, 3, "%*%") == 0) {
                    i += 3;
                    return {Tok::MatMul, "%*%", 0.0, pos};
                }
                fail(pos, "expected %*%");
            case '^':
                if (src.compare(i, 3, "^-1") == 0) {
                    i += 3;
                    return {Tok::PostInv, "^-1", 0.0, pos};
                }
                if (src.compare(i, 2, "^T") == 0) {
                    i += 2;
                    return {Tok::PostT, "^T", 0.0, pos};
                }
                fail(pos, "expected ^-1 or ^T");
            default:
                fail(pos, std::string("unexpected character '") + c + "'");
        }
    }
};

const std::map<std::string, std::pair<Op, int>>& func_table() {
    static const std::map<std::string, std::pair<Op, int>> table = {
        {"t", {Op::Transpose, 1}},   {"solve", {Op::Inverse, 1}},
        {"det", {Op::Det, 1}},       {"trace", {Op::Trace, 1}},
        {"diag", {Op::Diag, 1}},     {"exp", {Op::Exp, 1}},
        {"adj", {Op::Adj, 1}},       {"sum", {Op::Sum, 1}},
        {"rowSums", {Op::RowSums, 1}},   {"colSums", {Op::ColSums, 1}},
        {"rowMeans", {Op::RowMeans, 1}}, {"colMeans", {Op::ColMeans, 1}},
        {"rowVars", {Op::RowVars, 1}},   {"colVars", {Op::ColVars, 1}},
        {"rowMaxs", {Op::RowMaxs, 1}},   {"rowMins", {Op::RowMins, 1}},
        {"colMaxs", {Op::ColMaxs, 1}},   {"colMins", {Op::ColMins, 1}},
        {"min", {Op::Min, 1}},       {"max", {Op::Max, 1}},
        {"mean", {Op::Mean, 1}},     {"var", {Op::Var, 1}},
        {"rev", {Op::Rev, 1}},       {"cho", {Op::Cho, 1}},
        {"qr", {Op::Qr, 1}},         {"lu", {Op::Lu, 1}},
        {"lup", {Op::Lup, 1}},       {"dsum", {Op::DSum, 2}},
        {"dprod", {Op::DProd, 2}},   {"concat", {Op::Concat, 2}},
        {"cbind", {Op::Concat, 2}},  {"pow", {Op::Pow, 2}},
    };
    return table;
}

struct Parser {
    ExprArena& arena;
    const Catalog& catalog;
    Lexer lex;
    Token cur;

    Parser(const std::string& text, ExprArena& a, const Catalog& c)
        : arena(a), catalog(c), lex{text} {
        cur = lex.next();
    }

    [[noreturn]] void fail(const std::string& expected) {
        throw SyntaxError("at position " + std::to_string(cur.pos) + ": expected " + expected +
                          ", got '" + (cur.kind == Tok::End ? "<end>" : cur.text) + "'");
    }

    void advance() { cur = lex.next(); }

    void expect(Tok k, const char* what) {
        if (cur.kind != k) fail(what);
        advance();
    }

    struct Typed {
        NodeId id;
        Shape shape;
    };

    Typed mk(Op op, std::vector<Typed> kids) {
        std::vector<Shape> shapes;
        std::vector<NodeId> ids;
        shapes.reserve(kids.size());
        ids.reserve(kids.size());
        for (auto& k : kids) {
            shapes.push_back(k.shape);
            ids.push_back(k.id);
        }
        Shape s = op_shape(op, shapes);
        return {arena.mk(op, std::move(ids)), s};
    }

    Typed parse_expr() {
        Typed lhs = parse_term();
        while (cur.kind == Tok::Plus || cur.kind == Tok::Minus) {
            bool minus = cur.kind == Tok::Minus;
            advance();
            Typed rhs = parse_term();
            if (minus) {
                Typed neg1{arena.constant(-1.0), Shape{1, 1}};
                rhs = mk(Op::ScalarMul, {neg1, rhs});
            }
            lhs = mk(Op::Add, {lhs, rhs});
        }
        return lhs;
    }

    Typed parse_term() {
        Typed lhs = parse_factor();
        for (;;) {
            if (cur.kind == Tok::MatMul) {
                advance();
                lhs = mk(Op::MatMul, {lhs, parse_factor()});
            } else if (cur.kind == Tok::Star) {
                advance();
                Typed rhs = parse_factor();
                Op op = (lhs.shape.is_scalar() || rhs.shape.is_scalar()) ? Op::ScalarMul
                                                                         : Op::ElemMul;
                lhs = mk(op, {lhs, rhs});
            } else if (cur.kind == Tok::Slash) {
                advance();
                lhs = mk(Op::ElemDiv, {lhs, parse_factor()});
            } else {
                return lhs;
            }
        }
    }

    Typed parse_factor() {
        Typed out;
        switch (cur.kind) {
            case Tok::Number: {
                out = {arena.constant(cur.number), Shape{1, 1}};
                advance();
                break;
            }
            case Tok::LParen: {
                advance();
                out = parse_expr();
                expect(Tok::RParen, "')'");
                break;
            }
            case Tok::Name: {
                std::string name = cur.text;
                advance();
                auto fit = func_table().find(name);
                if (fit != func_table().end()) {
                    expect(Tok::LParen, "'(' after function name");
                    std::vector<Typed> args;
                    args.push_back(parse_expr());
                    while (cur.kind == Tok::Comma) {
                        advance();
                        args.push_back(parse_expr());
                    }
                    expect(Tok::RParen, "')'");
                    if ((int)args.size() != fit->second.second)
                        throw SyntaxError(name + " takes " +
                                          std::to_string(fit->second.second) + " argument(s)");
                    out = mk(fit->second.first, std::move(args));
                } else if (catalog.has_view(name)) {
                    out = {arena.view_ref(name), catalog.views.at(name).shape};
                } else {
                    const MatrixDescriptor& d = catalog.need(name);
                    out = {arena.leaf(name), Shape{d.rows, d.cols}};
                }
                break;
            }
            default:
                fail("a name, number, or '('");
        }
        for (;;) {
            if (cur.kind == Tok::PostInv) {
                advance();
                out = mk(Op::Inverse, {out});
            } else if (cur.kind == Tok::PostT) {
                advance();
                out = mk(Op::Transpose, {out});
            } else {
                return out;
            }
        }
    }
};

}

NodeId parse_expression(const std::string& text, ExprArena& arena, const Catalog& catalog) {
    Parser p(text, arena, catalog);
    Parser::Typed root = p.parse_expr();
    if (p.cur.kind != Tok::End) p.fail("end of input");
    return root.id;
}

NodeId parse_expression_file(const std::string& path, ExprArena& arena, const Catalog& catalog) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open expression file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_expression(ss.str(), arena, catalog);
}

}
