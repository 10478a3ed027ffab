#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hadad/errors.hpp"
#include "hadad/eval.hpp"
#include "hadad/matrix.hpp"
#include "hadad/parser.hpp"

using namespace hadad;

namespace {

MatrixDescriptor desc(const std::string& name, std::size_t r, std::size_t c,
                      std::vector<std::string> tags = {}) {
    MatrixDescriptor d;
    d.name = name;
    d.file = name + ".csv";
    d.rows = r;
    d.cols = c;
    d.nnz = (double)r * (double)c;
    d.tags = std::move(tags);
    return d;
}

double rel_err(const Matrix& x, const Matrix& y) {
    double denom = std::max({x.max_abs(), y.max_abs(), 1.0});
    return max_abs_diff(x, y) / denom;
}

}

TEST_CASE("addition commutes under evaluation") {
    Catalog cat;
    cat.add(desc("A", 5, 4));
    cat.add(desc("B", 5, 4));
    ExprArena arena;
    NodeId l = parse_expression("A + B", arena, cat);
    NodeId r = parse_expression("B + A", arena, cat);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Env env = random_instance(cat, seed, 8);
        CHECK(rel_err(eval_numeric(arena, l, env), eval_numeric(arena, r, env)) == 0.0);
    }
}

TEST_CASE("inverse times input is the identity on well conditioned matrices") {
    Catalog cat;
    cat.add(desc("D", 8, 8));
    ExprArena arena;
    NodeId e = parse_expression("solve(D) %*% D", arena, cat);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Env env = random_instance(cat, seed, 8);
        Matrix r = eval_numeric(arena, e, env);
        CHECK(max_abs_diff(r, Matrix::identity(8)) <= 1e-9);
    }
}

TEST_CASE("sum of a product equals the factored aggregate form") {
    Catalog cat;
    cat.add(desc("M", 5, 4));
    cat.add(desc("N", 4, 6));
    ExprArena arena;
    NodeId l = parse_expression("sum(M %*% N)", arena, cat);
    NodeId r = parse_expression("sum(t(colSums(M)) * rowSums(N))", arena, cat);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Env env = random_instance(cat, seed, 8);
        CHECK(rel_err(eval_numeric(arena, l, env), eval_numeric(arena, r, env)) <= 1e-12);
    }
}

TEST_CASE("random instances are deterministic per seed") {
    Catalog cat;
    cat.add(desc("M", 50000, 100));
    ExprArena arena;
    Env a = random_instance(cat, 7, 8);
    Env b = random_instance(cat, 7, 8);
    CHECK(a.at("M").rows == 8);
    CHECK(a.at("M").cols == 1);
    CHECK(max_abs_diff(a.at("M"), b.at("M")) == 0.0);
    Env c = random_instance(cat, 8, 8);
    CHECK(max_abs_diff(a.at("M"), c.at("M")) > 0.0);
}

TEST_CASE("dimension scaling preserves shared dims and never grows") {
    Catalog cat;
    cat.add(desc("M", 50000, 100));
    cat.add(desc("N", 100, 50000));
    Env env = random_instance(cat, 1, 16);
    CHECK(env.at("M").rows == 16);
    CHECK(env.at("M").cols == env.at("N").rows);
    Catalog small;
    small.add(desc("A", 6, 4));
    Env se = random_instance(small, 1, 16);
    CHECK(se.at("A").rows == 6);
    CHECK(se.at("A").cols == 4);
}

TEST_CASE("structural tags are honored") {
    Catalog cat;
    cat.add(desc("S", 12, 12, {"S"}));
    cat.add(desc("Z0", 6, 3, {"Z"}));
    cat.add(desc("I0", 5, 5, {"I"}));
    cat.add(desc("P0", 7, 7, {"P"}));
    cat.add(desc("O0", 9, 9, {"O"}));
    cat.add(desc("L0", 6, 6, {"L"}));
    cat.add(desc("U0", 6, 6, {"U"}));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Env env = random_instance(cat, seed, 12);
        const Matrix& s = env.at("S");
        Matrix l = cholesky(s);
        CHECK(max_abs_diff(matmul(l, transpose(l)), s) <= 1e-9 * std::max(1.0, s.max_abs()));
        CHECK(max_abs_diff(s, transpose(s)) == 0.0);

        CHECK(env.at("Z0").nnz() == 0);

        CHECK(max_abs_diff(env.at("I0"), Matrix::identity(5)) == 0.0);

        const Matrix& p = env.at("P0");
        CHECK(p.nnz() == 7);
        Matrix prod = matmul(p, transpose(p));
        CHECK(max_abs_diff(prod, Matrix::identity(7)) == 0.0);

        const Matrix& o = env.at("O0");
        CHECK(max_abs_diff(matmul(transpose(o), o), Matrix::identity(9)) <= 1e-9);

        const Matrix& lo = env.at("L0");
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = i + 1; j < 6; ++j) CHECK(lo.at(i, j) == 0.0);
        const Matrix& up = env.at("U0");
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < i; ++j) CHECK(up.at(i, j) == 0.0);
    }
}

TEST_CASE("sparsity is matched by bernoulli masking") {
    Catalog cat;
    MatrixDescriptor d = desc("A", 40, 50);
    d.nnz = 0.25 * 40 * 50;
    cat.add(d);
    Env env = random_instance(cat, 3, 50);
    double frac = (double)env.at("A").nnz() / (40.0 * 50.0);
    CHECK(frac > 0.15);
    CHECK(frac < 0.35);
}

TEST_CASE("derived matrices assemble from their join sources") {
    Catalog cat;
    cat.add(desc("S", 12, 5));
    cat.add(desc("R", 4, 6));
    cat.add(desc("K", 12, 4));
    MatrixDescriptor m = desc("M", 12, 11);
    m.derive = DerivedSource{"S", "R", "K"};
    cat.add(m);
    Env env = random_instance(cat, 5, 12);
    Matrix expect = hconcat(env.at("S"), matmul(env.at("K"), env.at("R")));
    CHECK(max_abs_diff(env.at("M"), expect) == 0.0);
}

TEST_CASE("views evaluate against their defining expressions") {
    Catalog cat;
    cat.add(desc("D", 8, 8));
    ExprArena arena;
    register_view(cat, "V1", "solve(D)", arena);
    Env env = random_instance(cat, 2, 8, &arena);
    CHECK(env.count("V1") == 1);
    CHECK(max_abs_diff(env.at("V1"), inverse(env.at("D"))) == 0.0);
}

TEST_CASE("evaluation failures raise typed errors") {
    Catalog cat;
    cat.add(desc("Z0", 4, 4, {"Z"}));
    cat.add(desc("A", 4, 4));
    ExprArena arena;
    NodeId inv = parse_expression("solve(Z0)", arena, cat);
    Env env = random_instance(cat, 0, 8);
    CHECK_THROWS_AS(eval_numeric(arena, inv, env), SingularMatrix);

    NodeId big = parse_expression("A * A", arena, cat);
    Env huge;
    Matrix h(4, 4);
    for (double& v : h.a) v = 1e200;
    huge.emplace("A", h);
    CHECK_THROWS_AS(eval_numeric(arena, big, huge), NumericOverflow);

    NodeId leaf = parse_expression("A", arena, cat);
    Env empty;
    CHECK_THROWS_AS(eval_numeric(arena, leaf, empty), UnknownName);
}

TEST_CASE("identity rewriting evaluates bit identically") {
    Catalog cat;
    cat.add(desc("M", 6, 4));
    ExprArena arena;
    NodeId e = parse_expression("rowSums(M) + rowSums(M)", arena, cat);
    Env env = random_instance(cat, 9, 8);
    Matrix a = eval_numeric(arena, e, env);
    Matrix b = eval_numeric(arena, e, env);
    CHECK(max_abs_diff(a, b) == 0.0);
}
