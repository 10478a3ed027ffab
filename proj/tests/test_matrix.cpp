#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hadad/errors.hpp"
#include "hadad/matrix.hpp"

using namespace hadad;

namespace {

Matrix from_rows(std::size_t r, std::size_t c, std::initializer_list<double> vals) {
    Matrix m(r, c);
    std::size_t i = 0;
    for (double v : vals) m.a[i++] = v;
    REQUIRE(i == r * c);
    return m;
}

Matrix random_mat(std::size_t r, std::size_t c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Matrix m(r, c);
    for (double& v : m.a) v = uni(rng);
    return m;
}

Matrix random_invertible(std::size_t n, std::uint64_t seed) {
    Matrix m = random_mat(n, n, seed);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) += (double)n;
    return m;
}

bool near(const Matrix& x, const Matrix& y, double tol = 1e-9) {
    return x.rows == y.rows && x.cols == y.cols && max_abs_diff(x, y) <= tol;
}

}

TEST_CASE("matmul computes known product") {
    Matrix x = from_rows(2, 3, {1, 2, 3, 4, 5, 6});
    Matrix y = from_rows(3, 2, {7, 8, 9, 10, 11, 12});
    Matrix p = matmul(x, y);
    CHECK(p.rows == 2);
    CHECK(p.cols == 2);
    CHECK(p.at(0, 0) == doctest::Approx(58));
    CHECK(p.at(0, 1) == doctest::Approx(64));
    CHECK(p.at(1, 0) == doctest::Approx(139));
    CHECK(p.at(1, 1) == doctest::Approx(154));
    CHECK_THROWS_AS(matmul(x, x), ShapeMismatch);
}

TEST_CASE("inverse and determinant on a 2x2") {
    Matrix m = from_rows(2, 2, {4, 7, 2, 6});
    CHECK(determinant(m) == doctest::Approx(10.0));
    Matrix inv = inverse(m);
    CHECK(inv.at(0, 0) == doctest::Approx(0.6));
    CHECK(inv.at(0, 1) == doctest::Approx(-0.7));
    CHECK(inv.at(1, 0) == doctest::Approx(-0.2));
    CHECK(inv.at(1, 1) == doctest::Approx(0.4));
    CHECK(near(matmul(m, inv), Matrix::identity(2)));
}

TEST_CASE("determinant of known 3x3 and singular cases") {
    Matrix m = from_rows(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 10});
    CHECK(determinant(m) == doctest::Approx(-3.0));
    Matrix sing = from_rows(2, 2, {1, 2, 2, 4});
    CHECK(determinant(sing) == doctest::Approx(0.0));
    CHECK_THROWS_AS(inverse(sing), SingularMatrix);
    CHECK_THROWS_AS(determinant(from_rows(1, 2, {1, 2})), NonSquare);
}

TEST_CASE("inverse round trip on random well-conditioned matrices") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Matrix m = random_invertible(8, seed);
        CHECK(near(matmul(inverse(m), m), Matrix::identity(8)));
    }
}

TEST_CASE("trace and transpose") {
    Matrix m = from_rows(2, 2, {1, 2, 3, 4});
    CHECK(trace_of(m) == doctest::Approx(5.0));
    Matrix t = transpose(from_rows(2, 3, {1, 2, 3, 4, 5, 6}));
    CHECK(t.rows == 3);
    CHECK(t.cols == 2);
    CHECK(t.at(2, 1) == doctest::Approx(6));
    CHECK_THROWS_AS(trace_of(t), NonSquare);
}

TEST_CASE("cholesky factors and rejects") {
    Matrix m = from_rows(2, 2, {4, 2, 2, 3});
    Matrix l = cholesky(m);
    CHECK(l.at(0, 0) == doctest::Approx(2.0));
    CHECK(l.at(0, 1) == doctest::Approx(0.0));
    CHECK(l.at(1, 0) == doctest::Approx(1.0));
    CHECK(l.at(1, 1) == doctest::Approx(std::sqrt(2.0)));
    CHECK(near(matmul(l, transpose(l)), m));
    CHECK_THROWS_AS(cholesky(from_rows(2, 2, {1, 2, 2, 1})), NotPositiveDefinite);
}

TEST_CASE("doolittle lu reconstructs with unit lower diagonal") {
    Matrix m = from_rows(2, 2, {2, 3, 4, 7});
    LuFactors f = lu_doolittle(m);
    CHECK(f.l.at(0, 0) == doctest::Approx(1.0));
    CHECK(f.l.at(1, 0) == doctest::Approx(2.0));
    CHECK(f.u.at(0, 0) == doctest::Approx(2.0));
    CHECK(f.u.at(1, 1) == doctest::Approx(1.0));
    CHECK(near(matmul(f.l, f.u), m));
    for (std::uint64_t seed = 2; seed <= 6; ++seed) {
        Matrix r = random_invertible(6, seed);
        LuFactors g = lu_doolittle(r);
        CHECK(near(matmul(g.l, g.u), r, 1e-8));
    }
}

TEST_CASE("partial pivot lu satisfies l u == p m") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Matrix m = random_mat(5, 5, seed);
        m.at(0, 0) += 3;
        m.at(4, 4) += 3;
        LupFactors f = lu_partial_pivot(m);
        CHECK(near(matmul(f.l, f.u), matmul(f.p, m), 1e-8));
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(f.l.at(i, i) == doctest::Approx(1.0));
            for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(f.l.at(i, j)) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("householder qr is canonical") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Matrix m = random_mat(6, 4, seed);
        QrFactors f = qr_householder(m);
        CHECK(near(matmul(f.q, f.r), m, 1e-8));
        CHECK(near(matmul(transpose(f.q), f.q), Matrix::identity(4), 1e-8));
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(f.r.at(i, i) > 0.0);
            for (std::size_t j = 0; j < i; ++j) CHECK(f.r.at(i, j) == 0.0);
        }
    }
    CHECK_THROWS_AS(qr_householder(random_mat(3, 5, 1)), ShapeMismatch);
}

TEST_CASE("matrix exponential on known inputs") {
    Matrix z(3, 3);
    CHECK(near(matrix_exp(z), Matrix::identity(3)));
    Matrix d = from_rows(2, 2, {1, 0, 0, 2});
    Matrix e = matrix_exp(d);
    CHECK(e.at(0, 0) == doctest::Approx(std::exp(1.0)));
    CHECK(e.at(1, 1) == doctest::Approx(std::exp(2.0)));
    CHECK(e.at(0, 1) == doctest::Approx(0.0));
    Matrix nil = from_rows(2, 2, {0, 1, 0, 0});
    Matrix en = matrix_exp(nil);
    CHECK(en.at(0, 0) == doctest::Approx(1.0));
    CHECK(en.at(0, 1) == doctest::Approx(1.0));
    CHECK(en.at(1, 0) == doctest::Approx(0.0));
    CHECK(en.at(1, 1) == doctest::Approx(1.0));
    // exp(A)exp(-A) = I
    Matrix a = random_mat(4, 4, 9);
    CHECK(near(matmul(matrix_exp(a), matrix_exp(scalar_mul(-1.0, a))), Matrix::identity(4), 1e-8));
}

TEST_CASE("adjugate matches det times inverse and handles singular input") {
    Matrix m = from_rows(2, 2, {1, 2, 3, 4});
    Matrix adj = adjugate(m);
    CHECK(adj.at(0, 0) == doctest::Approx(4));
    CHECK(adj.at(0, 1) == doctest::Approx(-2));
    CHECK(adj.at(1, 0) == doctest::Approx(-3));
    CHECK(adj.at(1, 1) == doctest::Approx(1));
    Matrix sing = from_rows(2, 2, {1, 2, 2, 4});
    Matrix sadj = adjugate(sing);
    CHECK(sadj.at(0, 0) == doctest::Approx(4));
    CHECK(sadj.at(0, 1) == doctest::Approx(-2));
    CHECK(sadj.at(1, 0) == doctest::Approx(-2));
    CHECK(sadj.at(1, 1) == doctest::Approx(1));
    // adj(M) M = det(M) I
    Matrix r = random_invertible(5, 3);
    CHECK(near(matmul(adjugate(r), r), scalar_mul(determinant(r), Matrix::identity(5)), 1e-6));
}

TEST_CASE("aggregations on a known matrix") {
    Matrix m = from_rows(2, 3, {1, 2, 3, 4, 5, 6});
    Matrix rs = row_sums(m);
    CHECK(rs.rows == 2);
    CHECK(rs.cols == 1);
    CHECK(rs.a[0] == doctest::Approx(6));
    CHECK(rs.a[1] == doctest::Approx(15));
    Matrix cs = col_sums(m);
    CHECK(cs.rows == 1);
    CHECK(cs.cols == 3);
    CHECK(cs.a[0] == doctest::Approx(5));
    CHECK(cs.a[2] == doctest::Approx(9));
    CHECK(sum_all(m) == doctest::Approx(21));
    CHECK(min_all(m) == doctest::Approx(1));
    CHECK(max_all(m) == doctest::Approx(6));
    CHECK(mean_all(m) == doctest::Approx(3.5));
    CHECK(var_all(m) == doctest::Approx(3.5));
    CHECK(row_means(m).a[0] == doctest::Approx(2));
    CHECK(col_means(m).a[1] == doctest::Approx(3.5));
    CHECK(row_vars(m).a[0] == doctest::Approx(1.0));
    CHECK(col_vars(m).a[0] == doctest::Approx(4.5));
    CHECK(row_maxs(m).a[1] == doctest::Approx(6));
    CHECK(col_mins(m).a[2] == doctest::Approx(3));
}

TEST_CASE("reverse rows") {
    Matrix m = from_rows(3, 2, {1, 2, 3, 4, 5, 6});
    Matrix r = reverse_rows(m);
    CHECK(r.at(0, 0) == doctest::Approx(5));
    CHECK(r.at(2, 1) == doctest::Approx(2));
    CHECK(sum_all(r) == doctest::Approx(sum_all(m)));
}

TEST_CASE("diag extracts and builds") {
    Matrix m = from_rows(2, 2, {1, 2, 3, 4});
    Matrix d = diag_of(m);
    CHECK(d.rows == 2);
    CHECK(d.cols == 1);
    CHECK(d.a[0] == doctest::Approx(1));
    CHECK(d.a[1] == doctest::Approx(4));
    Matrix v = from_rows(3, 1, {7, 8, 9});
    Matrix dm = diag_of(v);
    CHECK(dm.rows == 3);
    CHECK(dm.cols == 3);
    CHECK(dm.at(1, 1) == doctest::Approx(8));
    CHECK(dm.at(0, 1) == doctest::Approx(0));
}

TEST_CASE("block and kronecker composition") {
    Matrix x = from_rows(1, 2, {1, 2});
    Matrix y = from_rows(2, 1, {3, 4});
    Matrix ds = direct_sum(x, y);
    CHECK(ds.rows == 3);
    CHECK(ds.cols == 3);
    CHECK(ds.at(0, 1) == doctest::Approx(2));
    CHECK(ds.at(1, 2) == doctest::Approx(3));
    CHECK(ds.at(1, 0) == doctest::Approx(0));

    Matrix a = from_rows(2, 2, {1, 2, 3, 4});
    Matrix b = from_rows(2, 2, {0, 5, 6, 7});
    Matrix k = kronecker(a, b);
    CHECK(k.rows == 4);
    CHECK(k.cols == 4);
    CHECK(k.at(0, 1) == doctest::Approx(5));
    CHECK(k.at(0, 3) == doctest::Approx(10));
    CHECK(k.at(3, 0) == doctest::Approx(18));
    CHECK(k.at(1, 1) == doctest::Approx(7));

    Matrix h = hconcat(a, b);
    CHECK(h.rows == 2);
    CHECK(h.cols == 4);
    CHECK(h.at(0, 2) == doctest::Approx(0));
    CHECK(h.at(1, 3) == doctest::Approx(7));
    CHECK_THROWS_AS(hconcat(a, x), ShapeMismatch);
}

TEST_CASE("direct sum and kronecker satisfy their determinant laws") {
    Matrix c = random_invertible(3, 11);
    Matrix d = random_invertible(2, 12);
    CHECK(determinant(direct_sum(c, d)) ==
          doctest::Approx(determinant(c) * determinant(d)).epsilon(1e-9));
    double dk = determinant(kronecker(c, d));
    double expect = std::pow(determinant(c), 2) * std::pow(determinant(d), 3);
    CHECK(dk == doctest::Approx(expect).epsilon(1e-7));
    CHECK(trace_of(kronecker(c, d)) == doctest::Approx(trace_of(c) * trace_of(d)));
}

TEST_CASE("solve_linear agrees with inverse") {
    Matrix m = random_invertible(6, 21);
    Matrix b = random_mat(6, 2, 22);
    CHECK(near(solve_linear(m, b), matmul(inverse(m), b), 1e-8));
}
