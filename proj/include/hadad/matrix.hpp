#pragma once

#include <cstddef>
#include <vector>

namespace hadad {

// Dense row-major matrix of doubles. Scalars are 1x1.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    bool is_scalar() const { return rows == 1 && cols == 1; }
    double scalar() const { return a[0]; }

    static Matrix zeros(std::size_t r, std::size_t c) { return Matrix(r, c); }
    static Matrix identity(std::size_t n);
    static Matrix scalar_of(double v);

    std::size_t nnz(double tol = 0.0) const;
    double max_abs() const;
};

struct LuFactors {
    Matrix l, u;
};

struct LupFactors {
    Matrix l, u, p;
};

struct QrFactors {
    Matrix q, r;
};

Matrix add(const Matrix& x, const Matrix& y);
Matrix sub(const Matrix& x, const Matrix& y);
Matrix matmul(const Matrix& x, const Matrix& y);
Matrix elem_mul(const Matrix& x, const Matrix& y);
Matrix elem_div(const Matrix& x, const Matrix& y);
Matrix scalar_mul(double c, const Matrix& x);
Matrix transpose(const Matrix& x);
Matrix inverse(const Matrix& x);
double determinant(const Matrix& x);
double trace_of(const Matrix& x);
Matrix diag_of(const Matrix& x);
Matrix matrix_exp(const Matrix& x);
Matrix adjugate(const Matrix& x);

Matrix row_sums(const Matrix& x);
Matrix col_sums(const Matrix& x);
Matrix row_means(const Matrix& x);
Matrix col_means(const Matrix& x);
Matrix row_vars(const Matrix& x);
Matrix col_vars(const Matrix& x);
Matrix row_maxs(const Matrix& x);
Matrix row_mins(const Matrix& x);
Matrix col_maxs(const Matrix& x);
Matrix col_mins(const Matrix& x);
double sum_all(const Matrix& x);
double min_all(const Matrix& x);
double max_all(const Matrix& x);
double mean_all(const Matrix& x);
double var_all(const Matrix& x);
Matrix reverse_rows(const Matrix& x);

Matrix direct_sum(const Matrix& x, const Matrix& y);
Matrix kronecker(const Matrix& x, const Matrix& y);
Matrix hconcat(const Matrix& x, const Matrix& y);

Matrix cholesky(const Matrix& x);
LuFactors lu_doolittle(const Matrix& x);
LupFactors lu_partial_pivot(const Matrix& x);
QrFactors qr_householder(const Matrix& x);

// Solves x * sol = b via partial-pivot elimination.
Matrix solve_linear(const Matrix& x, const Matrix& b);

bool all_finite(const Matrix& x);
double max_abs_diff(const Matrix& x, const Matrix& y);

}
