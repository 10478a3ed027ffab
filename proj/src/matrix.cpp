#include "hadad/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hadad/errors.hpp"

namespace hadad {

namespace {

std::string shape_str(const Matrix& x) {
    return std::to_string(x.rows) + "x" + std::to_string(x.cols);
}

void require_same_shape(const Matrix& x, const Matrix& y, const char* op) {
    if (x.rows != y.rows || x.cols != y.cols)
        throw ShapeMismatch(std::string(op) + " on " + shape_str(x) + " and " + shape_str(y));
}

void require_square(const Matrix& x, const char* op) {
    if (x.rows != x.cols)
        throw NonSquare(std::string(op) + " on " + shape_str(x));
}

}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix Matrix::scalar_of(double v) {
    Matrix m(1, 1);
    m.a[0] = v;
    return m;
}

std::size_t Matrix::nnz(double tol) const {
    std::size_t n = 0;
    for (double v : a)
        if (std::abs(v) > tol) ++n;
    return n;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

Matrix add(const Matrix& x, const Matrix& y) {
    require_same_shape(x, y, "add");
    Matrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

Matrix sub(const Matrix& x, const Matrix& y) {
    require_same_shape(x, y, "sub");
    Matrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

Matrix matmul(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows)
        throw ShapeMismatch("matmul on " + shape_str(x) + " and " + shape_str(y));
    Matrix r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t k = 0; k < x.cols; ++k) {
            double v = x.at(i, k);
            if (v == 0.0) continue;
            const double* yrow = &y.a[k * y.cols];
            double* rrow = &r.a[i * r.cols];
            for (std::size_t j = 0; j < y.cols; ++j) rrow[j] += v * yrow[j];
        }
    }
    return r;
}

Matrix elem_mul(const Matrix& x, const Matrix& y) {
    require_same_shape(x, y, "elementwise multiply");
    Matrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] * y.a[i];
    return r;
}

Matrix elem_div(const Matrix& x, const Matrix& y) {
    require_same_shape(x, y, "elementwise divide");
    Matrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] / y.a[i];
    return r;
}

Matrix scalar_mul(double c, const Matrix& x) {
    Matrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = c * x.a[i];
    return r;
}

Matrix transpose(const Matrix& x) {
    Matrix r(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
    return r;
}

Matrix inverse(const Matrix& x) {
    require_square(x, "inverse");
    std::size_t n = x.rows;
    Matrix w = x;
    Matrix inv = Matrix::identity(n);
    double scale = std::max(w.max_abs(), 1.0);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (std::abs(w.at(i, c)) > std::abs(w.at(piv, c))) piv = i;
        if (std::abs(w.at(piv, c)) < 1e-12 * scale)
            throw SingularMatrix("pivot vanished at column " + std::to_string(c));
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w.at(piv, j), w.at(c, j));
                std::swap(inv.at(piv, j), inv.at(c, j));
            }
        }
        double d = w.at(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            w.at(c, j) /= d;
            inv.at(c, j) /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c) continue;
            double f = w.at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                w.at(i, j) -= f * w.at(c, j);
                inv.at(i, j) -= f * inv.at(c, j);
            }
        }
    }
    return inv;
}

double determinant(const Matrix& x) {
    require_square(x, "determinant");
    std::size_t n = x.rows;
    Matrix w = x;
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (std::abs(w.at(i, c)) > std::abs(w.at(piv, c))) piv = i;
        if (w.at(piv, c) == 0.0) return 0.0;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(w.at(piv, j), w.at(c, j));
            det = -det;
        }
        det *= w.at(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            double f = w.at(i, c) / w.at(c, c);
            if (f == 0.0) continue;
            for (std::size_t j = c; j < n; ++j) w.at(i, j) -= f * w.at(c, j);
        }
    }
    return det;
}

double trace_of(const Matrix& x) {
    require_square(x, "trace");
    double t = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) t += x.at(i, i);
    return t;
}

Matrix diag_of(const Matrix& x) {
    if (x.rows == 1 || x.cols == 1) {
        std::size_t n = std::max(x.rows, x.cols);
        Matrix r(n, n);
        for (std::size_t i = 0; i < n; ++i) r.at(i, i) = x.a[i];
        return r;
    }
    std::size_t n = std::min(x.rows, x.cols);
    Matrix r(n, 1);
    for (std::size_t i = 0; i < n; ++i) r.a[i] = x.at(i, i);
    return r;
}

Matrix solve_linear(const Matrix& x, const Matrix& b) {
    require_square(x, "solve");
    if (x.rows != b.rows)
        throw ShapeMismatch("solve on " + shape_str(x) + " and " + shape_str(b));
    std::size_t n = x.rows;
    Matrix w = x;
    Matrix r = b;
    double scale = std::max(w.max_abs(), 1.0);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (std::abs(w.at(i, c)) > std::abs(w.at(piv, c))) piv = i;
        if (std::abs(w.at(piv, c)) < 1e-12 * scale)
            throw SingularMatrix("pivot vanished at column " + std::to_string(c));
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(w.at(piv, j), w.at(c, j));
            for (std::size_t j = 0; j < r.cols; ++j) std::swap(r.at(piv, j), r.at(c, j));
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            double f = w.at(i, c) / w.at(c, c);
            if (f == 0.0) continue;
            for (std::size_t j = c; j < n; ++j) w.at(i, j) -= f * w.at(c, j);
            for (std::size_t j = 0; j < r.cols; ++j) r.at(i, j) -= f * r.at(c, j);
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = 0; j < r.cols; ++j) {
            double v = r.at(ii, j);
            for (std::size_t k = ii + 1; k < n; ++k) v -= w.at(ii, k) * r.at(k, j);
            r.at(ii, j) = v / w.at(ii, ii);
        }
    }
    return r;
}

Matrix matrix_exp(const Matrix& x) {
    require_square(x, "matrix exponential");
    std::size_t n = x.rows;
    // scaling and squaring with the degree-13 Pade approximant
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += std::abs(x.at(i, j));
        norm = std::max(norm, s);
    }
    int squarings = 0;
    Matrix a = x;
    if (norm > 5.4) {
        squarings = std::max(0, (int)std::ceil(std::log2(norm / 5.4)));
        a = scalar_mul(std::ldexp(1.0, -squarings), x);
    }
    Matrix a2 = matmul(a, a);
    Matrix a4 = matmul(a2, a2);
    Matrix a6 = matmul(a2, a4);
    Matrix id = Matrix::identity(n);

    Matrix w = add(scalar_mul(b[13], a6), add(scalar_mul(b[11], a4), scalar_mul(b[9], a2)));
    w = matmul(a6, w);
    w = add(w, add(scalar_mul(b[7], a6), add(scalar_mul(b[5], a4),
            add(scalar_mul(b[3], a2), scalar_mul(b[1], id)))));
    Matrix u = matmul(a, w);

    Matrix v = add(scalar_mul(b[12], a6), add(scalar_mul(b[10], a4), scalar_mul(b[8], a2)));
    v = matmul(a6, v);
    v = add(v, add(scalar_mul(b[6], a6), add(scalar_mul(b[4], a4),
            add(scalar_mul(b[2], a2), scalar_mul(b[0], id)))));

    Matrix r = solve_linear(sub(v, u), add(v, u));
    for (int s = 0; s < squarings; ++s) r = matmul(r, r);
    return r;
}

Matrix adjugate(const Matrix& x) {
    require_square(x, "adjugate");
    std::size_t n = x.rows;
    if (n == 1) return Matrix::scalar_of(1.0);
    double d = determinant(x);
    if (std::abs(d) > 1e-9 * std::max(1.0, x.max_abs())) {
        return scalar_mul(d, inverse(x));
    }
    // singular fallback: cofactor expansion by minors
    Matrix r(n, n);
    Matrix minor(n - 1, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t mi = 0;
            for (std::size_t r2 = 0; r2 < n; ++r2) {
                if (r2 == i) continue;
                std::size_t mj = 0;
                for (std::size_t c2 = 0; c2 < n; ++c2) {
                    if (c2 == j) continue;
                    minor.at(mi, mj) = x.at(r2, c2);
                    ++mj;
                }
                ++mi;
            }
            double cof = determinant(minor);
            if ((i + j) % 2 == 1) cof = -cof;
            r.at(j, i) = cof;
        }
    }
    return r;
}

Matrix row_sums(const Matrix& x) {
    Matrix r(x.rows, 1);
    for (std::size_t i = 0; i < x.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < x.cols; ++j) s += x.at(i, j);
        r.a[i] = s;
    }
    return r;
}

Matrix col_sums(const Matrix& x) {
    Matrix r(1, x.cols);
    for (std::size_t j = 0; j < x.cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) s += x.at(i, j);
        r.a[j] = s;
    }
    return r;
}

Matrix row_means(const Matrix& x) {
    Matrix r = row_sums(x);
    for (double& v : r.a) v /= (double)x.cols;
    return r;
}

Matrix col_means(const Matrix& x) {
    Matrix r = col_sums(x);
    for (double& v : r.a) v /= (double)x.rows;
    return r;
}

Matrix row_vars(const Matrix& x) {
    Matrix r(x.rows, 1);
    if (x.cols < 2) return r;
    for (std::size_t i = 0; i < x.rows; ++i) {
        double m = 0.0;
        for (std::size_t j = 0; j < x.cols; ++j) m += x.at(i, j);
        m /= (double)x.cols;
        double s = 0.0;
        for (std::size_t j = 0; j < x.cols; ++j) {
            double d = x.at(i, j) - m;
            s += d * d;
        }
        r.a[i] = s / (double)(x.cols - 1);
    }
    return r;
}

Matrix col_vars(const Matrix& x) {
    Matrix r(1, x.cols);
    if (x.rows < 2) return r;
    for (std::size_t j = 0; j < x.cols; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) m += x.at(i, j);
        m /= (double)x.rows;
        double s = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) {
            double d = x.at(i, j) - m;
            s += d * d;
        }
        r.a[j] = s / (double)(x.rows - 1);
    }
    return r;
}

Matrix row_maxs(const Matrix& x) {
    Matrix r(x.rows, 1);
    for (std::size_t i = 0; i < x.rows; ++i) {
        double m = x.at(i, 0);
        for (std::size_t j = 1; j < x.cols; ++j) m = std::max(m, x.at(i, j));
        r.a[i] = m;
    }
    return r;
}

Matrix row_mins(const Matrix& x) {
    Matrix r(x.rows, 1);
    for (std::size_t i = 0; i < x.rows; ++i) {
        double m = x.at(i, 0);
        for (std::size_t j = 1; j < x.cols; ++j) m = std::min(m, x.at(i, j));
        r.a[i] = m;
    }
    return r;
}

Matrix col_maxs(const Matrix& x) {
    Matrix r(1, x.cols);
    for (std::size_t j = 0; j < x.cols; ++j) {
        double m = x.at(0, j);
        for (std::size_t i = 1; i < x.rows; ++i) m = std::max(m, x.at(i, j));
        r.a[j] = m;
    }
    return r;
}

Matrix col_mins(const Matrix& x) {
    Matrix r(1, x.cols);
    for (std::size_t j = 0; j < x.cols; ++j) {
        double m = x.at(0, j);
        for (std::size_t i = 1; i < x.rows; ++i) m = std::min(m, x.at(i, j));
        r.a[j] = m;
    }
    return r;
}

double sum_all(const Matrix& x) {
    double s = 0.0;
    for (double v : x.a) s += v;
    return s;
}

double min_all(const Matrix& x) {
    double m = x.a[0];
    for (double v : x.a) m = std::min(m, v);
    return m;
}

double max_all(const Matrix& x) {
    double m = x.a[0];
    for (double v : x.a) m = std::max(m, v);
    return m;
}

double mean_all(const Matrix& x) {
    return sum_all(x) / (double)x.a.size();
}

double var_all(const Matrix& x) {
    if (x.a.size() < 2) return 0.0;
    double m = mean_all(x);
    double s = 0.0;
    for (double v : x.a) s += (v - m) * (v - m);
    return s / (double)(x.a.size() - 1);
}

Matrix reverse_rows(const Matrix& x) {
    Matrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) r.at(x.rows - 1 - i, j) = x.at(i, j);
    return r;
}

Matrix direct_sum(const Matrix& x, const Matrix& y) {
    Matrix r(x.rows + y.rows, x.cols + y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
    for (std::size_t i = 0; i < y.rows; ++i)
        for (std::size_t j = 0; j < y.cols; ++j) r.at(x.rows + i, x.cols + j) = y.at(i, j);
    return r;
}

Matrix kronecker(const Matrix& x, const Matrix& y) {
    Matrix r(x.rows * y.rows, x.cols * y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) {
            double v = x.at(i, j);
            if (v == 0.0) continue;
            for (std::size_t k = 0; k < y.rows; ++k)
                for (std::size_t l = 0; l < y.cols; ++l)
                    r.at(i * y.rows + k, j * y.cols + l) = v * y.at(k, l);
        }
    return r;
}

Matrix hconcat(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows)
        throw ShapeMismatch("concat on " + shape_str(x) + " and " + shape_str(y));
    Matrix r(x.rows, x.cols + y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
        for (std::size_t j = 0; j < y.cols; ++j) r.at(i, x.cols + j) = y.at(i, j);
    }
    return r;
}

Matrix cholesky(const Matrix& x) {
    require_square(x, "cholesky");
    std::size_t n = x.rows;
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = x.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
            if (i == j) {
                if (s <= 0.0)
                    throw NotPositiveDefinite("diagonal entry " + std::to_string(i));
                l.at(i, i) = std::sqrt(s);
            } else {
                l.at(i, j) = s / l.at(j, j);
            }
        }
    }
    return l;
}

LuFactors lu_doolittle(const Matrix& x) {
    require_square(x, "lu");
    std::size_t n = x.rows;
    Matrix l = Matrix::identity(n);
    Matrix u(n, n);
    double scale = std::max(x.max_abs(), 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = x.at(i, j);
            for (std::size_t k = 0; k < i; ++k) s -= l.at(i, k) * u.at(k, j);
            u.at(i, j) = s;
        }
        if (std::abs(u.at(i, i)) < 1e-12 * scale)
            throw SingularMatrix("zero pivot in lu at " + std::to_string(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = x.at(j, i);
            for (std::size_t k = 0; k < i; ++k) s -= l.at(j, k) * u.at(k, i);
            l.at(j, i) = s / u.at(i, i);
        }
    }
    return {l, u};
}

LupFactors lu_partial_pivot(const Matrix& x) {
    require_square(x, "lup");
    std::size_t n = x.rows;
    Matrix w = x;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    double scale = std::max(x.max_abs(), 1.0);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (std::abs(w.at(i, c)) > std::abs(w.at(piv, c))) piv = i;
        if (std::abs(w.at(piv, c)) < 1e-12 * scale)
            throw SingularMatrix("zero pivot in lup at " + std::to_string(c));
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(w.at(piv, j), w.at(c, j));
            std::swap(perm[piv], perm[c]);
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            double f = w.at(i, c) / w.at(c, c);
            w.at(i, c) = f;
            for (std::size_t j = c + 1; j < n; ++j) w.at(i, j) -= f * w.at(c, j);
        }
    }
    LupFactors out{Matrix::identity(n), Matrix(n, n), Matrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) out.l.at(i, j) = w.at(i, j);
        for (std::size_t j = i; j < n; ++j) out.u.at(i, j) = w.at(i, j);
        out.p.at(i, perm[i]) = 1.0;
    }
    return out;
}

QrFactors qr_householder(const Matrix& x) {
    if (x.rows < x.cols)
        throw ShapeMismatch("qr needs rows >= cols, got " + shape_str(x));
    std::size_t m = x.rows, n = x.cols;
    Matrix r = x;
    Matrix qfull = Matrix::identity(m);
    std::vector<double> v(m);
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += r.at(i, k) * r.at(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        double alpha = r.at(k, k) > 0 ? -norm : norm;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            v[i] = r.at(i, k);
            if (i == k) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) continue;
        for (std::size_t j = k; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i] * r.at(i, j);
            double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) r.at(i, j) -= f * v[i];
        }
        for (std::size_t j = 0; j < m; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i] * qfull.at(i, j);
            double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) qfull.at(i, j) -= f * v[i];
        }
    }
    QrFactors out{Matrix(m, n), Matrix(n, n)};
    // qfull currently holds Q^T; thin Q = first n columns of its transpose
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out.q.at(i, j) = qfull.at(j, i);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) out.r.at(i, j) = r.at(i, j);
    // canonical form: positive diagonal of R
    for (std::size_t i = 0; i < n; ++i) {
        if (out.r.at(i, i) < 0.0) {
            for (std::size_t j = i; j < n; ++j) out.r.at(i, j) = -out.r.at(i, j);
            for (std::size_t k = 0; k < m; ++k) out.q.at(k, i) = -out.q.at(k, i);
        }
    }
    return out;
}

bool all_finite(const Matrix& x) {
    for (double v : x.a)
        if (!std::isfinite(v)) return false;
    return true;
}

double max_abs_diff(const Matrix& x, const Matrix& y) {
    require_same_shape(x, y, "compare");
    double m = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
    return m;
}

}
