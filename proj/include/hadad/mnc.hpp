#pragma once

#include <cstddef>
#include <vector>

#include "hadad/catalog.hpp"

namespace hadad {

// Per-row / per-column nonzero count histogram of a matrix.
struct MncHistogram {
    std::vector<double> row_counts;
    std::vector<double> col_counts;

    std::size_t rows() const { return row_counts.size(); }
    std::size_t cols() const { return col_counts.size(); }
    double nnz() const;
};

// Maximally uniform histogram for a matrix known only by shape and sparsity.
MncHistogram uniform_histogram(Shape shape, double sparsity);

MncHistogram histogram_for(const MatrixDescriptor& d);

struct MncResult {
    double nnz = 0.0;
    MncHistogram hist;
};

// Histogram-based nnz estimation for product, transpose, elementwise multiply,
// and addition. Derived histograms follow the count-preserving base scheme.
MncResult mnc_multiply(const MncHistogram& a, const MncHistogram& b);
MncResult mnc_transpose(const MncHistogram& a);
MncResult mnc_elem_multiply(const MncHistogram& a, const MncHistogram& b);
MncResult mnc_add(const MncHistogram& a, const MncHistogram& b);

}
