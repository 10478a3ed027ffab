#include "hadad/mnc.hpp"

#include <algorithm>
#include <numeric>

#include "hadad/errors.hpp"

namespace hadad {

double MncHistogram::nnz() const {
    return std::accumulate(row_counts.begin(), row_counts.end(), 0.0);
}

MncHistogram uniform_histogram(Shape shape, double sparsity) {
    MncHistogram h;
    h.row_counts.assign(shape.rows, sparsity * (double)shape.cols);
    h.col_counts.assign(shape.cols, sparsity * (double)shape.rows);
    return h;
}

MncHistogram histogram_for(const MatrixDescriptor& d) {
    if (d.mnc) {
        MncHistogram h;
        h.row_counts = d.mnc->row_counts;
        h.col_counts = d.mnc->col_counts;
        return h;
    }
    return uniform_histogram({d.rows, d.cols}, d.sparsity());
}

namespace {

// Rescale counts so they sum to target, clamping each entry to cap. Excess
// from clamped entries is redistributed over the rest, so zero entries stay
// zero and the total is preserved whenever target is reachable.
std::vector<double> scale_counts(const std::vector<double>& counts, double target, double cap) {
    std::vector<double> out(counts.size(), 0.0);
    std::vector<char> capped(counts.size(), 0);
    double pending_target = target;
    double pending_total = std::accumulate(counts.begin(), counts.end(), 0.0);
    bool changed = true;
    while (changed) {
        changed = false;
        double f = pending_total > 0.0 ? pending_target / pending_total : 0.0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (capped[i])
                continue;
            out[i] = counts[i] * f;
            if (out[i] > cap) {
                out[i] = cap;
                capped[i] = 1;
                pending_target -= cap;
                pending_total -= counts[i];
                changed = true;
            }
        }
    }
    return out;
}

double support(const std::vector<double>& counts) {
    double n = 0.0;
    for (double c : counts)
        if (c > 0.0)
            n += 1.0;
    return n;
}

}

MncResult mnc_multiply(const MncHistogram& a, const MncHistogram& b) {
    if (a.cols() != b.rows())
        throw ShapeMismatch("mnc product: inner dimensions disagree");
    double m = (double)a.rows();
    double p = (double)b.cols();
    double tasks = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k)
        tasks += a.col_counts[k] * b.row_counts[k];
    MncResult r;
    r.nnz = std::min({m * p, tasks, support(a.row_counts) * p, support(b.col_counts) * m});
    r.hist.row_counts = scale_counts(a.row_counts, r.nnz, p);
    r.hist.col_counts = scale_counts(b.col_counts, r.nnz, m);
    return r;
}

MncResult mnc_transpose(const MncHistogram& a) {
    MncResult r;
    r.hist.row_counts = a.col_counts;
    r.hist.col_counts = a.row_counts;
    r.nnz = r.hist.nnz();
    return r;
}

MncResult mnc_elem_multiply(const MncHistogram& a, const MncHistogram& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeMismatch("mnc elementwise product: shapes disagree");
    MncResult r;
    r.hist.row_counts.resize(a.rows());
    r.hist.col_counts.resize(a.cols());
    double row_total = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        r.hist.row_counts[i] = std::min(a.row_counts[i], b.row_counts[i]);
        row_total += r.hist.row_counts[i];
    }
    double col_total = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        r.hist.col_counts[j] = std::min(a.col_counts[j], b.col_counts[j]);
        col_total += r.hist.col_counts[j];
    }
    r.nnz = std::min(row_total, col_total);
    r.hist.row_counts = scale_counts(r.hist.row_counts, r.nnz, (double)a.cols());
    r.hist.col_counts = scale_counts(r.hist.col_counts, r.nnz, (double)a.rows());
    return r;
}

MncResult mnc_add(const MncHistogram& a, const MncHistogram& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeMismatch("mnc sum: shapes disagree");
    MncResult r;
    r.hist.row_counts.resize(a.rows());
    r.hist.col_counts.resize(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        r.hist.row_counts[i] = std::min((double)a.cols(), a.row_counts[i] + b.row_counts[i]);
    for (std::size_t j = 0; j < a.cols(); ++j)
        r.hist.col_counts[j] = std::min((double)a.rows(), a.col_counts[j] + b.col_counts[j]);
    r.nnz = std::min(std::accumulate(r.hist.row_counts.begin(), r.hist.row_counts.end(), 0.0),
                     std::accumulate(r.hist.col_counts.begin(), r.hist.col_counts.end(), 0.0));
    r.hist.row_counts = scale_counts(r.hist.row_counts, r.nnz, (double)a.cols());
    r.hist.col_counts = scale_counts(r.hist.col_counts, r.nnz, (double)a.rows());
    return r;
}

}
