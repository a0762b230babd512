#include "natconv/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>
#include <string>

namespace natconv {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_offsets, std::vector<int> column_indices,
                           std::vector<double> values)
    : rows_(rows)
    , cols_(cols)
    , row_offsets_(std::move(row_offsets))
    , column_indices_(std::move(column_indices))
    , values_(std::move(values))
{
    if (rows_ < 0 || cols_ < 0) {
        throw std::invalid_argument("SparseMatrix: negative dimension");
    }
    if (row_offsets_.size() != static_cast<std::size_t>(rows_) + 1 || row_offsets_.front() != 0 ||
        static_cast<std::size_t>(row_offsets_.back()) != column_indices_.size() ||
        column_indices_.size() != values_.size()) {
        throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
    }
    for (int i = 0; i < rows_; ++i) {
        const int begin = row_offsets_[static_cast<std::size_t>(i)];
        const int end = row_offsets_[static_cast<std::size_t>(i) + 1];
        if (end < begin) {
            throw std::invalid_argument("SparseMatrix: row offsets decrease at row " + std::to_string(i));
        }
        for (int k = begin; k < end; ++k) {
            const int c = column_indices_[static_cast<std::size_t>(k)];
            if (c < 0 || c >= cols_) {
                throw std::invalid_argument("SparseMatrix: column index out of range in row " + std::to_string(i));
            }
            if (k > begin && c <= column_indices_[static_cast<std::size_t>(k) - 1]) {
                throw std::invalid_argument("SparseMatrix: columns not strictly increasing in row " +
                                            std::to_string(i));
            }
        }
    }
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::span<const Triplet> triplets)
{
    std::vector<Triplet> sorted(triplets.begin(), triplets.end());
    for (const auto& t : sorted) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
            throw std::invalid_argument("SparseMatrix::from_triplets: entry (" + std::to_string(t.row) + ", " +
                                        std::to_string(t.col) + ") out of range");
        }
    }
    // Stable so that duplicates are summed in insertion order.
    std::stable_sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    std::vector<int> offsets(static_cast<std::size_t>(rows) + 1, 0);
    std::vector<int> columns;
    std::vector<double> values;
    columns.reserve(sorted.size());
    values.reserve(sorted.size());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const Triplet& t = sorted[k];
        if (k > 0 && sorted[k - 1].row == t.row && sorted[k - 1].col == t.col) {
            values.back() += t.value;
            continue;
        }
        columns.push_back(t.col);
        values.push_back(t.value);
        ++offsets[static_cast<std::size_t>(t.row) + 1];
    }
    for (std::size_t i = 1; i < offsets.size(); ++i) {
        offsets[i] += offsets[i - 1];
    }
    return SparseMatrix(rows, cols, std::move(offsets), std::move(columns), std::move(values));
}

SparseMatrix SparseMatrix::identity(int n)
{
    std::vector<int> offsets(static_cast<std::size_t>(n) + 1);
    std::vector<int> columns(static_cast<std::size_t>(n));
    for (int i = 0; i <= n; ++i) {
        offsets[static_cast<std::size_t>(i)] = i;
    }
    for (int i = 0; i < n; ++i) {
        columns[static_cast<std::size_t>(i)] = i;
    }
    return SparseMatrix(n, n, std::move(offsets), std::move(columns), std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

std::span<const int> SparseMatrix::row_columns(int i) const
{
    const auto b = static_cast<std::size_t>(row_offsets_[static_cast<std::size_t>(i)]);
    const auto e = static_cast<std::size_t>(row_offsets_[static_cast<std::size_t>(i) + 1]);
    return std::span<const int>(column_indices_).subspan(b, e - b);
}

std::span<const double> SparseMatrix::row_values(int i) const
{
    const auto b = static_cast<std::size_t>(row_offsets_[static_cast<std::size_t>(i)]);
    const auto e = static_cast<std::size_t>(row_offsets_[static_cast<std::size_t>(i) + 1]);
    return std::span<const double>(values_).subspan(b, e - b);
}

double SparseMatrix::at(int i, int j) const
{
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
        throw std::out_of_range("SparseMatrix::at: index out of range");
    }
    const auto cols = row_columns(i);
    const auto it = std::lower_bound(cols.begin(), cols.end(), j);
    if (it == cols.end() || *it != j) {
        return 0.0;
    }
    return row_values(i)[static_cast<std::size_t>(it - cols.begin())];
}

SparseMatrix SparseMatrix::transpose() const
{
    std::vector<int> offsets(static_cast<std::size_t>(cols_) + 1, 0);
    for (int c : column_indices_) {
        ++offsets[static_cast<std::size_t>(c) + 1];
    }
    for (std::size_t i = 1; i < offsets.size(); ++i) {
        offsets[i] += offsets[i - 1];
    }
    std::vector<int> columns(column_indices_.size());
    std::vector<double> values(values_.size());
    std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
    for (int i = 0; i < rows_; ++i) {
        for (int k = row_offsets_[static_cast<std::size_t>(i)]; k < row_offsets_[static_cast<std::size_t>(i) + 1]; ++k) {
            const auto c = static_cast<std::size_t>(column_indices_[static_cast<std::size_t>(k)]);
            const auto dst = static_cast<std::size_t>(cursor[c]++);
            columns[dst] = i;
            values[dst] = values_[static_cast<std::size_t>(k)];
        }
    }
    return SparseMatrix(cols_, rows_, std::move(offsets), std::move(columns), std::move(values));
}

double SparseMatrix::frobenius_norm() const
{
    double s = 0.0;
    for (double v : values_) {
        s += v * v;
    }
    return std::sqrt(s);
}

double SparseMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

namespace {

void check_spmv_sizes(const SparseMatrix& a, std::span<const double> x)
{
    if (x.size() != static_cast<std::size_t>(a.cols())) {
        throw std::invalid_argument("spmv: matrix has " + std::to_string(a.cols()) + " columns, vector has " +
                                    std::to_string(x.size()) + " entries");
    }
}

}  // namespace

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x)
{
    check_spmv_sizes(a, x);
    std::vector<double> y(static_cast<std::size_t>(a.rows()), 0.0);
    const int* offsets = a.row_offsets().data();
    const int* columns = a.column_indices().data();
    const double* values = a.values().data();
    const int rows = a.rows();
#pragma omp parallel for schedule(static) if (rows > 4096)
    for (int i = 0; i < rows; ++i) {
        double s = 0.0;
        for (int k = offsets[i]; k < offsets[i + 1]; ++k) {
            s += values[k] * x[static_cast<std::size_t>(columns[k])];
        }
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

namespace reference {

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x)
{
    check_spmv_sizes(a, x);
    std::vector<double> y(static_cast<std::size_t>(a.rows()), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        const auto cols = a.row_columns(i);
        const auto vals = a.row_values(i);
        double s = 0.0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            s += vals[k] * x[static_cast<std::size_t>(cols[k])];
        }
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

}  // namespace reference

SparseMatrix restrict_matrix(const SparseMatrix& a, std::span<const int> index_map, int new_size)
{
    if (index_map.size() != static_cast<std::size_t>(a.rows()) || a.rows() != a.cols()) {
        throw std::invalid_argument("restrict_matrix: index map must cover a square matrix");
    }
    std::vector<int> offsets(static_cast<std::size_t>(new_size) + 1, 0);
    std::vector<int> columns;
    std::vector<double> values;
    // index_map is monotone on kept entries for every caller here, so kept rows
    // arrive in order and kept columns stay sorted.
    int last = -1;
    for (int i = 0; i < a.rows(); ++i) {
        const int ri = index_map[static_cast<std::size_t>(i)];
        if (ri < 0) {
            continue;
        }
        if (ri <= last || ri >= new_size) {
            throw std::invalid_argument("restrict_matrix: index map must be increasing and < new_size");
        }
        last = ri;
        const auto cols = a.row_columns(i);
        const auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const int rc = index_map[static_cast<std::size_t>(cols[k])];
            if (rc >= 0) {
                columns.push_back(rc);
                values.push_back(vals[k]);
            }
        }
        offsets[static_cast<std::size_t>(ri) + 1] = static_cast<int>(columns.size());
    }
    for (std::size_t i = 1; i < offsets.size(); ++i) {
        offsets[i] = std::max(offsets[i], offsets[i - 1]);
    }
    return SparseMatrix(new_size, new_size, std::move(offsets), std::move(columns), std::move(values));
}

void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("write_matrix_market: cannot open " + path.string());
    }
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (int i = 0; i < a.rows(); ++i) {
        const auto cols = a.row_columns(i);
        const auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            out << i + 1 << ' ' << cols[k] + 1 << ' ' << vals[k] << '\n';
        }
    }
    if (!out) {
        throw std::runtime_error("write_matrix_market: write failed for " + path.string());
    }
}

}  // namespace natconv
