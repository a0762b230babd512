#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace natconv {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Compressed sparse row matrix. Column indices are strictly increasing within
/// each row; the sparsity pattern is fixed after construction, values are not.
class SparseMatrix {
public:
    SparseMatrix() = default;

    /// Takes ownership of CSR arrays. Throws std::invalid_argument when the
    /// arrays are inconsistent or a row is not strictly increasing.
    SparseMatrix(int rows, int cols, std::vector<int> row_offsets, std::vector<int> column_indices,
                 std::vector<double> values);

    /// Duplicate (row, col) pairs are summed. Explicit zeros are kept so the
    /// pattern can be built ahead of the values.
    static SparseMatrix from_triplets(int rows, int cols, std::span<const Triplet> triplets);
    static SparseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    std::span<const int> row_offsets() const { return row_offsets_; }
    std::span<const int> column_indices() const { return column_indices_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    std::span<const int> row_columns(int i) const;
    std::span<const double> row_values(int i) const;

    /// Stored value at (i, j), 0 when (i, j) is outside the pattern.
    double at(int i, int j) const;

    SparseMatrix transpose() const;
    double frobenius_norm() const;
    double max_abs() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_offsets_{0};
    std::vector<int> column_indices_;
    std::vector<double> values_;
};

/// y = A x, OpenMP-parallel over rows. Throws std::invalid_argument on size mismatch.
std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);

/// Keeps rows and columns whose map entry is >= 0, renumbered by that entry.
SparseMatrix restrict_matrix(const SparseMatrix& a, std::span<const int> index_map, int new_size);

/// Coordinate-format MatrixMarket dump (general, real).
void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path);

namespace reference {

/// Single-threaded y = A x.
std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);

}  // namespace reference

}  // namespace natconv
