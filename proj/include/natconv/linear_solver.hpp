#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "natconv/sparse_matrix.hpp"

namespace natconv {

enum class SolveMethod { direct, cg };

const char* to_string(SolveMethod method);

struct LinearSolveOptions {
    SolveMethod method = SolveMethod::direct;
    /// Relative residual target for cg; ignored by the direct solver.
    double tolerance = 1e-12;
    /// cg iteration cap; 0 selects max(1000, 10 * rows).
    int max_iterations = 0;
};

struct LinearSolveReport {
    SolveMethod method = SolveMethod::direct;
    int iterations = 0;
    /// ||A x - b||_2 of the returned solution.
    double residual_norm = 0.0;
};

struct LinearSolveResult {
    std::vector<double> x;
    LinearSolveReport report;
};

/// Raised by the direct solver when a pivot is zero or negligible relative to
/// the largest matrix entry.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(int pivot_index, double pivot_value);
    int pivot_index() const { return pivot_index_; }
    double pivot_value() const { return pivot_value_; }

private:
    int pivot_index_;
    double pivot_value_;
};

/// Raised when cg reaches its iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, LinearSolveReport report);
    const LinearSolveReport& report() const { return report_; }

private:
    LinearSolveReport report_;
};

/// Reverse Cuthill-McKee ordering of the symmetrized pattern of a square
/// matrix. Entry k of the result is the original index placed at position k.
std::vector<int> reverse_cuthill_mckee(const SparseMatrix& a);

/// LU factorization with partial pivoting in band storage.
///
/// The matrix is first permuted symmetrically by reverse Cuthill-McKee so the
/// band stays narrow for mesh-derived systems. Row elimination for each pivot
/// runs OpenMP-parallel once the band is wide enough to pay for it.
class BandedLU {
public:
    /// Throws SingularMatrixError (index in the original numbering) on a
    /// negligible pivot; std::invalid_argument if a is not square.
    explicit BandedLU(const SparseMatrix& a);

    std::vector<double> solve(std::span<const double> b) const;

    int size() const { return n_; }
    int lower_bandwidth() const { return kl_; }
    int upper_bandwidth() const { return ku_; }

private:
    double& at(int i, int j) { return band_[static_cast<std::size_t>(i) * width_ + static_cast<std::size_t>(j - i + kl_)]; }
    double at(int i, int j) const { return band_[static_cast<std::size_t>(i) * width_ + static_cast<std::size_t>(j - i + kl_)]; }

    int n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    std::size_t width_ = 0;
    std::vector<int> order_;
    std::vector<int> pivots_;
    std::vector<double> band_;
};

/// Solves A x = b with the selected method. cg requires A symmetric positive
/// definite and uses a Jacobi preconditioner.
LinearSolveResult solve_linear(const SparseMatrix& a, std::span<const double> b, const LinearSolveOptions& options = {});

}  // namespace natconv
