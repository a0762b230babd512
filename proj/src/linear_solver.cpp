#include "natconv/linear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace natconv {

const char* to_string(SolveMethod method)
{
    return method == SolveMethod::direct ? "direct" : "cg";
}

namespace {

std::string singular_message(int pivot_index, double pivot_value)
{
    std::ostringstream os;
    os << "singular matrix: pivot " << pivot_value << " at unknown " << pivot_index;
    return os.str();
}

double norm2(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double residual_norm(const SparseMatrix& a, std::span<const double> x, std::span<const double> b)
{
    auto r = spmv(a, x);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] -= b[i];
    }
    return norm2(r);
}

std::vector<std::vector<int>> symmetric_adjacency(const SparseMatrix& a)
{
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(a.rows()));
    for (int i = 0; i < a.rows(); ++i) {
        for (int j : a.row_columns(i)) {
            if (j != i) {
                adj[static_cast<std::size_t>(i)].push_back(j);
                adj[static_cast<std::size_t>(j)].push_back(i);
            }
        }
    }
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return adj;
}

// Breadth-first level structure from start over unvisited nodes; returns the
// nodes of the deepest level and the depth.
std::pair<std::vector<int>, int> last_level(const std::vector<std::vector<int>>& adj, int start,
                                            const std::vector<char>& done)
{
    std::vector<int> level{start};
    std::vector<char> seen(done);
    seen[static_cast<std::size_t>(start)] = 1;
    int depth = 0;
    while (true) {
        std::vector<int> next;
        for (int v : level) {
            for (int w : adj[static_cast<std::size_t>(v)]) {
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    next.push_back(w);
                }
            }
        }
        if (next.empty()) {
            return {level, depth};
        }
        level = std::move(next);
        ++depth;
    }
}

}  // namespace

SingularMatrixError::SingularMatrixError(int pivot_index, double pivot_value)
    : std::runtime_error(singular_message(pivot_index, pivot_value))
    , pivot_index_(pivot_index)
    , pivot_value_(pivot_value)
{
}

ConvergenceError::ConvergenceError(const std::string& what, LinearSolveReport report)
    : std::runtime_error(what)
    , report_(report)
{
}

std::vector<int> reverse_cuthill_mckee(const SparseMatrix& a)
{
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("reverse_cuthill_mckee: matrix must be square");
    }
    const auto adj = symmetric_adjacency(a);
    const auto n = adj.size();
    auto degree = [&](int v) { return adj[static_cast<std::size_t>(v)].size(); };

    std::vector<int> order;
    order.reserve(n);
    std::vector<char> done(n, 0);
    while (order.size() < n) {
        int start = -1;
        for (std::size_t v = 0; v < n; ++v) {
            if (!done[v] && (start < 0 || degree(static_cast<int>(v)) < degree(start))) {
                start = static_cast<int>(v);
            }
        }
        // Pseudo-peripheral start node (George-Liu).
        auto [level, depth] = last_level(adj, start, done);
        for (int pass = 0; pass < 8; ++pass) {
            const int candidate = *std::min_element(level.begin(), level.end(),
                                                    [&](int x, int y) { return degree(x) < degree(y); });
            auto [next_level, next_depth] = last_level(adj, candidate, done);
            if (next_depth <= depth) {
                break;
            }
            start = candidate;
            level = std::move(next_level);
            depth = next_depth;
        }

        const std::size_t first = order.size();
        order.push_back(start);
        done[static_cast<std::size_t>(start)] = 1;
        for (std::size_t head = first; head < order.size(); ++head) {
            std::vector<int> next;
            for (int w : adj[static_cast<std::size_t>(order[head])]) {
                if (!done[static_cast<std::size_t>(w)]) {
                    done[static_cast<std::size_t>(w)] = 1;
                    next.push_back(w);
                }
            }
            std::stable_sort(next.begin(), next.end(), [&](int x, int y) { return degree(x) < degree(y); });
            order.insert(order.end(), next.begin(), next.end());
        }
    }
    std::reverse(order.begin(), order.end());
    return order;
}

BandedLU::BandedLU(const SparseMatrix& a)
    : n_(a.rows())
{
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("BandedLU: matrix must be square");
    }
    order_ = reverse_cuthill_mckee(a);
    std::vector<int> position(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) {
        position[static_cast<std::size_t>(order_[static_cast<std::size_t>(k)])] = k;
    }

    for (int i = 0; i < n_; ++i) {
        const int pi = position[static_cast<std::size_t>(i)];
        for (int j : a.row_columns(i)) {
            const int pj = position[static_cast<std::size_t>(j)];
            kl_ = std::max(kl_, pi - pj);
            ku_ = std::max(ku_, pj - pi);
        }
    }
    // Row interchanges widen the upper band by at most kl.
    width_ = static_cast<std::size_t>(2 * kl_ + ku_ + 1);
    band_.assign(static_cast<std::size_t>(n_) * width_, 0.0);
    for (int i = 0; i < n_; ++i) {
        const int pi = position[static_cast<std::size_t>(i)];
        const auto cols = a.row_columns(i);
        const auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            at(pi, position[static_cast<std::size_t>(cols[k])]) = vals[k];
        }
    }

    const double tiny = std::max(a.max_abs(), std::numeric_limits<double>::min()) * 1e-14;
    const int uw = kl_ + ku_;
    pivots_.resize(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) {
        const int last_row = std::min(n_ - 1, k + kl_);
        const int last_col = std::min(n_ - 1, k + uw);

        int p = k;
        double best = std::abs(at(k, k));
        for (int i = k + 1; i <= last_row; ++i) {
            if (std::abs(at(i, k)) > best) {
                best = std::abs(at(i, k));
                p = i;
            }
        }
        if (!(best > tiny)) {
            throw SingularMatrixError(order_[static_cast<std::size_t>(k)], best);
        }
        pivots_[static_cast<std::size_t>(k)] = p;
        if (p != k) {
            for (int j = k; j <= last_col; ++j) {
                std::swap(at(k, j), at(p, j));
            }
        }

        const double inv_pivot = 1.0 / at(k, k);
#pragma omp parallel for schedule(static) if (kl_ >= 64)
        for (int i = k + 1; i <= last_row; ++i) {
            const double l = at(i, k) * inv_pivot;
            at(i, k) = l;
            if (l != 0.0) {
                for (int j = k + 1; j <= last_col; ++j) {
                    at(i, j) -= l * at(k, j);
                }
            }
        }
    }
}

std::vector<double> BandedLU::solve(std::span<const double> b) const
{
    if (b.size() != static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("BandedLU::solve: right-hand side has wrong size");
    }
    std::vector<double> y(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) {
        y[static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(order_[static_cast<std::size_t>(k)])];
    }
    for (int k = 0; k < n_; ++k) {
        const int p = pivots_[static_cast<std::size_t>(k)];
        if (p != k) {
            std::swap(y[static_cast<std::size_t>(k)], y[static_cast<std::size_t>(p)]);
        }
        const double yk = y[static_cast<std::size_t>(k)];
        const int last_row = std::min(n_ - 1, k + kl_);
        for (int i = k + 1; i <= last_row; ++i) {
            y[static_cast<std::size_t>(i)] -= at(i, k) * yk;
        }
    }
    const int uw = kl_ + ku_;
    for (int i = n_ - 1; i >= 0; --i) {
        double s = y[static_cast<std::size_t>(i)];
        const int last_col = std::min(n_ - 1, i + uw);
        for (int j = i + 1; j <= last_col; ++j) {
            s -= at(i, j) * y[static_cast<std::size_t>(j)];
        }
        y[static_cast<std::size_t>(i)] = s / at(i, i);
    }
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) {
        x[static_cast<std::size_t>(order_[static_cast<std::size_t>(k)])] = y[static_cast<std::size_t>(k)];
    }
    return x;
}

namespace {

LinearSolveResult solve_cg(const SparseMatrix& a, std::span<const double> b, const LinearSolveOptions& options)
{
    const auto n = static_cast<std::size_t>(a.rows());
    const int cap = options.max_iterations > 0 ? options.max_iterations : std::max(1000, 10 * a.rows());

    std::vector<double> inv_diag(n);
    for (int i = 0; i < a.rows(); ++i) {
        const double d = a.at(i, i);
        if (!(d > 0.0)) {
            throw std::invalid_argument("solve_linear(cg): non-positive diagonal at row " + std::to_string(i) +
                                        "; matrix is not SPD");
        }
        inv_diag[static_cast<std::size_t>(i)] = 1.0 / d;
    }

    LinearSolveResult result;
    result.report.method = SolveMethod::cg;
    result.x.assign(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        return result;
    }
    const double target = options.tolerance * bnorm;

    std::vector<double> r(b.begin(), b.end());
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = inv_diag[i] * r[i];
    }
    std::vector<double> p = z;
    double rz = dot(r, z);

    int it = 0;
    double rnorm = bnorm;
    while (rnorm > target && it < cap) {
        const auto ap = spmv(a, p);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) {
            throw std::invalid_argument("solve_linear(cg): p^T A p <= 0; matrix is not SPD");
        }
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            result.x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            z[i] = inv_diag[i] * r[i];
        }
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = z[i] + beta * p[i];
        }
        rnorm = norm2(r);
        ++it;
    }
    result.report.iterations = it;
    result.report.residual_norm = residual_norm(a, result.x, b);
    if (rnorm > target) {
        std::ostringstream os;
        os << "solve_linear(cg): no convergence after " << it << " iterations (residual " << rnorm
           << ", target " << target << ")";
        throw ConvergenceError(os.str(), result.report);
    }
    return result;
}

}  // namespace

LinearSolveResult solve_linear(const SparseMatrix& a, std::span<const double> b, const LinearSolveOptions& options)
{
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("solve_linear: matrix must be square");
    }
    if (b.size() != static_cast<std::size_t>(a.rows())) {
        throw std::invalid_argument("solve_linear: right-hand side has " + std::to_string(b.size()) +
                                    " entries for a " + std::to_string(a.rows()) + "-row matrix");
    }
    if (options.method == SolveMethod::cg) {
        return solve_cg(a, b, options);
    }
    const BandedLU lu(a);
    LinearSolveResult result;
    result.x = lu.solve(b);
    result.report.method = SolveMethod::direct;
    result.report.residual_norm = residual_norm(a, result.x, b);
    return result;
}

}  // namespace natconv
