#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library's assembly or MMS code; the exact pair is re-typed from its closed
// form and derivatives come from central differences.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "natconv/sparse_matrix.hpp"

namespace oracle {

inline double psi(double x, double y)
{
    return 2.0 * x * x * (x - 1.0) * (x - 1.0) * y * (y - 1.0) * (2.0 * y - 1.0);
}

inline double theta(double x, double y)
{
    return -2.0 * y * y * (y - 1.0) * (y - 1.0) * x * (x - 1.0) * (2.0 * x - 1.0);
}

template <class F>
double dx(F f, double x, double y, double h = 1e-5)
{
    return (f(x + h, y) - f(x - h, y)) / (2.0 * h);
}

template <class F>
double dy(F f, double x, double y, double h = 1e-5)
{
    return (f(x, y + h) - f(x, y - h)) / (2.0 * h);
}

template <class F>
double laplacian(F f, double x, double y, double h = 1e-4)
{
    return (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y)) / (h * h);
}

/// f1 and f2 recomputed from finite differences of the exact pair.
inline double f1_fd(double ra, double x, double y)
{
    return -laplacian(psi, x, y) - ra * dx(theta, x, y);
}

inline double f2_fd(double x, double y)
{
    const double j = dx(psi, x, y) * dy(theta, x, y) - dy(psi, x, y) * dx(theta, x, y);
    return j - laplacian(theta, x, y);
}

inline Eigen::MatrixXd dense(const natconv::SparseMatrix& a)
{
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i) {
        const auto cols = a.row_columns(i);
        const auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            d(i, cols[k]) += vals[k];
        }
    }
    return d;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = u(rng);
    }
    return v;
}

inline double norm2(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

}  // namespace oracle
