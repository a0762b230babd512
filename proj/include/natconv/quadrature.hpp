#pragma once

#include <array>
#include <vector>

#include "natconv/mesh.hpp"

namespace natconv {

/// Symmetric quadrature on a triangle. Points are barycentric coordinates;
/// weights sum to one and are multiplied by the triangle area at the use site.
struct QuadratureRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    int degree = 0;

    std::size_t size() const { return weights.size(); }
};

/// Rules of degree 1 (centroid), 2 (3 points), 4 (6 points) and 6 (12 points).
/// Throws std::invalid_argument for any other degree. The returned reference
/// points to a process-lifetime table.
const QuadratureRule& quadrature_rule(int degree);

/// Cartesian position of a barycentric point in a triangle.
inline Point barycentric_to_point(const std::array<double, 3>& lambda, Point a, Point b, Point c)
{
    return {lambda[0] * a.x + lambda[1] * b.x + lambda[2] * c.x,
            lambda[0] * a.y + lambda[1] * b.y + lambda[2] * c.y};
}

}  // namespace natconv
