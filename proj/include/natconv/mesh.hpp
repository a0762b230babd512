#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace natconv {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Node indices of a triangle, counter-clockwise.
using Triangle = std::array<int, 3>;

/// Upper bound on subdivisions per side accepted by build_structured_mesh.
inline constexpr int kMaxSubdivisions = 4096;

/// Structured right-triangle mesh of the unit square.
///
/// Nodes are ordered lexicographically: node (i, j) sits at (i*h, j*h) and has
/// index j*(n+1) + i. Each grid square is split along its lower-left to
/// upper-right diagonal. Immutable once built.
class Mesh {
public:
    int subdivisions() const { return n_; }
    double h() const { return 1.0 / static_cast<double>(n_); }

    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_triangles() const { return triangles_.size(); }
    std::size_t num_interior() const { return interior_nodes_.size(); }

    const std::vector<Point>& nodes() const { return nodes_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const std::vector<char>& boundary_mask() const { return boundary_; }

    const Point& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    const Triangle& triangle(int t) const { return triangles_[static_cast<std::size_t>(t)]; }
    bool is_boundary(int i) const { return boundary_[static_cast<std::size_t>(i)] != 0; }

    int node_index(int i, int j) const { return j * (n_ + 1) + i; }

    /// Interior nodes in lexicographic order; position in this list is the
    /// interior (unknown) index of the node.
    std::span<const int> interior_nodes() const { return interior_nodes_; }
    /// Interior index of a node, or -1 for boundary nodes.
    int interior_index(int node) const { return interior_index_[static_cast<std::size_t>(node)]; }

    /// Triangles containing a node, ascending.
    std::span<const int> incident_triangles(int node) const;

    /// Triangle containing p. Points on shared edges resolve to one of the
    /// candidates deterministically. Throws std::out_of_range outside [0,1]^2.
    int locate(Point p) const;

private:
    friend Mesh build_structured_mesh(int n);

    int n_ = 0;
    std::vector<Point> nodes_;
    std::vector<Triangle> triangles_;
    std::vector<char> boundary_;
    std::vector<int> interior_nodes_;
    std::vector<int> interior_index_;
    std::vector<int> incidence_offsets_;
    std::vector<int> incidence_;
};

/// Throws std::invalid_argument unless 1 <= n <= kMaxSubdivisions.
Mesh build_structured_mesh(int n);

/// Area and constant P1 basis gradients of one triangle.
struct ElementGeometry {
    double area = 0.0;
    std::array<Vec2, 3> grad{};
};

/// Throws std::domain_error for degenerate or clockwise triangles.
ElementGeometry triangle_geometry(Point a, Point b, Point c);

ElementGeometry element_geometry(const Mesh& mesh, int t);

}  // namespace natconv
