#include "natconv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace natconv {

Mesh build_structured_mesh(int n)
{
    if (n < 1 || n > kMaxSubdivisions) {
        throw std::invalid_argument("build_structured_mesh: n must be in [1, " +
                                    std::to_string(kMaxSubdivisions) + "], got " + std::to_string(n));
    }

    Mesh m;
    m.n_ = n;
    const int np = n + 1;
    const auto num_nodes = static_cast<std::size_t>(np) * static_cast<std::size_t>(np);

    m.nodes_.reserve(num_nodes);
    m.boundary_.assign(num_nodes, 0);
    m.interior_index_.assign(num_nodes, -1);
    for (int j = 0; j < np; ++j) {
        for (int i = 0; i < np; ++i) {
            // i / n rather than i * h so that the last node lands exactly on 1.
            m.nodes_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
            const auto idx = static_cast<std::size_t>(m.node_index(i, j));
            if (i == 0 || j == 0 || i == n || j == n) {
                m.boundary_[idx] = 1;
            } else {
                m.interior_index_[idx] = static_cast<int>(m.interior_nodes_.size());
                m.interior_nodes_.push_back(static_cast<int>(idx));
            }
        }
    }

    // Square (i, j) owns triangles 2s (below the diagonal) and 2s+1 (above),
    // with s = j*n + i. locate() relies on this numbering.
    m.triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = m.node_index(i, j);
            const int v10 = m.node_index(i + 1, j);
            const int v01 = m.node_index(i, j + 1);
            const int v11 = m.node_index(i + 1, j + 1);
            m.triangles_.push_back({v00, v10, v11});
            m.triangles_.push_back({v00, v11, v01});
        }
    }

    std::vector<int> counts(num_nodes + 1, 0);
    for (const auto& tri : m.triangles_) {
        for (int v : tri) {
            ++counts[static_cast<std::size_t>(v) + 1];
        }
    }
    for (std::size_t i = 1; i < counts.size(); ++i) {
        counts[i] += counts[i - 1];
    }
    m.incidence_offsets_ = counts;
    m.incidence_.resize(static_cast<std::size_t>(counts.back()));
    std::vector<int> cursor(counts.begin(), counts.end() - 1);
    for (std::size_t t = 0; t < m.triangles_.size(); ++t) {
        for (int v : m.triangles_[t]) {
            m.incidence_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(v)]++)] = static_cast<int>(t);
        }
    }
    return m;
}

std::span<const int> Mesh::incident_triangles(int node) const
{
    const auto begin = static_cast<std::size_t>(incidence_offsets_[static_cast<std::size_t>(node)]);
    const auto end = static_cast<std::size_t>(incidence_offsets_[static_cast<std::size_t>(node) + 1]);
    return std::span<const int>(incidence_).subspan(begin, end - begin);
}

int Mesh::locate(Point p) const
{
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
        throw std::out_of_range("Mesh::locate: point (" + std::to_string(p.x) + ", " +
                                std::to_string(p.y) + ") lies outside the unit square");
    }
    const double sx = p.x * n_;
    const double sy = p.y * n_;
    const int i = std::min(static_cast<int>(std::floor(sx)), n_ - 1);
    const int j = std::min(static_cast<int>(std::floor(sy)), n_ - 1);
    const int square = j * n_ + i;
    const bool below_diagonal = (sx - i) >= (sy - j);
    return 2 * square + (below_diagonal ? 0 : 1);
}

ElementGeometry triangle_geometry(Point a, Point b, Point c)
{
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double scale = std::max({std::abs(b.x - a.x), std::abs(b.y - a.y), std::abs(c.x - a.x),
                                   std::abs(c.y - a.y)});
    if (!(det > 1e-14 * scale * scale)) {
        throw std::domain_error("triangle_geometry: degenerate or clockwise triangle (2*area = " +
                                std::to_string(det) + ")");
    }
    ElementGeometry g;
    g.area = 0.5 * det;
    // grad(phi_i) is the inward normal of the opposite edge scaled by 1/det.
    g.grad[0] = {(b.y - c.y) / det, (c.x - b.x) / det};
    g.grad[1] = {(c.y - a.y) / det, (a.x - c.x) / det};
    g.grad[2] = {(a.y - b.y) / det, (b.x - a.x) / det};
    return g;
}

ElementGeometry element_geometry(const Mesh& mesh, int t)
{
    if (t < 0 || static_cast<std::size_t>(t) >= mesh.num_triangles()) {
        throw std::out_of_range("element_geometry: triangle index " + std::to_string(t) + " out of range");
    }
    const Triangle& tri = mesh.triangle(t);
    return triangle_geometry(mesh.node(tri[0]), mesh.node(tri[1]), mesh.node(tri[2]));
}

}  // namespace natconv
