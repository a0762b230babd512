#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "natconv/mesh.hpp"

using namespace natconv;

TEST(Mesh, SingleSquareHasNoInterior)
{
    const Mesh m = build_structured_mesh(1);
    EXPECT_EQ(m.num_nodes(), 4u);
    EXPECT_EQ(m.num_triangles(), 2u);
    EXPECT_EQ(m.num_interior(), 0u);
    for (int i = 0; i < 4; ++i) {
        EXPECT_TRUE(m.is_boundary(i));
    }
}

TEST(Mesh, TwoByTwoHasCentreNode)
{
    const Mesh m = build_structured_mesh(2);
    EXPECT_EQ(m.num_nodes(), 9u);
    EXPECT_EQ(m.num_triangles(), 8u);
    ASSERT_EQ(m.num_interior(), 1u);
    const int c = m.interior_nodes()[0];
    EXPECT_EQ(c, 4);
    EXPECT_DOUBLE_EQ(m.node(c).x, 0.5);
    EXPECT_DOUBLE_EQ(m.node(c).y, 0.5);
    EXPECT_EQ(m.interior_index(c), 0);
    EXPECT_EQ(m.interior_index(0), -1);
    // The centre touches six of the eight triangles on a one-diagonal mesh.
    EXPECT_EQ(m.incident_triangles(c).size(), 6u);
}

TEST(Mesh, AreasSumToOne)
{
    const Mesh m = build_structured_mesh(4);
    EXPECT_EQ(m.num_nodes(), 25u);
    EXPECT_EQ(m.num_triangles(), 32u);
    double total = 0.0;
    for (int t = 0; t < 32; ++t) {
        const Point a = m.node(m.triangle(t)[0]);
        const Point b = m.node(m.triangle(t)[1]);
        const Point c = m.node(m.triangle(t)[2]);
        // Shoelace formula, independent of element_geometry.
        total += 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
    }
    EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(Mesh, TrianglesAreCounterClockwise)
{
    const Mesh m = build_structured_mesh(5);
    for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
        EXPECT_GT(element_geometry(m, t).area, 0.0);
    }
}

TEST(Mesh, RejectsBadSubdivisions)
{
    EXPECT_THROW(build_structured_mesh(0), std::invalid_argument);
    EXPECT_THROW(build_structured_mesh(-3), std::invalid_argument);
    EXPECT_THROW(build_structured_mesh(kMaxSubdivisions + 1), std::invalid_argument);
}

TEST(Mesh, LastNodeIsExactlyOne)
{
    const Mesh m = build_structured_mesh(3);
    EXPECT_EQ(m.nodes().back().x, 1.0);
    EXPECT_EQ(m.nodes().back().y, 1.0);
}

TEST(Mesh, IncidenceMatchesTriangles)
{
    const Mesh m = build_structured_mesh(6);
    std::size_t total = 0;
    for (int v = 0; v < static_cast<int>(m.num_nodes()); ++v) {
        const auto inc = m.incident_triangles(v);
        total += inc.size();
        EXPECT_TRUE(std::is_sorted(inc.begin(), inc.end()));
        for (int t : inc) {
            const auto& tri = m.triangle(t);
            EXPECT_TRUE(tri[0] == v || tri[1] == v || tri[2] == v);
        }
    }
    EXPECT_EQ(total, 3 * m.num_triangles());
}

TEST(Mesh, LocateFindsContainingTriangle)
{
    const Mesh m = build_structured_mesh(4);
    const Point probes[] = {{0.1, 0.05}, {0.05, 0.1}, {0.9, 0.95}, {0.5, 0.5}, {1.0, 1.0}, {0.0, 0.0}, {0.3, 0.71}};
    for (const Point p : probes) {
        const int t = m.locate(p);
        const auto& tri = m.triangle(t);
        const Point a = m.node(tri[0]);
        const Point b = m.node(tri[1]);
        const Point c = m.node(tri[2]);
        auto cross = [](Point o, Point u, Point v) { return (u.x - o.x) * (v.y - o.y) - (v.x - o.x) * (u.y - o.y); };
        EXPECT_GE(cross(a, b, p), -1e-15);
        EXPECT_GE(cross(b, c, p), -1e-15);
        EXPECT_GE(cross(c, a, p), -1e-15);
    }
    EXPECT_THROW(m.locate({1.5, 0.5}), std::out_of_range);
    EXPECT_THROW(m.locate({0.5, -0.1}), std::out_of_range);
}

TEST(Geometry, RightTriangleGradients)
{
    const double h = 0.125;
    const ElementGeometry g = triangle_geometry({0, 0}, {h, 0}, {0, h});
    EXPECT_DOUBLE_EQ(g.area, h * h / 2);
    EXPECT_DOUBLE_EQ(g.grad[0].x, -1 / h);
    EXPECT_DOUBLE_EQ(g.grad[0].y, -1 / h);
    EXPECT_DOUBLE_EQ(g.grad[1].x, 1 / h);
    EXPECT_DOUBLE_EQ(g.grad[1].y, 0.0);
    EXPECT_DOUBLE_EQ(g.grad[2].x, 0.0);
    EXPECT_DOUBLE_EQ(g.grad[2].y, 1 / h);
}

TEST(Geometry, GradientsSumToZero)
{
    const ElementGeometry g = triangle_geometry({0.1, 0.2}, {0.9, 0.35}, {0.4, 0.8});
    EXPECT_NEAR(g.grad[0].x + g.grad[1].x + g.grad[2].x, 0.0, 1e-14);
    EXPECT_NEAR(g.grad[0].y + g.grad[1].y + g.grad[2].y, 0.0, 1e-14);
}

TEST(Geometry, TwoByTwoAreas)
{
    const Mesh m = build_structured_mesh(2);
    for (int t = 0; t < 8; ++t) {
        EXPECT_DOUBLE_EQ(element_geometry(m, t).area, 0.125);
    }
}

TEST(Geometry, RejectsDegenerateAndClockwise)
{
    EXPECT_THROW(triangle_geometry({0, 0}, {1, 1}, {2, 2}), std::domain_error);
    EXPECT_THROW(triangle_geometry({0, 0}, {0, 1}, {1, 0}), std::domain_error);
}
