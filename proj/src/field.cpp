#include "natconv/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace natconv {

Field::Field(const Mesh& mesh)
    : mesh_(&mesh)
    , coefficients_(mesh.num_nodes(), 0.0)
{
}

Field::Field(const Mesh& mesh, std::vector<double> coefficients)
    : mesh_(&mesh)
    , coefficients_(std::move(coefficients))
{
    if (coefficients_.size() != mesh.num_nodes()) {
        throw std::invalid_argument("Field: " + std::to_string(coefficients_.size()) +
                                    " coefficients for a mesh with " + std::to_string(mesh.num_nodes()) +
                                    " nodes");
    }
}

bool Field::boundary_is_zero() const
{
    for (std::size_t i = 0; i < coefficients_.size(); ++i) {
        if (mesh_->is_boundary(static_cast<int>(i)) && coefficients_[i] != 0.0) {
            return false;
        }
    }
    return true;
}

Vec2 Field::gradient_on(int t) const
{
    const ElementGeometry g = element_geometry(*mesh_, t);
    const Triangle& tri = mesh_->triangle(t);
    Vec2 out;
    for (int a = 0; a < 3; ++a) {
        const double c = coefficients_[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])];
        out.x += c * g.grad[static_cast<std::size_t>(a)].x;
        out.y += c * g.grad[static_cast<std::size_t>(a)].y;
    }
    return out;
}

Field interpolate_nodal(const ScalarFunction& f, const Mesh& mesh)
{
    std::vector<double> values(mesh.num_nodes());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Point& p = mesh.nodes()[i];
        values[i] = f(p.x, p.y);
        if (!std::isfinite(values[i])) {
            throw std::domain_error("interpolate_nodal: non-finite value at node " + std::to_string(i) + " (" +
                                    std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
        }
    }
    return Field(mesh, std::move(values));
}

double evaluate_field(const Field& field, Point p)
{
    const Mesh& mesh = field.mesh();
    const int t = mesh.locate(p);
    const Triangle& tri = mesh.triangle(t);
    const Point& a = mesh.node(tri[0]);
    const Point& b = mesh.node(tri[1]);
    const Point& c = mesh.node(tri[2]);

    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
    const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
    const double l0 = 1.0 - l1 - l2;

    // Exact at vertices, where the barycentric weights are 0/1 exactly.
    return l0 * field[static_cast<std::size_t>(tri[0])] + l1 * field[static_cast<std::size_t>(tri[1])] +
           l2 * field[static_cast<std::size_t>(tri[2])];
}

}  // namespace natconv
