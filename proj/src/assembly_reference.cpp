#include <vector>

#include "assembly_detail.hpp"
#include "natconv/assembly.hpp"
#include "natconv/quadrature.hpp"

namespace natconv::reference {

namespace {

template <class LocalEntry>
SparseMatrix scatter_nodal(const Mesh& mesh, LocalEntry entry)
{
    std::vector<Triplet> triplets;
    triplets.reserve(9 * mesh.num_triangles());
    for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
        const ElementGeometry g = element_geometry(mesh, t);
        const Triangle& tri = mesh.triangle(t);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                triplets.push_back({tri[static_cast<std::size_t>(a)], tri[static_cast<std::size_t>(b)], entry(g, a, b)});
            }
        }
    }
    const int n = static_cast<int>(mesh.num_nodes());
    return SparseMatrix::from_triplets(n, n, triplets);
}

std::vector<double> interior_entries(const Mesh& mesh, const std::vector<double>& nodal)
{
    std::vector<double> out;
    out.reserve(mesh.num_interior());
    for (int node : mesh.interior_nodes()) {
        out.push_back(nodal[static_cast<std::size_t>(node)]);
    }
    return out;
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh)
{
    return scatter_nodal(mesh, [](const ElementGeometry& g, int a, int b) { return element::stiffness(g, a, b); });
}

SparseMatrix assemble_mass(const Mesh& mesh)
{
    return scatter_nodal(mesh, [](const ElementGeometry& g, int a, int b) { return element::mass(g, a, b); });
}

SparseMatrix assemble_convection(const Mesh& mesh)
{
    return scatter_nodal(mesh, [](const ElementGeometry& g, int a, int b) { return element::convection(g, a, b); });
}

std::vector<double> assemble_load(const Mesh& mesh, const ScalarFunction& f, int degree)
{
    const QuadratureRule& rule = quadrature_rule(degree);
    std::vector<double> load(mesh.num_nodes(), 0.0);
    for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
        const ElementGeometry g = element_geometry(mesh, t);
        const auto local = detail::local_load(mesh, t, g, f, rule);
        const Triangle& tri = mesh.triangle(t);
        for (std::size_t a = 0; a < 3; ++a) {
            load[static_cast<std::size_t>(tri[a])] += local[a];
        }
    }
    return load;
}

SourceLoads assemble_source_loads(const ProblemParams& params, const Mesh& mesh)
{
    params.validate();
    return {interior_entries(mesh, reference::assemble_load(mesh, params.f1)),
            interior_entries(mesh, reference::assemble_load(mesh, params.f2))};
}

std::vector<double> assemble_residual(const CoupledState& state, const ProblemParams& params, const Mesh& mesh)
{
    detail::check_state_mesh(state, mesh);
    return reference::assemble_residual(state, params.rayleigh, reference::assemble_source_loads(params, mesh), mesh);
}

std::vector<double> assemble_residual(const CoupledState& state, double rayleigh, const SourceLoads& loads,
                                      const Mesh& mesh)
{
    detail::check_state_mesh(state, mesh);
    std::vector<double> r_psi(mesh.num_nodes(), 0.0);
    std::vector<double> r_theta(mesh.num_nodes(), 0.0);
    for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
        const ElementGeometry g = element_geometry(mesh, t);
        const Triangle& tri = mesh.triangle(t);
        const Vec2 gp = state.psi.gradient_on(t);
        const Vec2 gt = state.theta.gradient_on(t);
        const double jac = element::jacobian_determinant(gp, gt);
        const double phi_int = element::basis_integral(g);
        for (int a = 0; a < 3; ++a) {
            double kp = 0.0;
            double kt = 0.0;
            for (int b = 0; b < 3; ++b) {
                const auto nb = static_cast<std::size_t>(tri[static_cast<std::size_t>(b)]);
                kp += element::stiffness(g, a, b) * state.psi[nb];
                kt += element::stiffness(g, a, b) * state.theta[nb];
            }
            const auto na = static_cast<std::size_t>(tri[static_cast<std::size_t>(a)]);
            r_psi[na] += kp - rayleigh * gt.x * phi_int;
            r_theta[na] += kt + jac * phi_int;
        }
    }

    const std::size_t m = mesh.num_interior();
    std::vector<double> r(2 * m);
    const auto interior = mesh.interior_nodes();
    for (std::size_t k = 0; k < m; ++k) {
        const auto node = static_cast<std::size_t>(interior[k]);
        r[k] = r_psi[node] - loads.f1[k];
        r[m + k] = r_theta[node] - loads.f2[k];
    }
    return r;
}

SparseMatrix assemble_tangent(const CoupledState& state, const ProblemParams& params, const Mesh& mesh)
{
    params.validate();
    return reference::assemble_tangent(state, params.rayleigh, mesh);
}

SparseMatrix assemble_tangent(const CoupledState& state, double rayleigh, const Mesh& mesh)
{
    detail::check_state_mesh(state, mesh);
    const int m = static_cast<int>(mesh.num_interior());
    std::vector<Triplet> triplets;
    triplets.reserve(36 * mesh.num_triangles());
    for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
        const ElementGeometry g = element_geometry(mesh, t);
        const Triangle& tri = mesh.triangle(t);
        const Vec2 gp = state.psi.gradient_on(t);
        const Vec2 gt = state.theta.gradient_on(t);
        for (int a = 0; a < 3; ++a) {
            const int ia = mesh.interior_index(tri[static_cast<std::size_t>(a)]);
            if (ia < 0) {
                continue;
            }
            for (int b = 0; b < 3; ++b) {
                const int ib = mesh.interior_index(tri[static_cast<std::size_t>(b)]);
                if (ib < 0) {
                    continue;
                }
                const double k = element::stiffness(g, a, b);
                triplets.push_back({ia, ib, k});
                triplets.push_back({ia, m + ib, -rayleigh * element::convection(g, a, b)});
                triplets.push_back({m + ia, ib, element::jterm_dpsi(g, gt, a, b)});
                triplets.push_back({m + ia, m + ib, k + element::jterm_dtheta(g, gp, a, b)});
            }
        }
    }
    return SparseMatrix::from_triplets(2 * m, 2 * m, triplets);
}

}  // namespace natconv::reference
