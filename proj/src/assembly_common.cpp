#include <cmath>
#include <stdexcept>
#include <string>

#include "assembly_detail.hpp"
#include "natconv/assembly.hpp"

namespace natconv {

CoupledState::CoupledState(const Mesh& mesh)
    : psi(mesh)
    , theta(mesh)
{
}

CoupledState::CoupledState(Field psi_in, Field theta_in)
    : psi(std::move(psi_in))
    , theta(std::move(theta_in))
{
    if (psi.mesh().subdivisions() != theta.mesh().subdivisions()) {
        throw std::invalid_argument("CoupledState: psi and theta live on different meshes");
    }
}

void ProblemParams::validate() const
{
    if (!std::isfinite(rayleigh) || rayleigh < 0.0) {
        throw std::invalid_argument("ProblemParams: Rayleigh number must be finite and >= 0, got " +
                                    std::to_string(rayleigh));
    }
    if (!f1 || !f2) {
        throw std::invalid_argument("ProblemParams: source functions f1 and f2 must be set");
    }
}

std::vector<double> pack_interior(const CoupledState& state)
{
    const Mesh& mesh = state.mesh();
    const auto interior = mesh.interior_nodes();
    const std::size_t m = interior.size();
    std::vector<double> packed(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
        const auto node = static_cast<std::size_t>(interior[k]);
        packed[k] = state.psi[node];
        packed[m + k] = state.theta[node];
    }
    return packed;
}

CoupledState unpack_interior(const Mesh& mesh, std::span<const double> packed)
{
    const auto interior = mesh.interior_nodes();
    const std::size_t m = interior.size();
    if (packed.size() != 2 * m) {
        throw std::invalid_argument("unpack_interior: expected " + std::to_string(2 * m) + " entries, got " +
                                    std::to_string(packed.size()));
    }
    CoupledState state(mesh);
    for (std::size_t k = 0; k < m; ++k) {
        const auto node = static_cast<std::size_t>(interior[k]);
        state.psi[node] = packed[k];
        state.theta[node] = packed[m + k];
    }
    return state;
}

void subtract_interior(CoupledState& state, std::span<const double> w)
{
    const auto interior = state.mesh().interior_nodes();
    const std::size_t m = interior.size();
    if (w.size() != 2 * m) {
        throw std::invalid_argument("subtract_interior: correction has wrong size");
    }
    for (std::size_t k = 0; k < m; ++k) {
        const auto node = static_cast<std::size_t>(interior[k]);
        state.psi[node] -= w[k];
        state.theta[node] -= w[m + k];
    }
}

SparseMatrix interior_block(const SparseMatrix& nodal, const Mesh& mesh)
{
    std::vector<int> map(mesh.num_nodes());
    for (std::size_t i = 0; i < map.size(); ++i) {
        map[i] = mesh.interior_index(static_cast<int>(i));
    }
    return restrict_matrix(nodal, map, static_cast<int>(mesh.num_interior()));
}

namespace detail {

void check_state_mesh(const CoupledState& state, const Mesh& mesh)
{
    if (&state.mesh() != &mesh && state.mesh().subdivisions() != mesh.subdivisions()) {
        throw std::invalid_argument("state lives on an n=" + std::to_string(state.mesh().subdivisions()) +
                                    " mesh, assembly requested on n=" + std::to_string(mesh.subdivisions()));
    }
}

std::array<double, 3> local_load(const Mesh& mesh, int t, const ElementGeometry& g, const ScalarFunction& f,
                                 const QuadratureRule& rule)
{
    const Triangle& tri = mesh.triangle(t);
    const Point& a = mesh.node(tri[0]);
    const Point& b = mesh.node(tri[1]);
    const Point& c = mesh.node(tri[2]);
    std::array<double, 3> out{};
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Point p = barycentric_to_point(rule.points[q], a, b, c);
        const double wf = rule.weights[q] * g.area * f(p.x, p.y);
        for (std::size_t k = 0; k < 3; ++k) {
            out[k] += wf * rule.points[q][k];
        }
    }
    return out;
}

}  // namespace detail

}  // namespace natconv
