#pragma once

#include <array>
#include <span>
#include <vector>

#include "natconv/field.hpp"
#include "natconv/mesh.hpp"
#include "natconv/sparse_matrix.hpp"

namespace natconv {

/// Discrete unknown u = (psi_h, theta_h) on one mesh.
struct CoupledState {
    Field psi;
    Field theta;

    /// Zero state.
    explicit CoupledState(const Mesh& mesh);
    /// Throws std::invalid_argument if the fields live on different meshes.
    CoupledState(Field psi, Field theta);

    const Mesh& mesh() const { return psi.mesh(); }
    bool boundary_is_zero() const { return psi.boundary_is_zero() && theta.boundary_is_zero(); }
};

/// Rayleigh number and source terms of
///   -lap(psi) - Ra d(theta)/dx = f1,   J(psi, theta) = lap(theta) + f2.
struct ProblemParams {
    double rayleigh = 0.0;
    ScalarFunction f1;
    ScalarFunction f2;

    /// Throws std::invalid_argument for negative or non-finite Ra, or missing sources.
    void validate() const;
};

/// Interior test-function integrals of the sources, psi block then theta block.
struct SourceLoads {
    std::vector<double> f1;
    std::vector<double> f2;
};

/// Stacked interior coefficients: all psi unknowns, then all theta unknowns.
std::vector<double> pack_interior(const CoupledState& state);
/// Inverse of pack_interior; boundary coefficients are zero.
CoupledState unpack_interior(const Mesh& mesh, std::span<const double> packed);
/// state -= w on interior unknowns; boundary coefficients are untouched.
void subtract_interior(CoupledState& state, std::span<const double> w);

/// Element-level forms shared by the parallel and reference assemblers.
/// Local indices a, b refer to the triangle's vertex order.
namespace element {

inline double stiffness(const ElementGeometry& g, int a, int b)
{
    const Vec2& ga = g.grad[static_cast<std::size_t>(a)];
    const Vec2& gb = g.grad[static_cast<std::size_t>(b)];
    return g.area * (ga.x * gb.x + ga.y * gb.y);
}

inline double mass(const ElementGeometry& g, int a, int b)
{
    return g.area / 12.0 * (a == b ? 2.0 : 1.0);
}

/// Integral of a P1 basis function over the triangle. Every integrand of the
/// form (constant) * phi_a is integrated exactly by this.
inline double basis_integral(const ElementGeometry& g) { return g.area / 3.0; }

/// Integral of d(phi_b)/dx * phi_a.
inline double convection(const ElementGeometry& g, int /*a*/, int b)
{
    return g.grad[static_cast<std::size_t>(b)].x * basis_integral(g);
}

/// J(psi, theta) = psi_x theta_y - psi_y theta_x.
inline double jacobian_determinant(Vec2 grad_psi, Vec2 grad_theta)
{
    return grad_psi.x * grad_theta.y - grad_psi.y * grad_theta.x;
}

/// Derivative of the J-term test integral in the psi direction phi_b, at fixed theta.
inline double jterm_dpsi(const ElementGeometry& g, Vec2 grad_theta, int /*a*/, int b)
{
    return jacobian_determinant(g.grad[static_cast<std::size_t>(b)], grad_theta) * basis_integral(g);
}

/// Derivative of the J-term test integral in the theta direction phi_b, at fixed psi.
inline double jterm_dtheta(const ElementGeometry& g, Vec2 grad_psi, int /*a*/, int b)
{
    return jacobian_determinant(grad_psi, g.grad[static_cast<std::size_t>(b)]) * basis_integral(g);
}

}  // namespace element

/// K_ij = integral of grad(phi_i) . grad(phi_j) over all nodes.
SparseMatrix assemble_stiffness(const Mesh& mesh);
/// M_ij = integral of phi_i phi_j over all nodes.
SparseMatrix assemble_mass(const Mesh& mesh);
/// C_ij = integral of d(phi_j)/dx phi_i over all nodes.
SparseMatrix assemble_convection(const Mesh& mesh);
/// b_i = integral of f phi_i over all nodes, with the given quadrature degree.
std::vector<double> assemble_load(const Mesh& mesh, const ScalarFunction& f, int degree = 6);

/// Rows and columns of a nodal matrix restricted to interior nodes.
SparseMatrix interior_block(const SparseMatrix& nodal, const Mesh& mesh);

SourceLoads assemble_source_loads(const ProblemParams& params, const Mesh& mesh);

/// F(u) tested against every interior basis function, psi block then theta block.
std::vector<double> assemble_residual(const CoupledState& state, const ProblemParams& params, const Mesh& mesh);
/// Same, with source loads precomputed (as the Newton loop does).
std::vector<double> assemble_residual(const CoupledState& state, double rayleigh, const SourceLoads& loads,
                                      const Mesh& mesh);

/// Newton tangent DF(u) on interior unknowns, as a 2x2 block matrix:
///   [ K                      -Ra C              ]
///   [ dJ/dpsi (at theta)     K + dJ/dtheta (psi) ]
SparseMatrix assemble_tangent(const CoupledState& state, const ProblemParams& params, const Mesh& mesh);
SparseMatrix assemble_tangent(const CoupledState& state, double rayleigh, const Mesh& mesh);

/// Single-threaded element-scatter versions of the assemblers above. Kept as
/// the reproducibility baseline and as a cross-check for the parallel path.
namespace reference {

SparseMatrix assemble_stiffness(const Mesh& mesh);
SparseMatrix assemble_mass(const Mesh& mesh);
SparseMatrix assemble_convection(const Mesh& mesh);
std::vector<double> assemble_load(const Mesh& mesh, const ScalarFunction& f, int degree = 6);
SourceLoads assemble_source_loads(const ProblemParams& params, const Mesh& mesh);
std::vector<double> assemble_residual(const CoupledState& state, const ProblemParams& params, const Mesh& mesh);
std::vector<double> assemble_residual(const CoupledState& state, double rayleigh, const SourceLoads& loads,
                                      const Mesh& mesh);
SparseMatrix assemble_tangent(const CoupledState& state, const ProblemParams& params, const Mesh& mesh);
SparseMatrix assemble_tangent(const CoupledState& state, double rayleigh, const Mesh& mesh);

}  // namespace reference

}  // namespace natconv
