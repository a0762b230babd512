#pragma once

#include <array>

#include "natconv/assembly.hpp"
#include "natconv/quadrature.hpp"

namespace natconv::detail {

/// Throws std::invalid_argument when state and mesh disagree on the grid.
void check_state_mesh(const CoupledState& state, const Mesh& mesh);

/// Integrals of f * phi_a over triangle t for a = 0, 1, 2.
std::array<double, 3> local_load(const Mesh& mesh, int t, const ElementGeometry& g, const ScalarFunction& f,
                                 const QuadratureRule& rule);

inline int local_index(const Triangle& tri, int node)
{
    return tri[0] == node ? 0 : (tri[1] == node ? 1 : 2);
}

}  // namespace natconv::detail
