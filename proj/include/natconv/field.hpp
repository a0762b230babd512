#pragma once

#include <functional>
#include <span>
#include <vector>

#include "natconv/mesh.hpp"

namespace natconv {

using ScalarFunction = std::function<double(double x, double y)>;
using GradientFunction = std::function<Vec2(double x, double y)>;

/// Continuous P1 function given by one coefficient per mesh node.
///
/// Holds a non-owning reference to its mesh; the mesh must outlive the field.
class Field {
public:
    /// Zero field.
    explicit Field(const Mesh& mesh);
    /// Throws std::invalid_argument if the coefficient count differs from the node count.
    Field(const Mesh& mesh, std::vector<double> coefficients);

    const Mesh& mesh() const { return *mesh_; }
    std::span<const double> coefficients() const { return coefficients_; }
    std::span<double> coefficients() { return coefficients_; }
    std::size_t size() const { return coefficients_.size(); }

    double operator[](std::size_t i) const { return coefficients_[i]; }
    double& operator[](std::size_t i) { return coefficients_[i]; }

    /// True iff every boundary coefficient is exactly zero.
    bool boundary_is_zero() const;

    /// Constant gradient of the field on triangle t.
    Vec2 gradient_on(int t) const;

private:
    const Mesh* mesh_;
    std::vector<double> coefficients_;
};

/// Nodal interpolant: coefficient i = f(node i). Throws std::domain_error when
/// f is not finite at some node.
Field interpolate_nodal(const ScalarFunction& f, const Mesh& mesh);

/// Value of the P1 field at p. Throws std::out_of_range outside the unit square.
double evaluate_field(const Field& field, Point p);

}  // namespace natconv
