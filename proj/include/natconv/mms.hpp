#pragma once

#include <utility>

#include "natconv/assembly.hpp"
#include "natconv/field.hpp"

namespace natconv {

/// Closed-form exact pair together with the hand-derived second derivatives
/// needed to build compatible sources.
struct ExactSolution {
    ScalarFunction psi;
    ScalarFunction theta;
    GradientFunction psi_grad;
    GradientFunction theta_grad;
    ScalarFunction psi_laplacian;
    ScalarFunction theta_laplacian;

    /// f1 = -lap(psi) - Ra theta_x,  f2 = J(psi, theta) - lap(theta).
    std::pair<ScalarFunction, ScalarFunction> sources(double rayleigh) const;
    /// ProblemParams with these sources, scaled by source_scale.
    ProblemParams problem(double rayleigh, double source_scale = 1.0) const;
};

/// psi = 2 x^2 (x-1)^2 y (y-1)(2y-1),  theta = -2 y^2 (y-1)^2 x (x-1)(2x-1).
/// Both vanish on the boundary of the unit square.
const ExactSolution& convection_benchmark();

/// Same psi with theta = 0. With Ra = 0 the sources reduce to f1 = -lap(psi),
/// f2 = 0 and the discrete problem is a Poisson solve for psi.
const ExactSolution& decoupled_benchmark();

struct ExactValues {
    double psi = 0.0;
    double theta = 0.0;
};

ExactValues mms_exact(double x, double y);
std::pair<ScalarFunction, ScalarFunction> mms_sources(double rayleigh);

/// L2 norm of (field - exact) with the degree-6 rule.
double error_l2(const Field& field, const ScalarFunction& exact, const Mesh& mesh);
/// H1 seminorm of (field - exact), field gradient constant per triangle.
double error_h1_semi(const Field& field, const GradientFunction& exact_grad, const Mesh& mesh);

/// L2 norm of a continuous function over the unit square, degree-6 rule on mesh.
double function_l2(const ScalarFunction& f, const Mesh& mesh);
/// ||grad f||_2 of a P1 field (exact).
double field_h1_semi(const Field& field);

}  // namespace natconv
