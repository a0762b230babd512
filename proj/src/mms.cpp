#include "natconv/mms.hpp"

#include <cmath>

#include "natconv/quadrature.hpp"

namespace natconv {

namespace {

// psi = 2 a(x) b(y), theta = -2 a(y) b(x) with
//   a(s) = s^2 (s-1)^2,  b(s) = s (s-1)(2s-1).
double a0(double s) { return s * s * (s - 1.0) * (s - 1.0); }
double a1(double s) { return 4.0 * s * s * s - 6.0 * s * s + 2.0 * s; }
double a2(double s) { return 12.0 * s * s - 12.0 * s + 2.0; }
double b0(double s) { return s * (s - 1.0) * (2.0 * s - 1.0); }
double b1(double s) { return 6.0 * s * s - 6.0 * s + 1.0; }
double b2(double s) { return 12.0 * s - 6.0; }

ExactSolution make_benchmark()
{
    ExactSolution e;
    e.psi = [](double x, double y) { return 2.0 * a0(x) * b0(y); };
    e.theta = [](double x, double y) { return -2.0 * a0(y) * b0(x); };
    e.psi_grad = [](double x, double y) { return Vec2{2.0 * a1(x) * b0(y), 2.0 * a0(x) * b1(y)}; };
    e.theta_grad = [](double x, double y) { return Vec2{-2.0 * a0(y) * b1(x), -2.0 * a1(y) * b0(x)}; };
    e.psi_laplacian = [](double x, double y) { return 2.0 * (a2(x) * b0(y) + a0(x) * b2(y)); };
    e.theta_laplacian = [](double x, double y) { return -2.0 * (a0(y) * b2(x) + a2(y) * b0(x)); };
    return e;
}

ExactSolution make_decoupled()
{
    ExactSolution e = make_benchmark();
    e.theta = [](double, double) { return 0.0; };
    e.theta_grad = [](double, double) { return Vec2{}; };
    e.theta_laplacian = [](double, double) { return 0.0; };
    return e;
}

}  // namespace

std::pair<ScalarFunction, ScalarFunction> ExactSolution::sources(double rayleigh) const
{
    ScalarFunction f1 = [lap = psi_laplacian, tg = theta_grad, rayleigh](double x, double y) {
        return -lap(x, y) - rayleigh * tg(x, y).x;
    };
    ScalarFunction f2 = [pg = psi_grad, tg = theta_grad, lap = theta_laplacian](double x, double y) {
        const Vec2 gp = pg(x, y);
        const Vec2 gt = tg(x, y);
        return gp.x * gt.y - gp.y * gt.x - lap(x, y);
    };
    return {std::move(f1), std::move(f2)};
}

ProblemParams ExactSolution::problem(double rayleigh, double source_scale) const
{
    auto [f1, f2] = sources(rayleigh);
    ProblemParams p;
    p.rayleigh = rayleigh;
    if (source_scale == 1.0) {
        p.f1 = std::move(f1);
        p.f2 = std::move(f2);
    } else {
        p.f1 = [f = std::move(f1), source_scale](double x, double y) { return source_scale * f(x, y); };
        p.f2 = [f = std::move(f2), source_scale](double x, double y) { return source_scale * f(x, y); };
    }
    return p;
}

const ExactSolution& convection_benchmark()
{
    static const ExactSolution e = make_benchmark();
    return e;
}

const ExactSolution& decoupled_benchmark()
{
    static const ExactSolution e = make_decoupled();
    return e;
}

ExactValues mms_exact(double x, double y)
{
    const auto& e = convection_benchmark();
    return {e.psi(x, y), e.theta(x, y)};
}

std::pair<ScalarFunction, ScalarFunction> mms_sources(double rayleigh)
{
    return convection_benchmark().sources(rayleigh);
}

double error_l2(const Field& field, const ScalarFunction& exact, const Mesh& mesh)
{
    const QuadratureRule& rule = quadrature_rule(6);
    double sum = 0.0;
    for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
        const ElementGeometry g = element_geometry(mesh, t);
        const Triangle& tri = mesh.triangle(t);
        const Point& a = mesh.node(tri[0]);
        const Point& b = mesh.node(tri[1]);
        const Point& c = mesh.node(tri[2]);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& l = rule.points[q];
            const Point p = barycentric_to_point(l, a, b, c);
            const double uh = l[0] * field[static_cast<std::size_t>(tri[0])] +
                              l[1] * field[static_cast<std::size_t>(tri[1])] +
                              l[2] * field[static_cast<std::size_t>(tri[2])];
            const double d = uh - exact(p.x, p.y);
            sum += rule.weights[q] * g.area * d * d;
        }
    }
    return std::sqrt(sum);
}

double error_h1_semi(const Field& field, const GradientFunction& exact_grad, const Mesh& mesh)
{
    const QuadratureRule& rule = quadrature_rule(6);
    double sum = 0.0;
    for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
        const ElementGeometry g = element_geometry(mesh, t);
        const Triangle& tri = mesh.triangle(t);
        const Vec2 gh = field.gradient_on(t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Point p = barycentric_to_point(rule.points[q], mesh.node(tri[0]), mesh.node(tri[1]), mesh.node(tri[2]));
            const Vec2 ge = exact_grad(p.x, p.y);
            const double dx = gh.x - ge.x;
            const double dy = gh.y - ge.y;
            sum += rule.weights[q] * g.area * (dx * dx + dy * dy);
        }
    }
    return std::sqrt(sum);
}

double function_l2(const ScalarFunction& f, const Mesh& mesh)
{
    return error_l2(Field(mesh), f, mesh);
}

double field_h1_semi(const Field& field)
{
    const Mesh& mesh = field.mesh();
    double sum = 0.0;
    for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
        const Vec2 gh = field.gradient_on(t);
        sum += element_geometry(mesh, t).area * (gh.x * gh.x + gh.y * gh.y);
    }
    return std::sqrt(sum);
}

}  // namespace natconv
