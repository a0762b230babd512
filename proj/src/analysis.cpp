#include "natconv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "natconv/linear_solver.hpp"
#include "natconv/quadrature.hpp"

namespace natconv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

Field difference(const Field& a, const Field& b)
{
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = a[i] - b[i];
    }
    return Field(a.mesh(), std::move(d));
}

void validate_levels(std::span<const int> levels)
{
    if (levels.size() < 3) {
        throw std::invalid_argument("convergence_study: at least three levels are required");
    }
    if (levels.front() < 2) {
        throw std::invalid_argument("convergence_study: the coarsest level needs n >= 2");
    }
    for (std::size_t k = 1; k < levels.size(); ++k) {
        if (levels[k] != 2 * levels[k - 1]) {
            throw std::invalid_argument("convergence_study: each level must double the previous one");
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> empirical_rates(std::span<const double> errors)
{
    std::vector<double> rates;
    for (std::size_t k = 1; k < errors.size(); ++k) {
        if (errors[k - 1] > 0.0 && errors[k] > 0.0) {
            rates.push_back(std::log2(errors[k - 1] / errors[k]));
        } else {
            rates.push_back(kNaN);
        }
    }
    return rates;
}

std::vector<double> RateTable::rates(double RateRow::*column) const
{
    std::vector<double> e;
    e.reserve(rows.size());
    for (const auto& r : rows) {
        e.push_back(r.*column);
    }
    return empirical_rates(e);
}

StudyError::StudyError(const std::string& what, RateTable partial)
    : std::runtime_error(what)
    , partial_(std::move(partial))
{
}

RateTable convergence_study(std::span<const int> levels, double rayleigh, const NewtonConfig& config,
                            const ExactSolution& exact)
{
    validate_levels(levels);
    const ProblemParams params = exact.problem(rayleigh);

    RateTable table;
    for (int n : levels) {
        const Mesh mesh = build_structured_mesh(n);
        NewtonResult solved = newton_solve(CoupledState(mesh), params, mesh, config);
        if (!solved.report.converged) {
            std::string reason = solved.report.diverged() ? solved.report.divergence_reason
                                                          : "iteration limit reached";
            throw StudyError("convergence_study: Newton failed at n=" + std::to_string(n) + ": " + reason, table);
        }
        const Field psi_interp = interpolate_nodal(exact.psi, mesh);
        const Field theta_interp = interpolate_nodal(exact.theta, mesh);

        RateRow row;
        row.n = n;
        row.h = mesh.h();
        row.l2_psi = error_l2(solved.state.psi, exact.psi, mesh);
        row.h1_psi = error_h1_semi(solved.state.psi, exact.psi_grad, mesh);
        row.l2_theta = error_l2(solved.state.theta, exact.theta, mesh);
        row.h1_theta = error_h1_semi(solved.state.theta, exact.theta_grad, mesh);
        row.newton_iterations = solved.report.iterations();
        row.h1_interp_psi = field_h1_semi(difference(psi_interp, solved.state.psi));
        row.h1_interp_theta = field_h1_semi(difference(theta_interp, solved.state.theta));
        table.rows.push_back(row);
    }
    return table;
}

std::string to_csv(const RateTable& table)
{
    const auto r_l2p = table.rates(&RateRow::l2_psi);
    const auto r_h1p = table.rates(&RateRow::h1_psi);
    const auto r_l2t = table.rates(&RateRow::l2_theta);
    const auto r_h1t = table.rates(&RateRow::h1_theta);
    std::ostringstream os;
    os << "n,h,l2_psi,h1_psi,l2_theta,h1_theta,newton_iterations,h1_interp_psi,h1_interp_theta,"
          "rate_l2_psi,rate_h1_psi,rate_l2_theta,rate_h1_theta\n";
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const RateRow& r = table.rows[k];
        os << r.n << ',' << fmt(r.h) << ',' << fmt(r.l2_psi) << ',' << fmt(r.h1_psi) << ',' << fmt(r.l2_theta)
           << ',' << fmt(r.h1_theta) << ',' << r.newton_iterations << ',' << fmt(r.h1_interp_psi) << ','
           << fmt(r.h1_interp_theta);
        if (k == 0) {
            os << ",,,,\n";
        } else {
            os << ',' << fmt(r_l2p[k - 1]) << ',' << fmt(r_h1p[k - 1]) << ',' << fmt(r_l2t[k - 1]) << ','
               << fmt(r_h1t[k - 1]) << '\n';
        }
    }
    return os.str();
}

std::string to_text(const RateTable& table)
{
    const auto r_h1p = table.rates(&RateRow::h1_psi);
    const auto r_h1t = table.rates(&RateRow::h1_theta);
    const auto r_l2p = table.rates(&RateRow::l2_psi);
    const auto r_l2t = table.rates(&RateRow::l2_theta);
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%6s %12s %12s %6s %12s %12s %6s %6s %6s\n", "n", "H1 psi", "H1 theta", "rate",
                  "L2 psi", "L2 theta", "rate", "rate", "iters");
    os << line;
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const RateRow& r = table.rows[k];
        const double a = k ? r_h1p[k - 1] : kNaN;
        const double b = k ? r_h1t[k - 1] : kNaN;
        const double c = k ? r_l2p[k - 1] : kNaN;
        const double d = k ? r_l2t[k - 1] : kNaN;
        std::snprintf(line, sizeof line, "%6d %12.4e %12.4e %6.3f %12.4e %12.4e %6.3f %6.3f %6d   (theta H1 %.3f)\n",
                      r.n, r.h1_psi, r.h1_theta, a, r.l2_psi, r.l2_theta, c, d, r.newton_iterations, b);
        os << line;
    }
    return os.str();
}

// ---------------------------------------------------------------------------

double smallest_eigenvalue(const Mesh& mesh)
{
    if (mesh.num_interior() == 0) {
        throw std::invalid_argument("smallest_eigenvalue: mesh has no interior nodes");
    }
    const SparseMatrix k = interior_block(assemble_stiffness(mesh), mesh);
    const SparseMatrix m = interior_block(assemble_mass(mesh), mesh);

    auto m_norm = [&](const std::vector<double>& v) {
        const auto mv = spmv(m, v);
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += v[i] * mv[i];
        }
        return std::sqrt(s);
    };
    auto rayleigh_quotient = [&](const std::vector<double>& v) {
        const auto kv = spmv(k, v);
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += v[i] * kv[i];
        }
        return s;
    };

    // The all-ones start vector overlaps the positive ground mode.
    std::vector<double> v(mesh.num_interior(), 1.0);
    double scale = m_norm(v);
    for (double& x : v) {
        x /= scale;
    }
    double lambda = rayleigh_quotient(v);

    LinearSolveOptions cg;
    cg.method = SolveMethod::cg;
    cg.tolerance = 1e-13;
    constexpr int kMaxIterations = 500;
    for (int it = 0; it < kMaxIterations; ++it) {
        std::vector<double> y = solve_linear(k, spmv(m, v), cg).x;
        scale = m_norm(y);
        for (std::size_t i = 0; i < y.size(); ++i) {
            v[i] = y[i] / scale;
        }
        const double next = rayleigh_quotient(v);
        if (std::abs(next - lambda) <= 1e-13 * next) {
            return next;
        }
        lambda = next;
    }
    throw std::runtime_error("smallest_eigenvalue: inverse iteration did not converge in " +
                             std::to_string(kMaxIterations) + " steps");
}

double poincare_estimate(const Mesh& mesh)
{
    return 1.0 / std::sqrt(smallest_eigenvalue(mesh));
}

// ---------------------------------------------------------------------------

TheoremDiagnostics evaluate_theorem_conditions(const TheoremInputs& in)
{
    const double c = in.poincare;
    const double ra = in.rayleigh;
    const double al = in.sobolev * in.data_bound;
    const double sqrt2 = std::numbers::sqrt2;

    TheoremDiagnostics d;
    d.inputs = in;
    d.b = std::min(1.0 - c * ra / 2.0 - al, 0.5 - ra / 2.0 - al);
    d.b_positive = d.b > 0.0;
    d.notes.push_back("R^2 = C^2 (||f1||^2 + ||f2||^2) / (2B); the existence argument also writes it as "
                      "(C^2 ||f1||^2 + ||f2||^2) / (2B), the symmetric form is used here");
    if (!d.b_positive) {
        d.uniqueness_psi = d.uniqueness_theta = kNaN;
        d.uniqueness_alt_psi = d.uniqueness_alt_theta = kNaN;
        d.stability_psi = d.stability_theta = d.stability_constant = kNaN;
        d.notes.push_back("B <= 0: radius R undefined, uniqueness and stability conditions not evaluated");
        return d;
    }

    const double r2 = c * c * (in.f1_norm * in.f1_norm + in.f2_norm * in.f2_norm) / (2.0 * d.b);
    const double r = std::sqrt(r2);
    d.r_squared = r2;

    d.uniqueness_psi = 0.5 - c * r / sqrt2 - c * ra / 2.0;
    d.uniqueness_theta = 0.5 - ra / 2.0 - 2.0 * sqrt2 * r * c;
    d.uniqueness_holds = d.uniqueness_psi > 0.0 && d.uniqueness_theta > 0.0;

    d.uniqueness_alt_psi = 1.0 - c * r / sqrt2 - c * ra / 2.0;
    d.uniqueness_alt_theta = 1.0 - ra / 2.0 - 2.0 * sqrt2 * r * c;
    d.uniqueness_alt_holds = d.uniqueness_alt_psi > 0.0 && d.uniqueness_alt_theta > 0.0;

    d.stability_psi = 0.5 - c * r / (2.0 * sqrt2) - c * ra / 2.0;
    d.stability_theta = 0.5 - ra / 2.0 - 3.0 / (2.0 * sqrt2) * r * c;
    d.stability_constant = std::min(d.stability_psi, d.stability_theta);
    d.stability_holds = d.stability_constant > 0.0;
    return d;
}

double measure_data_bound(const Field& theta)
{
    const Mesh& mesh = theta.mesh();
    double sx = 0.0;
    double sy = 0.0;
    for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
        const Vec2 g = theta.gradient_on(t);
        const double area = element_geometry(mesh, t).area;
        sx += area * std::pow(g.x, 4);
        sy += area * std::pow(g.y, 4);
    }
    return std::max(std::pow(sx, 0.25), std::pow(sy, 0.25));
}

TheoremDiagnostics theorem_diagnostics(const ProblemParams& params, const CoupledState& solved, const Mesh& mesh,
                                       const DiagnosticsOptions& options)
{
    params.validate();
    TheoremInputs in;
    in.rayleigh = params.rayleigh;
    in.poincare = options.poincare ? *options.poincare : poincare_estimate(mesh);
    in.sobolev = options.sobolev;
    in.data_bound = options.data_bound ? *options.data_bound : measure_data_bound(solved.theta);
    in.f1_norm = function_l2(params.f1, mesh);
    in.f2_norm = function_l2(params.f2, mesh);

    TheoremDiagnostics d = evaluate_theorem_conditions(in);
    d.data_bound_measured = !options.data_bound.has_value();

    const double gp = field_h1_semi(solved.psi);
    const double gt = field_h1_semi(solved.theta);
    d.energy = gp * gp + gt * gt;
    if (d.r_squared) {
        d.apriori_checked = true;
        // Slack for round-off in the zero-data case, where both sides vanish.
        d.apriori_holds = d.energy <= *d.r_squared * (1.0 + 1e-12) + 1e-300;
    }
    if (d.stability_holds) {
        const double c = in.poincare;
        const double data = c * c * (in.f1_norm * in.f1_norm + in.f2_norm * in.f2_norm);
        d.stability_ratio = data > 0.0 ? d.energy * 2.0 * d.stability_constant / data : 0.0;
    }

    const QuadratureRule& rule = quadrature_rule(6);
    d.f2_min = std::numeric_limits<double>::infinity();
    for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
        const Triangle& tri = mesh.triangle(t);
        for (const auto& l : rule.points) {
            const Point p = barycentric_to_point(l, mesh.node(tri[0]), mesh.node(tri[1]), mesh.node(tri[2]));
            d.f2_min = std::min(d.f2_min, params.f2(p.x, p.y));
        }
    }
    d.f2_positive = d.f2_min > 0.0;
    if (!d.f2_positive) {
        d.notes.push_back("f2 is not strictly positive on the domain (hypothesis of the existence result; "
                          "the solver does not require it)");
    }
    return d;
}

std::string to_text(const TheoremDiagnostics& d)
{
    auto flag = [](bool b) { return b ? "yes" : "no"; };
    std::ostringstream os;
    os << "Rayleigh number Ra            " << fmt(d.inputs.rayleigh) << '\n'
       << "Poincare constant C           " << fmt(d.inputs.poincare) << '\n'
       << "Sobolev constant A            " << fmt(d.inputs.sobolev) << '\n'
       << "data bound L                  " << fmt(d.inputs.data_bound)
       << (d.data_bound_measured ? "  (measured from theta_h)" : "  (supplied)") << '\n'
       << "||f1||_2                      " << fmt(d.inputs.f1_norm) << '\n'
       << "||f2||_2                      " << fmt(d.inputs.f2_norm) << '\n'
       << "B                             " << fmt(d.b) << "  positive: " << flag(d.b_positive) << '\n';
    if (d.r_squared) {
        os << "R^2                           " << fmt(*d.r_squared) << '\n';
    } else {
        os << "R^2                           undefined (B <= 0)\n";
    }
    os << "uniqueness (theorem form)     " << fmt(d.uniqueness_psi) << ", " << fmt(d.uniqueness_theta)
       << "  holds: " << flag(d.uniqueness_holds) << '\n'
       << "uniqueness (lemma form)       " << fmt(d.uniqueness_alt_psi) << ", " << fmt(d.uniqueness_alt_theta)
       << "  holds: " << flag(d.uniqueness_alt_holds) << '\n'
       << "stability conditions          " << fmt(d.stability_psi) << ", " << fmt(d.stability_theta)
       << "  holds: " << flag(d.stability_holds) << '\n'
       << "stability constant            " << fmt(d.stability_constant) << '\n'
       << "energy |psi_h|^2+|theta_h|^2  " << fmt(d.energy) << '\n';
    if (d.apriori_checked) {
        os << "a priori bound energy <= R^2  " << flag(d.apriori_holds) << '\n';
    } else {
        os << "a priori bound energy <= R^2  not checked\n";
    }
    if (d.stability_ratio) {
        os << "stability ratio (<= 1)        " << fmt(*d.stability_ratio) << '\n';
    } else {
        os << "stability ratio (<= 1)        not checked\n";
    }
    os << "min f2                        " << fmt(d.f2_min) << "  positive: " << flag(d.f2_positive) << '\n';
    for (const auto& n : d.notes) {
        os << "note: " << n << '\n';
    }
    return os.str();
}

std::string to_csv(const TheoremDiagnostics& d)
{
    auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    std::ostringstream os;
    os << "key,value\n"
       << "rayleigh," << fmt(d.inputs.rayleigh) << '\n'
       << "poincare," << fmt(d.inputs.poincare) << '\n'
       << "sobolev," << fmt(d.inputs.sobolev) << '\n'
       << "data_bound," << fmt(d.inputs.data_bound) << '\n'
       << "data_bound_measured," << d.data_bound_measured << '\n'
       << "f1_norm," << fmt(d.inputs.f1_norm) << '\n'
       << "f2_norm," << fmt(d.inputs.f2_norm) << '\n'
       << "b," << fmt(d.b) << '\n'
       << "b_positive," << d.b_positive << '\n'
       << "r_squared," << opt(d.r_squared) << '\n'
       << "uniqueness_psi," << fmt(d.uniqueness_psi) << '\n'
       << "uniqueness_theta," << fmt(d.uniqueness_theta) << '\n'
       << "uniqueness_holds," << d.uniqueness_holds << '\n'
       << "uniqueness_alt_psi," << fmt(d.uniqueness_alt_psi) << '\n'
       << "uniqueness_alt_theta," << fmt(d.uniqueness_alt_theta) << '\n'
       << "uniqueness_alt_holds," << d.uniqueness_alt_holds << '\n'
       << "stability_psi," << fmt(d.stability_psi) << '\n'
       << "stability_theta," << fmt(d.stability_theta) << '\n'
       << "stability_constant," << fmt(d.stability_constant) << '\n'
       << "stability_holds," << d.stability_holds << '\n'
       << "energy," << fmt(d.energy) << '\n'
       << "apriori_checked," << d.apriori_checked << '\n'
       << "apriori_holds," << d.apriori_holds << '\n'
       << "stability_ratio," << opt(d.stability_ratio) << '\n'
       << "f2_min," << fmt(d.f2_min) << '\n'
       << "f2_positive," << d.f2_positive << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------

StabilityReport stability_sweep(std::span<const double> scales, double rayleigh, const Mesh& mesh,
                                const NewtonConfig& config, const ExactSolution& exact)
{
    for (double s : scales) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw std::invalid_argument("stability_sweep: scales must be finite and non-negative");
        }
    }
    StabilityReport report;
    report.rayleigh = rayleigh;
    report.poincare = poincare_estimate(mesh);

    DiagnosticsOptions opts;
    opts.poincare = report.poincare;
    for (double s : scales) {
        StabilityPoint pt;
        pt.scale = s;
        const ProblemParams params = exact.problem(rayleigh, s);
        const double n1 = function_l2(params.f1, mesh);
        const double n2 = function_l2(params.f2, mesh);
        pt.source_norm = std::sqrt(n1 * n1 + n2 * n2);
        pt.stability_constant = kNaN;
        pt.bound = kNaN;
        try {
            NewtonResult solved = newton_solve(CoupledState(mesh), params, mesh, config);
            pt.converged = solved.report.converged;
            pt.iterations = solved.report.iterations();
            if (!pt.converged) {
                pt.failure = solved.report.diverged() ? solved.report.divergence_reason : "iteration limit reached";
            }
            pt.grad_psi = field_h1_semi(solved.state.psi);
            pt.grad_theta = field_h1_semi(solved.state.theta);
            if (pt.converged) {
                const TheoremDiagnostics d = theorem_diagnostics(params, solved.state, mesh, opts);
                pt.stability_constant = d.stability_constant;
                if (d.stability_holds) {
                    pt.bound = report.poincare / (2.0 * std::sqrt(d.stability_constant)) * pt.source_norm;
                    pt.bound_checked = true;
                    pt.bound_holds = pt.grad_psi <= pt.bound && pt.grad_theta <= pt.bound;
                }
            }
        } catch (const std::exception& e) {
            pt.failure = e.what();
        }
        report.points.push_back(pt);
    }
    return report;
}

std::string to_csv(const StabilityReport& report)
{
    std::ostringstream os;
    os << "scale,source_norm,converged,iterations,grad_psi,grad_theta,stability_constant,bound,bound_checked,"
          "bound_holds,failure\n";
    for (const auto& p : report.points) {
        os << fmt(p.scale) << ',' << fmt(p.source_norm) << ',' << p.converged << ',' << p.iterations << ','
           << fmt(p.grad_psi) << ',' << fmt(p.grad_theta) << ',' << fmt(p.stability_constant) << ','
           << fmt(p.bound) << ',' << p.bound_checked << ',' << p.bound_holds << ",\"" << p.failure << "\"\n";
    }
    return os.str();
}

}  // namespace natconv
