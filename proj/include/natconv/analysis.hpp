#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "natconv/mms.hpp"
#include "natconv/newton.hpp"

namespace natconv {

// ---------------------------------------------------------------------------
// Convergence studies
// ---------------------------------------------------------------------------

struct RateRow {
    int n = 0;
    double h = 0.0;
    double l2_psi = 0.0;
    double h1_psi = 0.0;
    double l2_theta = 0.0;
    double h1_theta = 0.0;
    int newton_iterations = 0;
    /// ||grad(I_h psi - psi_h)||_2, distance from the nodal interpolant to the discrete solution.
    double h1_interp_psi = 0.0;
    double h1_interp_theta = 0.0;
};

struct RateTable {
    std::vector<RateRow> rows;

    /// log2(e_{k-1} / e_k) for k >= 1 of the selected column.
    std::vector<double> rates(double RateRow::*column) const;
};

/// log2(e[k-1] / e[k]) for consecutive entries; NaN where either error is 0.
std::vector<double> empirical_rates(std::span<const double> errors);

/// A level failed to converge; the rows solved before it are attached.
class StudyError : public std::runtime_error {
public:
    StudyError(const std::string& what, RateTable partial);
    const RateTable& partial() const { return partial_; }

private:
    RateTable partial_;
};

/// Solves the manufactured problem on each level from a zero initial guess
/// and tabulates errors against the exact pair. Levels must be ascending
/// powers of two (each twice the previous), at least three of them.
RateTable convergence_study(std::span<const int> levels, double rayleigh, const NewtonConfig& config = {},
                            const ExactSolution& exact = convection_benchmark());

std::string to_csv(const RateTable& table);
std::string to_text(const RateTable& table);

// ---------------------------------------------------------------------------
// Poincare constant
// ---------------------------------------------------------------------------

/// Smallest eigenvalue of K v = lambda M v on interior unknowns, by inverse
/// power iteration with CG inner solves. Throws std::runtime_error if the
/// iteration does not settle.
double smallest_eigenvalue(const Mesh& mesh);

/// C_h = 1 / sqrt(lambda_min); tends to 1/(sqrt(2) pi) from below as h -> 0.
double poincare_estimate(const Mesh& mesh);

// ---------------------------------------------------------------------------
// Existence / uniqueness / stability conditions
// ---------------------------------------------------------------------------

struct TheoremInputs {
    double rayleigh = 0.0;
    double poincare = 0.0;
    double sobolev = 1.0;
    double data_bound = 0.0;
    double f1_norm = 0.0;
    double f2_norm = 0.0;
};

struct TheoremDiagnostics {
    TheoremInputs inputs;
    bool data_bound_measured = false;

    /// min{1 - C Ra/2 - A L, 1/2 - Ra/2 - A L}
    double b = 0.0;
    bool b_positive = false;
    /// C^2 (||f1||^2 + ||f2||^2) / (2B); only when B > 0.
    std::optional<double> r_squared;

    // Uniqueness in the form stated with the theorem ...
    double uniqueness_psi = 0.0;    // 1/2 - C R/sqrt2 - C Ra/2
    double uniqueness_theta = 0.0;  // 1/2 - Ra/2 - 2 sqrt2 R C
    bool uniqueness_holds = false;
    // ... and in the form reached at the end of the uniqueness argument.
    double uniqueness_alt_psi = 0.0;    // 1 - C R/sqrt2 - C Ra/2
    double uniqueness_alt_theta = 0.0;  // 1 - Ra/2 - 2 sqrt2 R C
    bool uniqueness_alt_holds = false;

    double stability_psi = 0.0;    // 1/2 - C R/(2 sqrt2) - C Ra/2
    double stability_theta = 0.0;  // 1/2 - Ra/2 - 3 R C/(2 sqrt2)
    double stability_constant = 0.0;  // min of the two
    bool stability_holds = false;

    /// ||grad psi_h||^2 + ||grad theta_h||^2 of the discrete solution.
    double energy = 0.0;
    bool apriori_checked = false;
    bool apriori_holds = false;
    /// energy * 2 L_stab / (C^2 (||f1||^2 + ||f2||^2)); must be <= 1 when stability holds.
    std::optional<double> stability_ratio;

    double f2_min = 0.0;
    bool f2_positive = false;

    std::vector<std::string> notes;
};

/// Evaluates every condition from the scalar inputs alone; energy-based
/// checks are left unset. Conditions that need R are NaN and false when B <= 0.
TheoremDiagnostics evaluate_theorem_conditions(const TheoremInputs& inputs);

struct DiagnosticsOptions {
    double sobolev = 1.0;
    /// Bound on ||theta_x||_4 and ||theta_y||_4; measured from the solution when absent.
    std::optional<double> data_bound;
    /// Poincare constant; estimated on the mesh when absent.
    std::optional<double> poincare;
};

TheoremDiagnostics theorem_diagnostics(const ProblemParams& params, const CoupledState& solved, const Mesh& mesh,
                                       const DiagnosticsOptions& options = {});

/// max(||d theta_h/dx||_4, ||d theta_h/dy||_4), exact for P1 fields.
double measure_data_bound(const Field& theta);

std::string to_text(const TheoremDiagnostics& d);
std::string to_csv(const TheoremDiagnostics& d);

// ---------------------------------------------------------------------------
// Stability sweep
// ---------------------------------------------------------------------------

struct StabilityPoint {
    double scale = 0.0;
    /// sqrt(||f1||^2 + ||f2||^2) of the scaled sources.
    double source_norm = 0.0;
    bool converged = false;
    int iterations = 0;
    std::string failure;
    double grad_psi = 0.0;
    double grad_theta = 0.0;
    /// Stability constant of the diagnostics; NaN when unavailable.
    double stability_constant = 0.0;
    /// C / (2 sqrt(L_stab)) * source_norm.
    double bound = 0.0;
    bool bound_checked = false;
    bool bound_holds = false;
};

struct StabilityReport {
    double rayleigh = 0.0;
    double poincare = 0.0;
    std::vector<StabilityPoint> points;
};

/// Solves the manufactured problem with both sources scaled by each factor.
/// Newton failures are recorded per point and do not abort the sweep.
StabilityReport stability_sweep(std::span<const double> scales, double rayleigh, const Mesh& mesh,
                                const NewtonConfig& config = {}, const ExactSolution& exact = convection_benchmark());

std::string to_csv(const StabilityReport& report);

}  // namespace natconv
