#include "natconv/newton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "natconv/linear_solver.hpp"

namespace natconv {

namespace {

std::string singular_tangent_message(int iteration, int pivot_index, double pivot_value)
{
    std::ostringstream os;
    os << "singular Newton tangent at iteration " << iteration << " (pivot " << pivot_value << " at unknown "
       << pivot_index << ")";
    return os.str();
}

double l2(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

bool all_finite(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void NewtonConfig::validate() const
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("NewtonConfig: epsilon must be positive and finite");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("NewtonConfig: max_iterations must be >= 1");
    }
    if (divergence_window < 1) {
        throw std::invalid_argument("NewtonConfig: divergence_window must be >= 1");
    }
}

SingularTangentError::SingularTangentError(int iteration, int pivot_index, double pivot_value)
    : std::runtime_error(singular_tangent_message(iteration, pivot_index, pivot_value))
    , iteration_(iteration)
    , pivot_index_(pivot_index)
{
}

double correction_norm(std::span<const double> w, CorrectionNorm norm)
{
    if (norm == CorrectionNorm::max) {
        double m = 0.0;
        for (double x : w) {
            m = std::max(m, std::abs(x));
        }
        return m;
    }
    return l2(w);
}

std::string format_log_line(const NewtonIteration& it)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "iter=%d wnorm=%.17g fnorm=%.17g", it.index, it.correction_norm, it.residual_norm);
    return buf;
}

NewtonResult newton_solve(const CoupledState& initial, const ProblemParams& params, const Mesh& mesh,
                          const NewtonConfig& config, const NewtonObserver& observer)
{
    config.validate();
    params.validate();
    if (!initial.boundary_is_zero()) {
        throw std::invalid_argument("newton_solve: initial state must vanish on the boundary");
    }
    const bool serial = config.execution == Execution::serial;

    const SourceLoads loads = serial ? reference::assemble_source_loads(params, mesh)
                                     : assemble_source_loads(params, mesh);
    auto residual = [&](const CoupledState& u) {
        return serial ? reference::assemble_residual(u, params.rayleigh, loads, mesh)
                      : assemble_residual(u, params.rayleigh, loads, mesh);
    };
    auto tangent = [&](const CoupledState& u) {
        return serial ? reference::assemble_tangent(u, params.rayleigh, mesh)
                      : assemble_tangent(u, params.rayleigh, mesh);
    };

    NewtonResult result{initial, {}};
    NewtonReport& report = result.report;
    int growth = 0;
    double previous_fnorm = 0.0;

    for (int i = 0; i < config.max_iterations; ++i) {
        const auto f = residual(result.state);
        const double fnorm = l2(f);
        if (!std::isfinite(fnorm)) {
            report.divergence_reason = "non-finite residual at iteration " + std::to_string(i);
            break;
        }

        std::vector<double> w;
        try {
            w = BandedLU(tangent(result.state)).solve(f);
        } catch (const SingularMatrixError& e) {
            throw SingularTangentError(i, e.pivot_index(), e.pivot_value());
        }
        if (!all_finite(w)) {
            report.divergence_reason = "non-finite correction at iteration " + std::to_string(i);
            break;
        }

        const double wnorm = correction_norm(w, config.norm);
        subtract_interior(result.state, w);
        report.history.push_back({i, wnorm, fnorm});
        if (observer) {
            observer(report.history.back());
        }
        if (wnorm < config.epsilon) {
            report.converged = true;
            break;
        }

        growth = (i > 0 && fnorm > previous_fnorm) ? growth + 1 : 0;
        previous_fnorm = fnorm;
        if (growth >= config.divergence_window) {
            report.divergence_reason = "residual norm grew for " + std::to_string(growth) +
                                       " consecutive iterations";
            break;
        }
    }

    report.final_residual_norm = l2(residual(result.state));
    return result;
}

}  // namespace natconv
