#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "natconv/assembly.hpp"

namespace natconv {

/// Which kernels drive assembly: OpenMP (default) or the single-threaded
/// reference path, whose iteration history is reproducible bit-for-bit.
enum class Execution { parallel, serial };

/// Norm of the stacked interior correction used by the stopping test.
enum class CorrectionNorm { l2, max };

struct NewtonConfig {
    double epsilon = 1e-8;
    int max_iterations = 25;
    CorrectionNorm norm = CorrectionNorm::l2;
    Execution execution = Execution::parallel;
    /// Stop as diverged after this many consecutive increases of ||F||.
    int divergence_window = 3;

    /// Throws std::invalid_argument unless epsilon > 0 and max_iterations >= 1.
    void validate() const;
};

struct NewtonIteration {
    int index = 0;
    /// ||w_i|| of the correction solved at this iteration.
    double correction_norm = 0.0;
    /// ||F(u_i)||_2 at the iterate the correction was computed from.
    double residual_norm = 0.0;
};

struct NewtonReport {
    std::vector<NewtonIteration> history;
    bool converged = false;
    /// Empty unless the iteration was stopped for growth or non-finite values.
    std::string divergence_reason;
    /// ||F(u)||_2 at the returned state.
    double final_residual_norm = 0.0;

    int iterations() const { return static_cast<int>(history.size()); }
    bool diverged() const { return !divergence_reason.empty(); }
};

struct NewtonResult {
    CoupledState state;
    NewtonReport report;
};

/// The tangent at some iterate could not be factored.
class SingularTangentError : public std::runtime_error {
public:
    SingularTangentError(int iteration, int pivot_index, double pivot_value);
    int iteration() const { return iteration_; }
    int pivot_index() const { return pivot_index_; }

private:
    int iteration_;
    int pivot_index_;
};

using NewtonObserver = std::function<void(const NewtonIteration&)>;

/// Plain Newton: solve DF(u_i) w_i = F(u_i), set u_{i+1} = u_i - w_i, stop
/// once ||w_i|| < epsilon. No damping or line search.
///
/// Throws std::invalid_argument if the initial state has non-zero boundary
/// values, and SingularTangentError if a tangent is singular. Non-finite
/// values and sustained residual growth end the loop with a divergence reason.
NewtonResult newton_solve(const CoupledState& initial, const ProblemParams& params, const Mesh& mesh,
                          const NewtonConfig& config = {}, const NewtonObserver& observer = {});

/// `iter=<k> wnorm=<float> fnorm=<float>`
std::string format_log_line(const NewtonIteration& it);

double correction_norm(std::span<const double> w, CorrectionNorm norm);

}  // namespace natconv
