#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "natconv/field_io.hpp"

namespace natconv::cli {

/// Process exit codes. Stable contract for scripts.
enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,
    kConfigError = 2,
    kDivergence = 3,
    kIoError = 4,
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string subcommand;  // solve | convergence | sweep-ra | diagnostics
    int n = 32;
    std::vector<double> rayleigh{10.0};
    std::vector<int> levels{8, 16, 32, 64};
    double epsilon = 1e-8;
    int max_iterations = 25;
    std::filesystem::path output = ".";
    FieldFormat format = FieldFormat::vtk;
    double source_scale = 1.0;
    double sobolev = 1.0;
    std::optional<double> data_bound;
    /// Source scales for the stability sweep of `diagnostics`; empty skips it.
    std::vector<double> stability_scales;
    bool serial = false;
    bool warm_start = true;

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
};

/// Parses argv (flags override values from --config). Returns std::nullopt
/// after printing help. Throws ConfigError on bad input.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Executes a validated configuration, writing artifacts under config.output.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with every failure mapped to an exit code and a one-line
/// JSON error record on err.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace natconv::cli
