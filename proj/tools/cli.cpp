#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "natconv/analysis.hpp"
#include "natconv/mms.hpp"
#include "natconv/newton.hpp"

namespace natconv::cli {

namespace {

/// Newton did not converge; carries the message for the error record.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string ra_label(double ra)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", ra);
    return buf;
}

void ensure_output_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
}

NewtonConfig newton_config(const RunConfig& c)
{
    NewtonConfig nc;
    nc.epsilon = c.epsilon;
    nc.max_iterations = c.max_iterations;
    nc.execution = c.serial ? Execution::serial : Execution::parallel;
    return nc;
}

std::string log_text(const NewtonReport& report)
{
    std::string s;
    for (const auto& it : report.history) {
        s += format_log_line(it);
        s += '\n';
    }
    return s;
}

std::string failure_reason(const NewtonReport& report)
{
    return report.diverged() ? report.divergence_reason
                             : "no convergence within " + std::to_string(report.iterations()) + " iterations";
}

struct SolveOutcome {
    NewtonResult result;
    std::string failure;  // empty on success
};

SolveOutcome solve_once(const CoupledState& initial, const ProblemParams& params, const Mesh& mesh,
                        const NewtonConfig& nc)
{
    try {
        NewtonResult r = newton_solve(initial, params, mesh, nc);
        std::string failure = r.report.converged ? std::string() : failure_reason(r.report);
        return {std::move(r), std::move(failure)};
    } catch (const SingularTangentError& e) {
        return {{CoupledState(mesh), {}}, e.what()};
    }
}

std::string error_summary(const CoupledState& state, const Mesh& mesh)
{
    const auto& exact = convection_benchmark();
    std::ostringstream os;
    os << "error L2 psi                  " << error_l2(state.psi, exact.psi, mesh) << '\n'
       << "error H1 psi                  " << error_h1_semi(state.psi, exact.psi_grad, mesh) << '\n'
       << "error L2 theta                " << error_l2(state.theta, exact.theta, mesh) << '\n'
       << "error H1 theta                " << error_h1_semi(state.theta, exact.theta_grad, mesh) << '\n';
    return os.str();
}

int run_solve(const RunConfig& c, std::ostream& out)
{
    const Mesh mesh = build_structured_mesh(c.n);
    const ProblemParams params = convection_benchmark().problem(c.rayleigh.front(), c.source_scale);
    const SolveOutcome s = solve_once(CoupledState(mesh), params, mesh, newton_config(c));
    write_text_atomic(c.output / "newton.log", log_text(s.result.report));
    if (!s.failure.empty()) {
        throw DivergenceError("solve: " + s.failure);
    }

    const CoupledState& u = s.result.state;
    write_field(u.psi, c.output / (std::string("psi") + extension(c.format)), c.format, "psi");
    write_field(u.theta, c.output / (std::string("theta") + extension(c.format)), c.format, "theta");

    DiagnosticsOptions opts;
    opts.sobolev = c.sobolev;
    opts.data_bound = c.data_bound;
    const TheoremDiagnostics d = theorem_diagnostics(params, u, mesh, opts);
    std::ostringstream text;
    text << "n                             " << c.n << '\n'
         << "source scale                  " << c.source_scale << '\n'
         << "newton iterations             " << s.result.report.iterations() << '\n'
         << "final residual norm           " << s.result.report.final_residual_norm << '\n';
    if (c.source_scale == 1.0) {
        text << error_summary(u, mesh);
    }
    text << to_text(d);
    write_text_atomic(c.output / "diagnostics.txt", text.str());
    out << text.str();
    return kSuccess;
}

int run_convergence(const RunConfig& c, std::ostream& out)
{
    RateTable table;
    try {
        table = convergence_study(c.levels, c.rayleigh.front(), newton_config(c));
    } catch (const StudyError& e) {
        write_text_atomic(c.output / "rates.csv", to_csv(e.partial()));
        throw DivergenceError(e.what());
    }
    write_text_atomic(c.output / "rates.csv", to_csv(table));
    write_text_atomic(c.output / "rates.txt", to_text(table));
    out << to_text(table);
    return kSuccess;
}

int run_sweep(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const Mesh mesh = build_structured_mesh(c.n);
    const NewtonConfig nc = newton_config(c);
    std::ostringstream summary;
    summary << "ra,converged,iterations,warm_started,h1_psi,h1_theta,failure\n";

    CoupledState seed(mesh);
    bool have_seed = false;
    int failures = 0;
    for (double ra : c.rayleigh) {
        const std::string label = ra_label(ra);
        const ProblemParams params = convection_benchmark().problem(ra, c.source_scale);
        const bool warm = c.warm_start && have_seed;
        const SolveOutcome s = solve_once(warm ? seed : CoupledState(mesh), params, mesh, nc);
        write_text_atomic(c.output / ("newton_ra" + label + ".log"), log_text(s.result.report));

        const CoupledState& u = s.result.state;
        const bool ok = s.failure.empty();
        const auto& exact = convection_benchmark();
        summary << label << ',' << ok << ',' << s.result.report.iterations() << ',' << warm << ',';
        if (ok) {
            write_field(u.psi, c.output / ("psi_ra" + label + extension(c.format)), c.format, "psi");
            write_field(u.theta, c.output / ("theta_ra" + label + extension(c.format)), c.format, "theta");
            summary << error_h1_semi(u.psi, exact.psi_grad, mesh) << ','
                    << error_h1_semi(u.theta, exact.theta_grad, mesh) << ",\n";
            seed = u;
            have_seed = true;
            out << "Ra=" << label << " converged in " << s.result.report.iterations() << " iterations"
                << (warm ? " (warm start)" : "") << '\n';
        } else {
            ++failures;
            summary << ",,\"" << s.failure << "\"\n";
            err << "Ra=" << label << " failed: " << s.failure << '\n';
        }
    }
    write_text_atomic(c.output / "sweep.csv", summary.str());
    if (failures > 0) {
        throw DivergenceError("sweep-ra: " + std::to_string(failures) + " of " + std::to_string(c.rayleigh.size()) +
                              " Rayleigh numbers did not converge");
    }
    return kSuccess;
}

int run_diagnostics(const RunConfig& c, std::ostream& out)
{
    const Mesh mesh = build_structured_mesh(c.n);
    const double ra = c.rayleigh.front();
    const ProblemParams params = convection_benchmark().problem(ra, c.source_scale);
    const SolveOutcome s = solve_once(CoupledState(mesh), params, mesh, newton_config(c));
    if (!s.failure.empty()) {
        throw DivergenceError("diagnostics: " + s.failure);
    }
    DiagnosticsOptions opts;
    opts.sobolev = c.sobolev;
    opts.data_bound = c.data_bound;
    const TheoremDiagnostics d = theorem_diagnostics(params, s.result.state, mesh, opts);
    write_text_atomic(c.output / "diagnostics.txt", to_text(d));
    write_text_atomic(c.output / "diagnostics.csv", to_csv(d));
    out << to_text(d);

    if (!c.stability_scales.empty()) {
        const StabilityReport report = stability_sweep(c.stability_scales, ra, mesh, newton_config(c));
        write_text_atomic(c.output / "stability.csv", to_csv(report));
        out << to_csv(report);
    }
    return kSuccess;
}

void error_record(std::ostream& err, const char* kind, int code, const std::string& message)
{
    nlohmann::json rec;
    rec["error"] = kind;
    rec["exit_code"] = code;
    rec["message"] = message;
    err << rec.dump() << '\n';
}

}  // namespace

void RunConfig::validate() const
{
    static const std::vector<std::string> known{"solve", "convergence", "sweep-ra", "diagnostics"};
    if (std::find(known.begin(), known.end(), subcommand) == known.end()) {
        throw ConfigError("unknown subcommand '" + subcommand + "'");
    }
    if (subcommand != "convergence" && (n < 2 || n > kMaxSubdivisions)) {
        throw ConfigError("--n must be in [2, " + std::to_string(kMaxSubdivisions) + "]");
    }
    if (rayleigh.empty()) {
        throw ConfigError("--ra needs at least one value");
    }
    if (subcommand != "sweep-ra" && rayleigh.size() != 1) {
        throw ConfigError(subcommand + " takes exactly one Rayleigh number");
    }
    for (double ra : rayleigh) {
        if (!std::isfinite(ra) || ra < 0.0) {
            throw ConfigError("Rayleigh numbers must be finite and >= 0");
        }
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ConfigError("--epsilon must be positive");
    }
    if (max_iterations < 1) {
        throw ConfigError("--max-iterations must be >= 1");
    }
    if (!std::isfinite(source_scale) || source_scale < 0.0) {
        throw ConfigError("--source-scale must be finite and >= 0");
    }
    if (!(sobolev > 0.0)) {
        throw ConfigError("--sobolev must be positive");
    }
    if (data_bound && !(*data_bound > 0.0)) {
        throw ConfigError("--data-bound must be positive");
    }
    if (subcommand == "convergence") {
        if (levels.size() < 3) {
            throw ConfigError("--levels needs at least three values");
        }
        for (std::size_t k = 0; k < levels.size(); ++k) {
            if (levels[k] < 2 || levels[k] > kMaxSubdivisions || (k > 0 && levels[k] != 2 * levels[k - 1])) {
                throw ConfigError("--levels must be ascending, each twice the previous, starting at >= 2");
            }
        }
    }
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out)
{
    RunConfig c;
    CLI::App app{"Finite element solver for buoyancy-driven flow in a porous unit square"};
    app.set_config("--config", "", "Read key=value options from a file; flags override it");
    app.require_subcommand(1);

    std::string format = "vtk";
    double data_bound = 0.0;
    app.add_option("--n", c.n, "Subdivisions per side")->capture_default_str();
    app.add_option("--ra", c.rayleigh, "Rayleigh number (comma-separated list for sweep-ra)")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--levels", c.levels, "Mesh levels for the convergence study")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--epsilon", c.epsilon, "Newton stopping tolerance on ||w||_2")->capture_default_str();
    app.add_option("--max-iterations", c.max_iterations, "Newton iteration cap")->capture_default_str();
    app.add_option("--output", c.output, "Output directory")->capture_default_str();
    app.add_option("--format", format, "Field file format")->check(CLI::IsMember({"vtk", "csv"}))->capture_default_str();
    app.add_option("--source-scale", c.source_scale, "Multiplier on both source terms")->capture_default_str();
    app.add_option("--sobolev", c.sobolev, "Sobolev embedding constant A")->capture_default_str();
    auto* bound = app.add_option("--data-bound", data_bound, "Bound L on ||theta_x||_4, ||theta_y||_4 "
                                                             "(measured when omitted)");
    app.add_option("--stability-scales", c.stability_scales, "Source scales for a stability sweep")
        ->delimiter(',');
    app.add_flag("--serial", c.serial, "Use the single-threaded reference kernels");
    app.add_flag("!--no-warm-start", c.warm_start, "Start every Ra of a sweep from zero");

    app.add_subcommand("solve", "Solve the benchmark problem on one mesh and write psi, theta")->fallthrough();
    app.add_subcommand("convergence", "Run a mesh-refinement study and report error rates")->fallthrough();
    app.add_subcommand("sweep-ra", "Solve for several Rayleigh numbers, warm-starting each from the last")
        ->fallthrough();
    app.add_subcommand("diagnostics", "Evaluate the existence, uniqueness and stability conditions")
        ->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    c.subcommand = app.get_subcommands().front()->get_name();
    c.format = parse_field_format(format);
    if (bound->count() > 0) {
        c.data_bound = data_bound;
    }
    c.validate();
    return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    ensure_output_dir(config.output);
    if (config.subcommand == "solve") {
        return run_solve(config, out);
    }
    if (config.subcommand == "convergence") {
        return run_convergence(config, out);
    }
    if (config.subcommand == "sweep-ra") {
        return run_sweep(config, out, err);
    }
    return run_diagnostics(config, out);
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    try {
        const auto config = parse_args(argc, argv, out);
        if (!config) {
            return kSuccess;
        }
        return run(*config, out, err);
    } catch (const ConfigError& e) {
        error_record(err, "config", kConfigError, e.what());
        return kConfigError;
    } catch (const DivergenceError& e) {
        error_record(err, "divergence", kDivergence, e.what());
        return kDivergence;
    } catch (const IoError& e) {
        error_record(err, "io", kIoError, e.what());
        return kIoError;
    } catch (const std::exception& e) {
        error_record(err, "internal", kFailure, e.what());
        return kFailure;
    }
}

}  // namespace natconv::cli
