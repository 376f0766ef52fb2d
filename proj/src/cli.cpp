#include "defspec/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "defspec/analytic_spectrum.hpp"
#include "defspec/error.hpp"
#include "defspec/experiments.hpp"
#include "defspec/fd_solver.hpp"
#include "defspec/serialize.hpp"
#include "defspec/transform.hpp"

namespace defspec::cli {
namespace {

constexpr std::string_view tool_version = "1.0.0";

class UsageError : public Error {
public:
    using Error::Error;
};

enum class Format { csv, json };

struct RunConfig {
    std::optional<double> hbar;
    std::optional<double> c;
    std::optional<double> v_c;
    bool si = false;
    std::string format;  // empty: subcommand default
    std::string out_path;
    std::vector<std::string> tolerance_overrides;
    bool no_meta = false;
};

// Documented tolerance keys and defaults per subcommand.
const std::map<std::string, std::map<std::string, double>>& tolerance_defaults() {
    static const std::map<std::string, std::map<std::string, double>> defaults{
        {"parseval", {{"defect_slack", 1e-9}}},
        {"gram", {{"identity", 1e-10}}},
        {"fd-validate", {{"rel_err", 1e-5}, {"order_lo", 1.9}, {"order_hi", 2.1}}},
        {"rigidity", {{"parseval_abs", 1e-8}, {"boundary_slack", 1e-9}, {"endpoint_abs", 1e-12}}},
        {"constant-projection", {{"agreement", 1e-10}}},
        {"inverse-limit", {{"slope_rel", 0.05}, {"factorization_rel", 1e-9}}},
        {"asymptotics", {{"rounding_ulps", 16.0}}},
        {"converge", {{"l2_threshold", 0.08}, {"monotone_slack", 1e-12}}},
    };
    return defaults;
}

std::map<std::string, double> resolve_tolerances(const std::string& command,
                                                 const std::vector<std::string>& overrides) {
    const auto& table = tolerance_defaults();
    const auto entry = table.find(command);
    std::map<std::string, double> tolerances =
        entry == table.end() ? std::map<std::string, double>{} : entry->second;
    for (const std::string& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw UsageError(fmt::format("--tol expects key=value (got '{}')", item));
        }
        const std::string key = item.substr(0, eq);
        if (!tolerances.contains(key)) {
            throw UsageError(fmt::format("'{}' is not a tolerance of '{}'", key, command));
        }
        try {
            std::size_t used = 0;
            const double value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1 || !std::isfinite(value)) {
                throw std::invalid_argument("trailing characters");
            }
            tolerances[key] = value;
        } catch (const std::exception&) {
            throw UsageError(fmt::format("tolerance '{}' needs a finite number", key));
        }
    }
    return tolerances;
}

OperatorParams resolve_params(const RunConfig& config) {
    const bool any_custom = config.hbar || config.c || config.v_c;
    if (config.si && any_custom) {
        throw UsageError("--si cannot be combined with --hbar/--c/--v-c");
    }
    if (config.si) {
        return si_params();
    }
    if (any_custom) {
        if (!(config.hbar && config.c && config.v_c)) {
            throw UsageError("custom parameters need all of --hbar, --c and --v-c");
        }
        return custom_params(*config.hbar, *config.c, *config.v_c);
    }
    return canonical_params();
}

std::int64_t parse_index(const std::string& text, std::string_view what) {
    try {
        std::size_t used = 0;
        const long long value = std::stoll(text, &used);
        if (used == text.size() && value >= 0) {
            return value;
        }
    } catch (const std::exception&) {
    }
    throw ValidationError(fmt::format("{} must be a non-negative integer (got '{}')", what, text));
}

// Writes the result either as JSON (with optional metadata) or via the CSV
// writer supplied by the subcommand.
class Emitter {
public:
    Emitter(std::ostream& out, Format format, bool meta, const OperatorParams& params,
            std::string command)
        : out_(out), format_(format), meta_(meta), params_(params), command_(std::move(command)) {}

    Format format() const noexcept { return format_; }

    void json(Json body) {
        if (meta_) {
            body["meta"] = {{"tool", "defspec"},
                            {"version", tool_version},
                            {"command", command_},
                            {"params", to_json(params_)}};
        }
        out_ << body.dump(2) << '\n';
    }

    std::ostream& csv() { return out_; }

private:
    std::ostream& out_;
    Format format_;
    bool meta_;
    OperatorParams params_;
    std::string command_;
};

int verdict_exit(Verdict verdict) {
    return verdict == Verdict::fail ? exit_verdict_fail : exit_success;
}

int emit_report(Emitter& emit, const ExperimentReport& report) {
    if (emit.format() == Format::json) {
        emit.json(to_json(report));
    } else {
        write_experiment_csv(emit.csv(), report);
    }
    return verdict_exit(report.verdict);
}

QuadratureRule projection_rule(const OperatorParams& params, std::int64_t N, std::int64_t nodes) {
    return nodes > 0 ? gauss_legendre_rule(params, nodes) : default_projection_rule(params, N);
}

}  // namespace

RealFunction parse_target(const std::string& spec, const OperatorParams& params) {
    if (spec == "C") {
        return [params](double v) { return deformation_profile(params, v); };
    }
    if (spec == "const") {
        return [](double) { return 1.0; };
    }
    if (spec.starts_with("const:")) {
        double value = 0.0;
        try {
            value = std::stod(spec.substr(6));
        } catch (const std::exception&) {
            throw ValidationError(fmt::format("bad constant in target '{}'", spec));
        }
        return [value](double) { return value; };
    }
    if (spec.starts_with("psi:")) {
        const std::int64_t n = parse_index(spec.substr(4), "psi index");
        return [params, n](double v) { return eigenfunction_eval(params, n, v); };
    }
    if (spec == "sin3") {
        return [params](double v) {
            const double s = std::sin(std::numbers::pi * (v + params.v_c()) / params.interval_length());
            return s * s * s;
        };
    }
    throw ValidationError(
        fmt::format("unknown target '{}' (expected C, const, const:<x>, psi:<n> or sin3)", spec));
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral toolkit for pi (1 + (hbar/c)^2 d^2/dv^2) on [-v_c, v_c] with Dirichlet "
                 "conditions",
                 "defspec"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    RunConfig config;
    app.add_option("--hbar", config.hbar, "Custom hbar (needs --c and --v-c)");
    app.add_option("--c", config.c, "Custom c");
    app.add_option("--v-c", config.v_c, "Custom interval half-width v_c < c");
    app.add_flag("--si", config.si, "SI hbar and c with v_c = sqrt(1 - 1/pi) c");
    app.add_option("--format", config.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", config.out_path, "Write results to this file instead of stdout");
    app.add_option("--tol", config.tolerance_overrides, "Tolerance override key=value (repeatable)");
    app.add_flag("--no-meta", config.no_meta, "Omit the JSON metadata block");

    auto add = [&app](const std::string& name, const std::string& description) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->fallthrough();
        return sub;
    };

    std::int64_t n_max = 10;
    std::int64_t n_min = 100;
    std::int64_t n_index = 0;
    std::int64_t grid_points = 1001;
    std::int64_t nodes = 0;
    std::int64_t modes_count = 10;
    int k_max = 2;
    double amplitude = 1.0;
    double beta = 2.0;
    double mode_decay = 1.0;
    std::string target = "C";
    std::string coeffs_path;
    std::string rule_kind = "gauss";
    std::vector<std::int64_t> grid_sizes{250, 500, 1000, 2000};
    std::vector<std::int64_t> n_list{8, 16, 32, 64};
    std::vector<double> tau_list{1, 2, 3, 4, 5, 6, 7, 8};

    CLI::App* spectrum = add("spectrum", "Closed-form modes 0..n-max");
    spectrum->add_option("--n-max", n_max, "Largest mode index")->capture_default_str();

    CLI::App* eigenfunction = add("eigenfunction", "Samples of psi_n on a uniform grid");
    eigenfunction->add_option("--n", n_index, "Mode index")->capture_default_str();
    eigenfunction->add_option("--grid-points", grid_points, "Number of grid points")
        ->capture_default_str();

    add("critical-index", "Floor formula against the exact sign change");

    CLI::App* project_cmd = add("project", "Spectral coefficients a_0..a_N of a target");
    project_cmd->add_option("--target", target, "C, const, const:<x>, psi:<n> or sin3")
        ->capture_default_str();
    project_cmd->add_option("--n-max", n_max, "Truncation index N")->capture_default_str();
    project_cmd->add_option("--nodes", nodes, "Gauss-Legendre nodes (default max(256, 8(N+1)))");

    CLI::App* reconstruct_cmd = add("reconstruct", "Partial sum from an n,a_n CSV file");
    reconstruct_cmd->add_option("--coeffs", coeffs_path, "Coefficient CSV file")->required();
    reconstruct_cmd->add_option("--grid-points", grid_points, "Number of grid points")
        ->capture_default_str();

    CLI::App* parseval = add("parseval", "Parseval defect ||f||^2 - sum a_n^2");
    parseval->add_option("--target", target, "Target function")->capture_default_str();
    parseval->add_option("--n-max", n_max, "Truncation index N")->capture_default_str();
    parseval->add_option("--nodes", nodes, "Gauss-Legendre nodes");

    CLI::App* gram = add("gram", "Gram matrix <psi_n, psi_m>");
    gram->add_option("--n-max", n_max, "Largest mode index")->capture_default_str();
    gram->add_option("--nodes", nodes, "Quadrature nodes");
    gram->add_option("--rule", rule_kind, "gauss or simpson")
        ->check(CLI::IsMember({"gauss", "simpson"}))
        ->capture_default_str();

    CLI::App* fd_validate = add("fd-validate", "Finite-difference spectrum against closed form");
    fd_validate->add_option("--grid-sizes", grid_sizes, "Interior point counts m")
        ->delimiter(',')
        ->capture_default_str();
    fd_validate->add_option("--modes", modes_count, "Number of leading modes")->capture_default_str();

    CLI::App* rigidity = add("rigidity", "Partial sums of uniform coefficients pi");
    rigidity->add_option("--n-list", n_list, "Truncation indices")->delimiter(',')->capture_default_str();

    CLI::App* constant = add("constant-projection", "Coefficients <1, psi_n> by two quadrature rules");
    constant->add_option("--n-max", n_max, "Largest mode index")->capture_default_str();

    CLI::App* inverse = add("inverse-limit", "Decay of C^k seminorms as tau grows");
    inverse->add_option("--A", amplitude, "Amplitude A")->capture_default_str();
    inverse->add_option("--beta", beta, "Decay rate beta")->capture_default_str();
    inverse->add_option("--gamma-mode-decay", mode_decay, "Mode weights g(n) = exp(-rate n)")
        ->capture_default_str();
    inverse->add_option("--n-max", n_max, "Truncation index N");
    inverse->add_option("--tau-list", tau_list, "Increasing tau values")
        ->delimiter(',')
        ->capture_default_str();
    inverse->add_option("--k-max", k_max, "Highest derivative order (<= 4)")->capture_default_str();
    inverse->add_option("--grid-points", grid_points, "Grid points (default 64 or 256 per mode)");

    CLI::App* asymptotics = add("asymptotics", "Refined asymptotic expansion of C_n");
    asymptotics->add_option("--n-min", n_min, "First mode index")->capture_default_str();
    asymptotics->add_option("--n-max", n_max, "Last mode index");

    CLI::App* converge = add("converge", "Truncation error of the spectral reconstruction");
    converge->add_option("--target", target, "Target function")->capture_default_str();
    converge->add_option("--n-list", n_list, "Truncation indices")->delimiter(',');
    converge->add_option("--nodes", nodes, "Gauss-Legendre nodes (default 2048)");

    std::vector<std::string> owned{"defspec"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& arg : owned) {
        argv.push_back(arg.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_success;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string command = chosen->get_name();

    try {
        const OperatorParams params = resolve_params(config);
        const std::map<std::string, double> tol = resolve_tolerances(command, config.tolerance_overrides);

        const bool report_style = !(command == "spectrum" || command == "eigenfunction" ||
                                    command == "project" || command == "reconstruct" ||
                                    command == "gram");
        Format format = report_style ? Format::json : Format::csv;
        if (!config.format.empty()) {
            format = config.format == "csv" ? Format::csv : Format::json;
        }

        std::ofstream file;
        if (!config.out_path.empty()) {
            file.open(config.out_path);
            if (!file) {
                throw UsageError(fmt::format("cannot open output file '{}'", config.out_path));
            }
        }
        std::ostream& sink = config.out_path.empty() ? out : file;
        Emitter emit(sink, format, !config.no_meta, params, command);

        if (command == "spectrum") {
            const auto spectrum_modes = modes(params, n_max);
            if (format == Format::csv) {
                write_modes_csv(emit.csv(), spectrum_modes);
            } else {
                Json rows = Json::array();
                for (const Mode& mode : spectrum_modes) {
                    rows.push_back({{"n", mode.n}, {"k_n", mode.k_n}, {"C_n", mode.C_n}});
                }
                emit.json({{"modes", rows}});
            }
            return exit_success;
        }

        if (command == "eigenfunction") {
            const Grid grid = uniform_grid(params, grid_points - 1);
            const SampledFunction psi =
                sample(grid, [&](double v) { return eigenfunction_eval(params, n_index, v); });
            if (format == Format::csv) {
                write_sampled_function_csv(emit.csv(), psi);
            } else {
                Json body{{"n", n_index},
                          {"k_n", wavenumber(params, n_index)},
                          {"C_n", eigenvalue(params, n_index)},
                          {"v", std::vector<double>(grid.points().begin(), grid.points().end())},
                          {"f", std::vector<double>(psi.values().begin(), psi.values().end())}};
                if (grid_points >= std::max<std::int64_t>(1000, 10 * (n_index + 1))) {
                    body["interior_zeros"] = count_interior_zeros(params, n_index, grid_points);
                }
                emit.json(std::move(body));
            }
            return exit_success;
        }

        if (command == "critical-index") {
            const CriticalIndexReport report = critical_index(params);
            if (format == Format::csv) {
                const Json j = to_json(report);
                emit.csv() << "x,n_star_paper,n_star_exact,agree,method\n"
                           << format_real(report.x) << ',' << j["n_star_paper"].dump() << ','
                           << j["n_star_exact"].dump() << ',' << (report.agree ? "true" : "false")
                           << ',' << j["method"].get<std::string>() << '\n';
            } else {
                emit.json(to_json(report));
            }
            return exit_success;
        }

        if (command == "project") {
            const RealFunction f = parse_target(target, params);
            const CoefficientVector coeffs =
                project(params, f, n_max, projection_rule(params, n_max, nodes));
            if (format == Format::csv) {
                write_coefficients_csv(emit.csv(), coeffs);
            } else {
                emit.json({{"target", target}, {"N", coeffs.N()}, {"a_n", coeffs.a()}});
            }
            return exit_success;
        }

        if (command == "reconstruct") {
            const CoefficientVector coeffs = read_coefficients(coeffs_path, params);
            const SampledFunction sf = reconstruct(coeffs, uniform_grid(params, grid_points - 1));
            if (format == Format::csv) {
                write_sampled_function_csv(emit.csv(), sf);
            } else {
                emit.json({{"N", coeffs.N()},
                           {"v", std::vector<double>(sf.grid().points().begin(), sf.grid().points().end())},
                           {"f", std::vector<double>(sf.values().begin(), sf.values().end())}});
            }
            return exit_success;
        }

        if (command == "parseval") {
            const RealFunction f = parse_target(target, params);
            const QuadratureRule rule = projection_rule(params, n_max, nodes);
            const double norm = l2_norm(params, f, rule);
            const double defect = parseval_defect(params, f, n_max, rule);
            const bool ok = defect >= -tol.at("defect_slack");
            if (format == Format::csv) {
                emit.csv() << "N,norm_sq,defect,relative_defect\n"
                           << n_max << ',' << format_real(norm * norm) << ',' << format_real(defect)
                           << ',' << format_real(defect / (norm * norm)) << '\n';
            } else {
                emit.json({{"target", target},
                           {"N", n_max},
                           {"nodes", rule.size()},
                           {"norm_sq", norm * norm},
                           {"defect", defect},
                           {"relative_defect", defect / (norm * norm)},
                           {"tolerances", {{"defect_slack", tol.at("defect_slack")}}},
                           {"verdict", ok ? "pass" : "fail"}});
            }
            return ok ? exit_success : exit_verdict_fail;
        }

        if (command == "gram") {
            QuadratureRule rule;
            if (rule_kind == "simpson") {
                const std::int64_t count =
                    nodes > 0 ? nodes : std::max<std::int64_t>(4097, 64 * (n_max + 1) + 1);
                rule = composite_simpson_rule(params, count);
            } else {
                rule = projection_rule(params, n_max, nodes);
            }
            const SquareMatrix g = gram_matrix(params, n_max, rule);
            const double defect = identity_defect(g);
            const bool ok = defect < tol.at("identity");
            if (format == Format::csv) {
                write_gram_csv(emit.csv(), g);
            } else {
                Json rows = Json::array();
                for (std::size_t n = 0; n < g.dim; ++n) {
                    rows.push_back(std::vector<double>(g.entries.begin() + static_cast<std::ptrdiff_t>(n * g.dim),
                                                       g.entries.begin() + static_cast<std::ptrdiff_t>((n + 1) * g.dim)));
                }
                emit.json({{"N", n_max},
                           {"rule", to_string(rule.kind)},
                           {"nodes", rule.size()},
                           {"identity_defect", defect},
                           {"tolerances", {{"identity", tol.at("identity")}}},
                           {"verdict", ok ? "pass" : "fail"},
                           {"matrix", rows}});
            }
            return ok ? exit_success : exit_verdict_fail;
        }

        if (command == "fd-validate") {
            if (grid_sizes.empty()) {
                throw UsageError("--grid-sizes needs at least one value");
            }
            RefinementStudy study;
            if (grid_sizes.size() == 1) {
                study.reports.push_back(validate_against_analytic(params, grid_sizes.front(), modes_count));
            } else {
                study = refinement_study(params, grid_sizes, modes_count);
            }
            bool ok = true;
            for (double rel : study.reports.back().rel_errors) {
                ok = ok && rel < tol.at("rel_err");
            }
            for (double order : study.orders) {
                ok = ok && order >= tol.at("order_lo") && order <= tol.at("order_hi");
            }
            if (format == Format::csv) {
                for (std::size_t i = 0; i < study.reports.size(); ++i) {
                    if (i > 0) {
                        emit.csv() << '\n';
                    }
                    write_fd_report_csv(emit.csv(), study.reports[i]);
                }
            } else {
                Json body = to_json(study);
                body["tolerances"] = {{"rel_err", tol.at("rel_err")},
                                      {"order_lo", tol.at("order_lo")},
                                      {"order_hi", tol.at("order_hi")}};
                body["verdict"] = ok ? "pass" : "fail";
                emit.json(std::move(body));
            }
            return ok ? exit_success : exit_verdict_fail;
        }

        if (command == "rigidity") {
            RigidityTolerances rt;
            rt.parseval_abs = tol.at("parseval_abs");
            rt.boundary_slack = tol.at("boundary_slack");
            rt.endpoint_abs = tol.at("endpoint_abs");
            return emit_report(emit, rigidity_report(params, n_list, rt));
        }

        if (command == "constant-projection") {
            ConstantProjectionTolerances ct;
            ct.agreement = tol.at("agreement");
            return emit_report(emit, constant_projection_report(params, n_max, ct));
        }

        if (command == "inverse-limit") {
            const std::int64_t N = inverse->count("--n-max") > 0 ? n_max : 32;
            const DecayModel model(amplitude, beta, exponential_mode_weights(mode_decay), N);
            const std::int64_t points = inverse->count("--grid-points") > 0
                                            ? grid_points
                                            : seminorm_grid_points(N, k_max);
            InverseLimitTolerances it;
            it.slope_rel = tol.at("slope_rel");
            it.factorization_rel = tol.at("factorization_rel");
            return emit_report(emit, inverse_limit_report(model, params, tau_list, k_max,
                                                          uniform_grid(params, points - 1), it));
        }

        if (command == "asymptotics") {
            const std::int64_t last = asymptotics->count("--n-max") > 0 ? n_max : 1000;
            AsymptoticsTolerances at;
            at.rounding_ulps = tol.at("rounding_ulps");
            return emit_report(emit, asymptotics_report(params, n_min, last, at));
        }

        if (command == "converge") {
            const std::vector<std::int64_t> list =
                converge->count("--n-list") > 0 ? n_list : std::vector<std::int64_t>{8, 16, 32, 64, 128};
            const RealFunction f = parse_target(target, params);
            const QuadratureRule rule = gauss_legendre_rule(params, nodes > 0 ? nodes : 2048);
            ConvergenceTolerances ct;
            ct.l2_threshold = tol.at("l2_threshold");
            ct.monotone_slack = tol.at("monotone_slack");
            return emit_report(emit, convergence_study(params, f, list, rule, ct));
        }

        throw UsageError(fmt::format("unhandled subcommand '{}'", command));
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    }
}

}  // namespace defspec::cli
