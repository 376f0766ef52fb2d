#include "defspec/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "defspec/error.hpp"

namespace defspec {
namespace {

// Integers up to 2^53 print as JSON numbers; larger ones as decimal strings.
Json big_index_json(const BigIndex& value) {
    if (value >= 0 && value <= BigIndex(9007199254740992LL)) {
        return static_cast<std::int64_t>(value);
    }
    return value.str();
}

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.back() == '\r' || text.back() == ' ' || text.back() == '\t')) {
        text.remove_suffix(1);
    }
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    return text;
}

}  // namespace

std::string format_real(double value) {
    return fmt::format("{:.17g}", value);
}

void write_sampled_function_csv(std::ostream& out, const SampledFunction& sf) {
    out << "v,f\n";
    for (std::size_t i = 0; i < sf.size(); ++i) {
        out << format_real(sf.grid().points()[i]) << ',' << format_real(sf.values()[i]) << '\n';
    }
}

void write_coefficients_csv(std::ostream& out, const CoefficientVector& coeffs) {
    out << "n,a_n\n";
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        out << n << ',' << format_real(coeffs.a()[n]) << '\n';
    }
}

void write_modes_csv(std::ostream& out, const std::vector<Mode>& modes) {
    out << "n,k_n,C_n\n";
    for (const Mode& mode : modes) {
        out << mode.n << ',' << format_real(mode.k_n) << ',' << format_real(mode.C_n) << '\n';
    }
}

void write_gram_csv(std::ostream& out, const SquareMatrix& gram) {
    out << 'n';
    for (std::size_t m = 0; m < gram.dim; ++m) {
        out << ',' << m;
    }
    out << '\n';
    for (std::size_t n = 0; n < gram.dim; ++n) {
        out << n;
        for (std::size_t m = 0; m < gram.dim; ++m) {
            out << ',' << format_real(gram(n, m));
        }
        out << '\n';
    }
}

void write_fd_report_csv(std::ostream& out, const FDSpectrumReport& report) {
    out << "n,lambda_fd,lambda_analytic,abs_err,rel_err\n";
    for (std::size_t n = 0; n < report.eigenvalues_fd.size(); ++n) {
        out << n << ',' << format_real(report.eigenvalues_fd[n]) << ','
            << format_real(report.eigenvalues_analytic[n]) << ',' << format_real(report.abs_errors[n])
            << ',' << format_real(report.rel_errors[n]) << '\n';
    }
}

void write_experiment_csv(std::ostream& out, const ExperimentReport& report) {
    std::size_t rows = 0;
    for (std::size_t i = 0; i < report.series.size(); ++i) {
        out << (i == 0 ? "" : ",") << report.series[i].first;
        rows = std::max(rows, report.series[i].second.size());
    }
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < report.series.size(); ++i) {
            if (i > 0) {
                out << ',';
            }
            const auto& values = report.series[i].second;
            if (r < values.size()) {
                out << format_real(values[r]);
            }
        }
        out << '\n';
    }
}

CoefficientVector parse_coefficients(std::istream& in, const OperatorParams& params) {
    std::string line;
    std::size_t line_number = 0;
    if (!std::getline(in, line)) {
        throw FormatError("line 1: empty coefficient file, expected header n,a_n");
    }
    ++line_number;
    if (trim(line) != "n,a_n") {
        throw FormatError(fmt::format("line 1: expected header n,a_n (got '{}')", trim(line)));
    }
    std::vector<double> a;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string_view row = trim(line);
        if (row.empty()) {
            continue;
        }
        const auto comma = row.find(',');
        if (comma == std::string_view::npos) {
            throw FormatError(fmt::format("line {}: expected two fields n,a_n", line_number));
        }
        const std::string_view index_text = trim(row.substr(0, comma));
        const std::string_view value_text = trim(row.substr(comma + 1));

        std::int64_t index = 0;
        auto [index_end, index_err] =
            std::from_chars(index_text.data(), index_text.data() + index_text.size(), index);
        if (index_err != std::errc() || index_end != index_text.data() + index_text.size()) {
            throw FormatError(fmt::format("line {}: malformed index '{}'", line_number, index_text));
        }
        const auto expected = static_cast<std::int64_t>(a.size());
        if (index < expected) {
            throw FormatError(fmt::format("line {}: duplicate index {}", line_number, index));
        }
        if (index > expected) {
            throw FormatError(fmt::format("line {}: index {} skips expected index {}", line_number,
                                          index, expected));
        }

        double value = 0.0;
        auto [value_end, value_err] =
            std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
        if (value_err != std::errc() || value_end != value_text.data() + value_text.size()) {
            throw FormatError(fmt::format("line {}: malformed value '{}'", line_number, value_text));
        }
        if (!std::isfinite(value)) {
            throw FormatError(fmt::format("line {}: coefficient a_{} is not finite", line_number, index));
        }
        a.push_back(value);
    }
    if (a.empty()) {
        throw FormatError(fmt::format("line {}: no coefficient rows", line_number + 1));
    }
    return CoefficientVector(params, std::move(a));
}

CoefficientVector read_coefficients(const std::filesystem::path& path, const OperatorParams& params) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError(fmt::format("cannot open coefficient file '{}'", path.string()));
    }
    return parse_coefficients(in, params);
}

Json to_json(const OperatorParams& params) {
    Json out;
    out["unit_mode"] = to_string(params.unit_mode());
    out["hbar"] = params.hbar();
    out["c"] = params.c();
    out["v_c"] = params.v_c();
    out["gamma"] = params.gamma();
    return out;
}

Json to_json(const CriticalIndexReport& report) {
    Json out;
    out["x"] = report.x;
    out["n_star_paper"] = big_index_json(report.n_star_paper);
    out["n_star_exact"] = report.n_star_exact ? big_index_json(*report.n_star_exact) : Json("none");
    out["agree"] = report.agree;
    out["method"] =
        report.method == CriticalIndexMethod::sign_scan ? "sign_scan" : "quantization_bound";
    return out;
}

Json to_json(const FDSpectrumReport& report) {
    Json out;
    out["grid_size"] = report.grid_size;
    out["h"] = report.h;
    out["convergence_order"] = report.convergence_order ? Json(*report.convergence_order) : Json();
    Json rows = Json::array();
    for (std::size_t n = 0; n < report.eigenvalues_fd.size(); ++n) {
        rows.push_back({{"n", n},
                        {"lambda_fd", report.eigenvalues_fd[n]},
                        {"lambda_analytic", report.eigenvalues_analytic[n]},
                        {"abs_err", report.abs_errors[n]},
                        {"rel_err", report.rel_errors[n]}});
    }
    out["modes"] = std::move(rows);
    return out;
}

Json to_json(const RefinementStudy& study) {
    Json out;
    Json reports = Json::array();
    for (const auto& report : study.reports) {
        reports.push_back(to_json(report));
    }
    out["reports"] = std::move(reports);
    out["orders"] = study.orders;
    return out;
}

Json to_json(const ExperimentReport& report) {
    Json out;
    out["name"] = report.name;
    out["inputs"] = report.inputs;
    Json tolerances = Json::object();
    for (const auto& [key, value] : report.tolerances) {
        tolerances[key] = value;
    }
    out["tolerances"] = std::move(tolerances);
    Json metrics = Json::object();
    for (const auto& [key, value] : report.metrics) {
        metrics[key] = value;
    }
    out["metrics"] = std::move(metrics);
    Json series = Json::object();
    for (const auto& [key, values] : report.series) {
        series[key] = values;
    }
    out["series"] = std::move(series);
    out["verdict"] = to_string(report.verdict);
    return out;
}

}  // namespace defspec
