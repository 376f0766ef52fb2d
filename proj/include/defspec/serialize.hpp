#pragma once

#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "defspec/analytic_spectrum.hpp"
#include "defspec/experiments.hpp"
#include "defspec/fd_solver.hpp"
#include "defspec/quadrature_grid.hpp"
#include "defspec/transform.hpp"

namespace defspec {

using Json = nlohmann::ordered_json;

/// 17 significant digits: enough to round-trip any double.
std::string format_real(double value);

// CSV writers. Numbers use format_real; rows end in '\n'.
void write_sampled_function_csv(std::ostream& out, const SampledFunction& sf);  // v,f
void write_coefficients_csv(std::ostream& out, const CoefficientVector& coeffs);  // n,a_n
void write_modes_csv(std::ostream& out, const std::vector<Mode>& modes);  // n,k_n,C_n
void write_gram_csv(std::ostream& out, const SquareMatrix& gram);  // n,0,1,...,N
void write_fd_report_csv(std::ostream& out, const FDSpectrumReport& report);
void write_experiment_csv(std::ostream& out, const ExperimentReport& report);

/// Parses `n,a_n` CSV. Rows must number n = 0, 1, 2, ... consecutively.
/// FormatError carries the 1-based line number of the first offending line.
CoefficientVector parse_coefficients(std::istream& in, const OperatorParams& params);
CoefficientVector read_coefficients(const std::filesystem::path& path, const OperatorParams& params);

Json to_json(const OperatorParams& params);
Json to_json(const CriticalIndexReport& report);
Json to_json(const FDSpectrumReport& report);
Json to_json(const RefinementStudy& study);
Json to_json(const ExperimentReport& report);

}  // namespace defspec
