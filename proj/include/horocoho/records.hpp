#pragma once

#include <optional>
#include <string>
#include <vector>

namespace horocoho {

/// One row of a parameter scan. Absent fields print as empty CSV cells;
/// present numbers print in full-precision scientific notation and re-parse
/// to the same double.
struct ExperimentRecord {
    std::optional<double> nu_abs;
    std::optional<double> lambda;
    std::optional<double> L;
    std::optional<double> s;
    std::optional<double> sigma;
    std::optional<double> epsilon;
    std::optional<double> norm_f;
    std::optional<double> norm_g;
    std::optional<double> norm_green;
    std::optional<double> ratio;
    std::optional<double> slope;
};

/// Columns, in order: nu_abs,lambda,L,s,sigma,epsilon,norm_f,norm_g,
/// norm_green,ratio,slope. Rows are sorted lexicographically by the
/// parameter tuple, so identical inputs give byte-identical files.
std::string render_csv(std::vector<ExperimentRecord> records);

void emit_csv(const std::vector<ExperimentRecord>& records,
              const std::string& path);

/// Full-precision scientific rendering used for every CSV number.
std::string format_full(double x);

} // namespace horocoho
