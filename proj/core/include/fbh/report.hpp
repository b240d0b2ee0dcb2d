#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fbh {

/// Result of one quantitative estimate check: an observed left-hand side
/// against a bound (and, for rate checks, a fitted exponent against the
/// predicted one).
struct EstimateReport {
    std::string lemma_id;
    std::map<std::string, std::string> params;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<double> observed_exponent;
    std::optional<double> theoretical_exponent;
    double slack = 0.0;
    bool pass = false;
    bool inconclusive = false;  // e.g. rate fit with poor R^2

    void set_param(const std::string& key, double value);
    void set_param(const std::string& key, const std::string& value);
};

std::string to_csv_header();
std::string to_csv_row(const EstimateReport& r);
std::string to_json(const EstimateReport& r);

void write_reports_csv(const std::vector<EstimateReport>& reports,
                       const std::string& path);
void write_reports_json(const std::vector<EstimateReport>& reports,
                        const std::string& path);
/// Plain-text lemma -> pass matrix, one line per report.
std::string pass_matrix(const std::vector<EstimateReport>& reports);

}  // namespace fbh
