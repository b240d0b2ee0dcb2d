#include "fbh/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fbh {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void EstimateReport::set_param(const std::string& key, double value) {
    params[key] = fmt17(value);
}

void EstimateReport::set_param(const std::string& key, const std::string& value) {
    params[key] = value;
}

std::string to_csv_header() {
    return "lemma_id,params,lhs,rhs,observed_exponent,theoretical_exponent,"
           "slack,pass,inconclusive";
}

std::string to_csv_row(const EstimateReport& r) {
    std::ostringstream out;
    out << r.lemma_id << ",";
    bool first = true;
    for (const auto& [k, v] : r.params) {
        if (!first) out << ";";
        out << k << "=" << v;
        first = false;
    }
    out << "," << fmt17(r.lhs) << "," << fmt17(r.rhs) << ",";
    out << (r.observed_exponent ? fmt17(*r.observed_exponent) : "") << ",";
    out << (r.theoretical_exponent ? fmt17(*r.theoretical_exponent) : "") << ",";
    out << fmt17(r.slack) << "," << (r.pass ? "1" : "0") << ","
        << (r.inconclusive ? "1" : "0");
    return out.str();
}

std::string to_json(const EstimateReport& r) {
    nlohmann::ordered_json j;
    j["lemma_id"] = r.lemma_id;
    j["params"] = r.params;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    if (r.observed_exponent) j["observed_exponent"] = *r.observed_exponent;
    if (r.theoretical_exponent)
        j["theoretical_exponent"] = *r.theoretical_exponent;
    j["slack"] = r.slack;
    j["pass"] = r.pass;
    j["inconclusive"] = r.inconclusive;
    return j.dump();
}

void write_reports_csv(const std::vector<EstimateReport>& reports,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_reports_csv: cannot open " + path);
    out << to_csv_header() << "\n";
    for (const auto& r : reports) out << to_csv_row(r) << "\n";
}

void write_reports_json(const std::vector<EstimateReport>& reports,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_reports_json: cannot open " + path);
    out << "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        out << "  " << to_json(reports[i]);
        if (i + 1 < reports.size()) out << ",";
        out << "\n";
    }
    out << "]\n";
}

std::string pass_matrix(const std::vector<EstimateReport>& reports) {
    std::ostringstream out;
    std::size_t width = 8;
    for (const auto& r : reports) width = std::max(width, r.lemma_id.size());
    for (const auto& r : reports) {
        out << r.lemma_id;
        out << std::string(width + 2 - r.lemma_id.size(), ' ');
        out << (r.inconclusive ? "INCONCLUSIVE" : (r.pass ? "pass" : "FAIL"));
        out << "\n";
    }
    return out.str();
}

}  // namespace fbh
