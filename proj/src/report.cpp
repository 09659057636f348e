#include "polygreen/report.h"

#include <cstdio>

namespace polygreen {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string scan_csv(const ScanReport& report) {
    std::string out = "epsilon,statistic,samples,seed\n";
    for (std::size_t i = 0; i < report.statistic.size(); ++i) {
        out += format_double(report.epsilon_grid[i]) + ',' + format_double(report.statistic[i]) + ',' +
               std::to_string(report.sample_count) + ',' + std::to_string(report.seed) + '\n';
    }
    return out;
}

std::string glue_csv(const std::vector<GlueReport>& reports) {
    std::string out = "epsilon,delta,sup_residual,samples,seed\n";
    for (const GlueReport& r : reports)
        out += format_double(r.epsilon) + ',' + format_double(r.delta) + ',' + format_double(r.sup_residual) + ',' +
               std::to_string(r.samples) + ',' + std::to_string(r.seed) + '\n';
    return out;
}

std::string pairs_csv(const std::vector<PairRecord>& pairs) {
    const int n = pairs.empty() ? 0 : pairs.front().x.dim();
    std::string out = "epsilon";
    for (int i = 0; i < n; ++i) out += ",x" + std::to_string(i);
    for (int i = 0; i < n; ++i) out += ",y" + std::to_string(i);
    out += ",value,flagged\n";
    for (const PairRecord& p : pairs) {
        out += format_double(p.epsilon);
        for (int i = 0; i < n; ++i) out += ',' + format_double(p.x[i]);
        for (int i = 0; i < n; ++i) out += ',' + format_double(p.y[i]);
        out += ',' + format_double(p.value) + ',' + (p.flagged ? "1" : "0") + '\n';
    }
    return out;
}

nlohmann::json scan_json(const ScanReport& report, const nlohmann::json& config) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < report.statistic.size(); ++i)
        rows.push_back({{"epsilon", report.epsilon_grid[i]}, {"statistic", report.statistic[i]}});
    return {{"config", config},
            {"metadata", report.metadata},
            {"samples", report.sample_count},
            {"seed", report.seed},
            {"flagged", report.flagged},
            {"rows", rows}};
}

nlohmann::json glue_json(const std::vector<GlueReport>& reports, const nlohmann::json& config) {
    nlohmann::json rows = nlohmann::json::array();
    int flagged = 0;
    for (const GlueReport& r : reports) {
        rows.push_back({{"epsilon", r.epsilon},
                        {"delta", r.delta},
                        {"sup_residual", r.sup_residual},
                        {"samples", r.samples},
                        {"seed", r.seed}});
        flagged += r.flagged;
    }
    return {{"config", config}, {"flagged", flagged}, {"rows", rows}};
}

nlohmann::json evaluation_json(const GreenEvaluation& e) {
    return {{"value", e.value},
            {"truncation_estimate", e.truncation_estimate},
            {"modes_used", e.modes_used},
            {"converged", e.converged}};
}

}  // namespace polygreen
