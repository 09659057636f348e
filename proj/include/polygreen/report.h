#pragma once

#include "polygreen/annulus_green.h"
#include "polygreen/estimator.h"

#include <json.hpp>

#include <string>
#include <vector>

namespace polygreen {

/// %.17g, so every double round-trips.
std::string format_double(double v);

/// Header `epsilon,statistic,samples,seed`, one row per hole scale, LF endings.
std::string scan_csv(const ScanReport& report);

/// Header `epsilon,delta,sup_residual,samples,seed` and one row per report.
std::string glue_csv(const std::vector<GlueReport>& reports);

/// One row per probe: epsilon,x0..x{n-1},y0..y{n-1},value,flagged.
std::string pairs_csv(const std::vector<PairRecord>& pairs);

nlohmann::json scan_json(const ScanReport& report, const nlohmann::json& config);
nlohmann::json glue_json(const std::vector<GlueReport>& reports, const nlohmann::json& config);
nlohmann::json evaluation_json(const GreenEvaluation& e);

}  // namespace polygreen
