#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>

#include "kamreduce/kam_driver.hpp"
#include "kamreduce/problem.hpp"
#include "kamreduce/verifier.hpp"

namespace kam {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "v1";

// {"n", "kind", "shape": [r, c], "coeffs": [{"k": [...], "re": [...], "im": [...]}]}
// with row-major flattening; doubles round-trip exactly.
Json to_json(const FourierSeries& f);
FourierSeries series_from_json(const Json& j);
// Reads a series whose shape is known from context; "n", "kind", "shape" optional.
FourierSeries series_from_json(const Json& j, int n, CoeffKind kind, int rows, int cols);

Json to_json(const QuadraticSymbol& q);
QuadraticSymbol symbol_from_json(const Json& j);

Json to_json(const RealBlocks& w);
RealBlocks real_blocks_from_json(const Json& j, int n, int d);

Json to_json(const ThetaAffineMap& m);
ThetaAffineMap map_from_json(const Json& j);

// Config parsing validates shapes and numeric windows; throws ConfigError.
Config config_from_json(const Json& j);
Json to_json(const Config& c);

Json to_json(const DiophantineReport& r);
Json to_json(const RunReport& r);
RunReport run_report_from_json(const Json& j);
Json to_json(const ConjugacyReport& c, double tolerance);

void write_steps_csv(std::ostream& os, const std::vector<StepDiagnostics>& h);
void write_defect_csv(std::ostream& os, const ConjugacyReport& c);
// Samples the real form of the map on a uniform grid: theta, M_r entries, c_r entries.
void write_map_csv(std::ostream& os, const ThetaAffineMap& m, int points_per_axis);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace kam
