#ifndef CONVAC_ARCH_JSON_HPP
#define CONVAC_ARCH_JSON_HPP

#include <string>

#include <json.hpp>

#include "convac/analysis.hpp"
#include "convac/network.hpp"

namespace convac {

// On-disk architecture document:
//   {"M": 2, "H": 4, "layers": [{"R": 3, "S": 1, "D": 2, "shared": true}, ...]}
// Parsing is strict; unknown fields are rejected.
NetworkSpec arch_from_json(const nlohmann::json& doc);
NetworkSpec arch_from_string(const std::string& text);
NetworkSpec arch_from_file(const std::string& path);
nlohmann::json arch_to_json(const NetworkSpec& spec);

// Parameter files hold one object per layer with one entry per kernel:
//   {"layers": [{"shared": true, "kernels": [{"channel": 0, "w": [...], "b": [...]}]}]}
// Unshared layers add "u" and "v" to each kernel. Exact values serialize as
// "p/q" strings; plain JSON numbers are accepted when loading float params.
nlohmann::json params_to_json(const NetworkParams<Rational>& params);
NetworkParams<Rational> params_from_json(const nlohmann::json& doc, const NetworkSpec& spec);
NetworkParams<double> params_from_json_double(const nlohmann::json& doc, const NetworkSpec& spec);

// Per-layer arithmetic plus the bound section of the analysis report.
nlohmann::json bound_report_to_json(const BoundReport& report);
nlohmann::json analysis_to_json(const NetworkSpec& spec);

}  // namespace convac

#endif
