#pragma once

#include <string>

#include <json.hpp>

#include "nsbox/correlation.hpp"
#include "nsbox/polytope.hpp"

namespace nsbox {

using Json = nlohmann::ordered_json;

// Box file layout:
//   { "schema": 1,
//     "scenario": {"nx":2,"ny":2,"na":2,"nb":2},
//     "mode": "rational" | "float",
//     "table": [x][y][a][b] }   rationals as "num/den" strings, floats as numbers
//
// Rational-mode round-trips are bit-exact.
Json box_to_json(const Correlation& corr);
Correlation box_from_json(const Json& j);

Correlation read_box_file(const std::string& path);
void write_box_file(const std::string& path, const Correlation& corr);

Json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const Json& j);

Json certificate_to_json(const NonlocalityCertificate& c);

} // namespace nsbox
