#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "padeforge/density.hpp"
#include "padeforge/geometry.hpp"
#include "padeforge/pade.hpp"
#include "padeforge/power_series.hpp"

namespace padeforge {

using json = nlohmann::json;

// Wire formats. Complex numbers are [re, im] pairs throughout.
//   series / polynomial: {"coeffs": [[re,im], ...]}
//   approximant:         {"p": int, "q": int, "num": [...], "den": [...]}, den[0] == [1,0]
//   region:              {"kind": "whole_plane" | "disk" | "plane_minus_disks" | "rect", ...}
// Malformed documents throw Error(ParseError).

json to_json(cplx z);
cplx complex_from_json(const json& j);

json coeffs_to_json(std::span<const cplx> coeffs);
std::vector<cplx> coeffs_from_json(const json& j);

json to_json(const ComplexPoly& p);
ComplexPoly poly_from_json(const json& j);

json to_json(const TaylorSeries& s);
TaylorSeries series_from_json(const json& j);

json to_json(const PadeApproximant& r);
PadeApproximant approximant_from_json(const json& j);

json to_json(const Region& r);
Region region_from_json(const json& j);

/// {"kind":"polynomial","coeffs":[...]} or {"kind":"rational","num":[...],"den":[...]};
/// a bare {"coeffs":[...]} reads as a polynomial.
json to_json(const Target& t);
Target target_from_json(const json& j);

json to_json(const DensityCertificate& cert);
DensityCertificate certificate_from_json(const json& j);

/// {"pass": bool, "clauses": [{"clause","bound","measured","pass"[,"detail"]}, ...]}
json to_json(const VerificationReport& report);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace padeforge
