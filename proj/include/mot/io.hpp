#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "mot/coupling.hpp"
#include "mot/costs.hpp"
#include "mot/lp.hpp"
#include "mot/measure.hpp"

// Wire formats:
//   measure JSON   {"atoms":[{"x":<number|"p/q">,"w":<number|"p/q">}]}
//   coupling JSON  {"entries":[{"x":...,"y":...,"w":...}]}
//   dual JSON      {"phi":[...],"psi":[...],"delta":[...],"gap":...,"min_margin":...}
//   separable file {"phi":[...],"psi":[...]}  (aligned with marginal atom order)
//   measure CSV    rows "x,w"; curtain maps CSV rows "x,T1,T2" (T2 empty for
//                  single-atom rows)
// String rationals "p/q" select exact parsing; plain numbers are exact too
// when they are integers, and are taken at their binary64 value otherwise.

namespace mot::io {

using json = nlohmann::json;

MeasureD measure_from_json_d(const json& j);
MeasureQ measure_from_json_q(const json& j);
json measure_to_json(const MeasureD& m);
json measure_to_json(const MeasureQ& m);

CouplingD coupling_from_json_d(const json& j);
CouplingQ coupling_from_json_q(const json& j);
json coupling_to_json(const CouplingD& pi);
json coupling_to_json(const CouplingQ& pi);

json dual_to_json(const DualCertificate<double>& dual, const MeasureD& mu, const MeasureD& nu);
json dual_to_json(const DualCertificate<Rational>& dual, const MeasureQ& mu, const MeasureQ& nu);

// Reads {"phi":[...],"psi":[...]} from spec.sep_file into the spec tables.
void load_separable_tables(CostSpec& spec);

// File helpers; throw mot::ParseError with position info on malformed JSON.
json load_json(const std::string& path);
void save_json(const json& j, const std::string& path);

std::string measure_to_csv(const MeasureD& m);

MeasureD measure_to_double(const MeasureQ& m);
MeasureQ measure_to_exact(const MeasureD& m);

}  // namespace mot::io
