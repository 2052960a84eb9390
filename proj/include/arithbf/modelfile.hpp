#pragma once

#include <string>

#include "arithbf/bf_av.hpp"
#include "arithbf/bf_gm.hpp"

namespace arithbf::modelfile {

// Parsers for the two ingestion formats. Malformed JSON, missing fields,
// and violated invariants all surface as std::invalid_argument carrying
// the origin (file name) and the failed condition.
//
// Field data file:
//   { "label": "...", "class_group_invariants": [2, 4],
//     "unit_rank": 2, "roots_of_unity_order": 2, "degree": 6 }
//
// Model file:
//   { "n": 3, "mw_a": [3], "mw_b": [], "sha_a": [3, 3], "sha_b": [3, 3],
//     "delta": "canonical" | {"matrix": [[1,0],[0,1]]} | {"seed": 7} }

bf_gm::FieldData parse_field_data(const std::string& text, const std::string& origin);
bf_av::AVModel parse_av_model(const std::string& text, const std::string& origin);

bf_gm::FieldData load_field_data(const std::string& path);
bf_av::AVModel load_av_model(const std::string& path);

} // namespace arithbf::modelfile
