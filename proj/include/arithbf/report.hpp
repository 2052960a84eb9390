#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arithbf/bf_av.hpp"
#include "arithbf/bf_gm.hpp"
#include "arithbf/quadforms.hpp"

namespace arithbf::report {

// Rendering context shared by every report. JSON output is key-sorted and
// fully deterministic for a given result; elapsed_ms is the only field
// that varies between identical runs.
struct Meta {
    std::string format = "text";  // "text" or "json"
    bool quiet = false;
    std::int64_t elapsed_ms = 0;
    std::vector<std::string> notes;
};

std::string render_classgroup(const quadforms::ClassGroup& cg, std::int64_t w,
                              const Meta& meta);
std::string render_gm(const bf_gm::Report& r, const Meta& meta);
std::string render_av(const bf_av::Report& r, const Meta& meta);

// shared formatting helpers (also used by tests)
std::string format_factors(const abgroup::InvariantFactors& g);
std::string format_complex(double re, double im);

} // namespace arithbf::report
