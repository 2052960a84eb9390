#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "arithbf/bigint.hpp"

namespace arithbf::cli {

// Flags shared by every subcommand. The budgets guard the enumeration
// loops; anything over budget exits 3 instead of grinding.
struct CommonOptions {
    std::string format = "text";  // "text" or "json"
    int jobs = 1;
    bool quiet = false;
    BigInt budget_pairs = 100000000;
    std::int64_t budget_n = 1000;
    std::int64_t budget_disc = 1000000;
};

struct ClassgroupRequest {
    std::int64_t disc = -3;
};

struct GmRequest {
    std::optional<std::int64_t> disc;
    std::optional<std::string> field_data_path;
    std::int64_t n = 1;
    std::string mode = "both";  // "brute", "closed", "both"
    bool no_shortcut = false;
    bool debug_zero_pairing = false;
};

struct AvRequest {
    std::optional<std::string> model_path;
    bool random = false;
    std::uint64_t seed = 0;
    std::optional<std::int64_t> n;
    bool debug_zero_pairing = false;
};

struct SelftestRequest {
    bool full = false;
    bool debug_zero_pairing = false;
};

// Each runner writes its report to `out`, diagnostics to `err`, and maps
// outcomes to the exit-code contract: 0 match/pass, 1 identity mismatch,
// 2 input error, 3 budget exceeded. Malformed input never escapes as an
// unhandled exception.
int run_classgroup(const ClassgroupRequest& req, const CommonOptions& common,
                   std::ostream& out, std::ostream& err);
int run_gm(const GmRequest& req, const CommonOptions& common, std::ostream& out,
           std::ostream& err);
int run_av(const AvRequest& req, const CommonOptions& common, std::ostream& out,
           std::ostream& err);
int run_selftest(const SelftestRequest& req, const CommonOptions& common,
                 std::ostream& out, std::ostream& err);

} // namespace arithbf::cli
