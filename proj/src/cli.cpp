#include "arithbf/cli.hpp"

#include <chrono>
#include <ostream>
#include <stdexcept>

#include "arithbf/bf_av.hpp"
#include "arithbf/bf_gm.hpp"
#include "arithbf/errors.hpp"
#include "arithbf/modelfile.hpp"
#include "arithbf/quadforms.hpp"
#include "arithbf/report.hpp"
#include "arithbf/selftest.hpp"

namespace arithbf::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point t0)
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

report::Meta make_meta(const CommonOptions& common, Clock::time_point t0)
{
    report::Meta m;
    m.format = common.format;
    m.quiet = common.quiet;
    m.elapsed_ms = ms_since(t0);
    return m;
}

void check_common(const CommonOptions& common)
{
    if (common.format != "text" && common.format != "json")
        throw std::invalid_argument("format must be \"text\" or \"json\"");
    if (common.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
    if (common.budget_pairs < 1 || common.budget_n < 1 || common.budget_disc < 1)
        throw std::invalid_argument("budgets must be positive");
}

void check_n_budget(std::int64_t n, const CommonOptions& common)
{
    if (n > common.budget_n)
        throw BudgetExceeded("n = " + std::to_string(n) + " exceeds the budget of " +
                             std::to_string(common.budget_n) +
                             " (raise with --budget-n)");
}

void check_disc_budget(std::int64_t disc, const CommonOptions& common)
{
    const std::int64_t mag = disc < 0 ? -disc : disc;
    if (mag > common.budget_disc)
        throw BudgetExceeded("|disc| = " + std::to_string(mag) +
                             " exceeds the budget of " + std::to_string(common.budget_disc) +
                             " (raise with --budget-disc)");
}

bf_gm::Mode parse_mode(const std::string& mode)
{
    if (mode == "brute") return bf_gm::Mode::brute;
    if (mode == "closed") return bf_gm::Mode::closed;
    if (mode == "both") return bf_gm::Mode::both;
    throw std::invalid_argument("mode must be one of brute, closed, both (got \"" + mode +
                                "\")");
}

// Shared exception-to-exit-code mapping; the body returns the exit code of
// the successful path.
template <typename Body>
int guarded(std::ostream& err, Body&& body)
{
    try {
        return body();
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int run_classgroup(const ClassgroupRequest& req, const CommonOptions& common,
                   std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        check_common(common);
        check_disc_budget(req.disc, common);
        const auto t0 = Clock::now();
        const quadforms::Discriminant d(req.disc);
        const quadforms::ClassGroup cg = quadforms::class_group(d);
        const std::int64_t w = quadforms::unit_data(d);
        out << report::render_classgroup(cg, w, make_meta(common, t0));
        return 0;
    });
}

int run_gm(const GmRequest& req, const CommonOptions& common, std::ostream& out,
           std::ostream& err)
{
    return guarded(err, [&] {
        check_common(common);
        if (req.disc.has_value() == req.field_data_path.has_value())
            throw std::invalid_argument("need exactly one of --disc and --field-data");

        const auto t0 = Clock::now();
        bf_gm::FieldData fd;
        bool ingested = false;
        if (req.disc) {
            check_disc_budget(*req.disc, common);
            fd = bf_gm::field_from_discriminant(*req.disc);
        } else {
            fd = modelfile::load_field_data(*req.field_data_path);
            ingested = true;
        }
        check_n_budget(req.n, common);

        bf_gm::Options o;
        o.mode = parse_mode(req.mode);
        o.unit_shortcut = !req.no_shortcut;
        o.jobs = common.jobs;
        o.pair_budget = common.budget_pairs;
        o.debug_zero_pairing = req.debug_zero_pairing;

        const bf_gm::Report r = bf_gm::path_integral_gm({fd, req.n}, o);

        report::Meta meta = make_meta(common, t0);
        if (ingested)
            meta.notes.push_back(
                "field data was ingested from a file: it is checked for internal "
                "consistency only, not verified against an actual field");
        out << report::render_gm(r, meta);
        return r.match ? 0 : 1;
    });
}

int run_av(const AvRequest& req, const CommonOptions& common, std::ostream& out,
           std::ostream& err)
{
    return guarded(err, [&] {
        check_common(common);
        if (req.model_path.has_value() == req.random)
            throw std::invalid_argument("need exactly one of --model and --random");
        if (req.n && !req.random)
            throw std::invalid_argument("--n only applies with --random");
        if (req.random && !req.n)
            throw std::invalid_argument("--random needs --n");

        const auto t0 = Clock::now();
        bf_av::AVModel m;
        if (req.random) {
            check_n_budget(*req.n, common);
            m = bf_av::random_model(req.seed, *req.n);
        } else {
            m = modelfile::load_av_model(*req.model_path);
            check_n_budget(m.n, common);
        }

        bf_av::Options o;
        o.jobs = common.jobs;
        o.pair_budget = common.budget_pairs;
        o.debug_zero_pairing = req.debug_zero_pairing;

        const bf_av::Report r = bf_av::path_integral_av(bf_av::AVInstance::build(m), o);
        out << report::render_av(r, make_meta(common, t0));
        return r.match ? 0 : 1;
    });
}

int run_selftest(const SelftestRequest& req, const CommonOptions& common,
                 std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        check_common(common);
        selftest::BatteryOptions o;
        o.full = req.full;
        o.debug_zero_pairing = req.debug_zero_pairing;
        const int failures = selftest::print_battery(selftest::run_battery(o), out);
        return failures == 0 ? 0 : 1;
    });
}

} // namespace arithbf::cli
