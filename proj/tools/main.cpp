#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "arithbf/cli.hpp"

namespace {

// Flags every computing subcommand shares. The debug flag is the
// self-test negative control; it stays out of --help.
// --budget-pairs goes through a string because its value can exceed
// any machine integer.
void add_common(CLI::App* sub, arithbf::cli::CommonOptions& common,
                std::string& budget_pairs_str)
{
    sub->add_option("--format", common.format, "output format: text or json")
        ->default_str("text");
    sub->add_option("--jobs", common.jobs, "worker threads for the enumeration")
        ->default_val(1);
    sub->add_flag("--quiet", common.quiet, "print only the essential result lines");
    sub->add_option("--budget-pairs", budget_pairs_str,
                    "largest pair count the brute-force sum will attempt")
        ->check(CLI::Validator(
            [](std::string& s) -> std::string {
                if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
                    return "not a nonnegative integer: " + s;
                return {};
            },
            "UINT"));
    sub->add_option("--budget-n", common.budget_n, "largest accepted n");
    sub->add_option("--budget-disc", common.budget_disc,
                    "largest accepted |discriminant|");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{
        "arithbf: exact brute-force evaluation of arithmetic BF path integrals\n"
        "over rings of integers, checked against their closed-form values"};
    app.require_subcommand(1);

    arithbf::cli::CommonOptions common;
    std::string budget_pairs_str;

    auto* cg = app.add_subcommand("classgroup",
                                  "class group of an imaginary quadratic field, via "
                                  "reduced binary quadratic forms");
    arithbf::cli::ClassgroupRequest cg_req;
    cg->add_option("--disc", cg_req.disc, "fundamental discriminant, negative")
        ->required();
    add_common(cg, common, budget_pairs_str);

    auto* gm = app.add_subcommand("gm",
                                  "multiplicative-group path integral: brute-force "
                                  "phase sum vs. the closed-form product");
    arithbf::cli::GmRequest gm_req;
    std::int64_t gm_disc = 0;
    std::string gm_field_data;
    auto* gm_disc_opt =
        gm->add_option("--disc", gm_disc, "fundamental discriminant of the field");
    auto* gm_fd_opt = gm->add_option("--field-data", gm_field_data,
                                     "JSON file with the field invariants");
    gm_disc_opt->excludes(gm_fd_opt);
    gm->add_option("--n", gm_req.n, "level of the pairing")->required();
    gm->add_option("--mode", gm_req.mode, "brute, closed, or both")->default_str("both");
    gm->add_flag("--no-shortcut", gm_req.no_shortcut,
                 "actually loop over unit classes instead of scaling by their count");
    gm->add_flag("--debug-zero-pairing", gm_req.debug_zero_pairing)->group("");
    add_common(gm, common, budget_pairs_str);

    auto* av = app.add_subcommand("av",
                                  "dual-pair path integral on a synthetic "
                                  "Selmer-group model");
    arithbf::cli::AvRequest av_req;
    std::string av_model;
    std::int64_t av_n = 0;
    auto* av_model_opt =
        av->add_option("--model", av_model, "JSON file describing the model");
    auto* av_random_opt =
        av->add_flag("--random", av_req.random, "draw a reproducible random model");
    av->add_option("--seed", av_req.seed, "seed for --random")->needs(av_random_opt);
    auto* av_n_opt = av->add_option("--n", av_n, "level for --random");
    av_model_opt->excludes(av_random_opt)->excludes(av_n_opt);
    av->add_flag("--debug-zero-pairing", av_req.debug_zero_pairing)->group("");
    add_common(av, common, budget_pairs_str);

    auto* st = app.add_subcommand("selftest", "run the verification battery");
    arithbf::cli::SelftestRequest st_req;
    std::string scope = "quick";
    st->add_option("scope", scope, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    st->add_flag("--debug-zero-pairing", st_req.debug_zero_pairing)->group("");
    add_common(st, common, budget_pairs_str);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (!budget_pairs_str.empty())
        common.budget_pairs = arithbf::BigInt(budget_pairs_str);

    if (app.got_subcommand(cg))
        return arithbf::cli::run_classgroup(cg_req, common, std::cout, std::cerr);
    if (app.got_subcommand(gm)) {
        if (gm_disc_opt->count() > 0) gm_req.disc = gm_disc;
        if (gm_fd_opt->count() > 0) gm_req.field_data_path = gm_field_data;
        return arithbf::cli::run_gm(gm_req, common, std::cout, std::cerr);
    }
    if (app.got_subcommand(av)) {
        if (av_model_opt->count() > 0) av_req.model_path = av_model;
        if (av_n_opt->count() > 0) av_req.n = av_n;
        return arithbf::cli::run_av(av_req, common, std::cout, std::cerr);
    }
    st_req.full = scope == "full";
    return arithbf::cli::run_selftest(st_req, common, std::cout, std::cerr);
}
