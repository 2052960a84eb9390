#include "arithbf/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace arithbf::report {

using nlohmann::json;

namespace {

void check_format(const Meta& meta)
{
    if (meta.format != "text" && meta.format != "json")
        throw std::invalid_argument("format must be 'text' or 'json'");
}

// counts can outgrow doubles and int64, so they travel as decimal strings
json big(const BigInt& v) { return big_to_string(v); }

json factors_json(const abgroup::InvariantFactors& g)
{
    return json(g.factors());
}

json form_json(const quadforms::QuadForm& f)
{
    return json::array({f.a, f.b, f.c});
}

json phase_support_json(const cyclo::PhaseVector& pv)
{
    json o = json::object();
    for (std::size_t k = 0; k < pv.counts.size(); ++k)
        if (pv.counts[k] != 0) o[std::to_string(k)] = big_to_string(pv.counts[k]);
    return o;
}

std::string phase_support_text(const cyclo::PhaseVector& pv)
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < pv.counts.size(); ++k) {
        if (pv.counts[k] == 0) continue;
        if (!first) os << "  ";
        os << k << "/" << pv.modulus << ":" << big_to_string(pv.counts[k]);
        first = false;
    }
    return os.str();
}

const char* yesno(bool b) { return b ? "yes" : "no"; }

void append_notes_text(std::ostringstream& os, const Meta& meta)
{
    for (const std::string& n : meta.notes) os << "note: " << n << "\n";
}

} // namespace

std::string format_factors(const abgroup::InvariantFactors& g)
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < g.factors().size(); ++i) {
        if (i) os << ", ";
        os << g.factors()[i];
    }
    os << "]";
    return os.str();
}

std::string format_complex(double re, double im)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f%+.6fi", re, im);
    return buf;
}

std::string render_classgroup(const quadforms::ClassGroup& cg, std::int64_t w,
                              const Meta& meta)
{
    check_format(meta);
    if (meta.format == "json") {
        json j;
        j["command"] = "classgroup";
        j["discriminant"] = cg.discriminant;
        j["class_number"] = cg.class_number();
        j["invariant_factors"] = factors_json(cg.structure);
        j["roots_of_unity_order"] = w;
        json forms = json::array();
        for (const auto& f : cg.reduced_forms) forms.push_back(form_json(f));
        j["forms"] = forms;
        json gens = json::array();
        for (const auto& f : cg.generators) gens.push_back(form_json(f));
        j["generators"] = gens;
        j["elapsed_ms"] = meta.elapsed_ms;
        j["notes"] = meta.notes;
        return j.dump(2) + "\n";
    }

    std::ostringstream os;
    if (meta.quiet) {
        os << "disc " << cg.discriminant << ": h=" << cg.class_number() << "  factors "
           << format_factors(cg.structure) << "  w=" << w << "\n";
        return os.str();
    }
    os << "discriminant: " << cg.discriminant << "\n";
    os << "class number: " << cg.class_number() << "\n";
    os << "invariant factors: " << format_factors(cg.structure) << "\n";
    os << "roots of unity: " << w << "\n";
    os << "reduced forms:\n";
    for (const auto& f : cg.reduced_forms) os << "  " << quadforms::to_string(f) << "\n";
    if (!cg.generators.empty()) {
        os << "generators (one per invariant factor):\n";
        for (const auto& f : cg.generators) os << "  " << quadforms::to_string(f) << "\n";
    }
    append_notes_text(os, meta);
    return os.str();
}

std::string render_gm(const bf_gm::Report& r, const Meta& meta)
{
    check_format(meta);
    const auto& fd = r.instance.field;
    if (meta.format == "json") {
        json j;
        j["command"] = "gm";
        j["field"] = {{"label", fd.label},
                      {"class_group", factors_json(fd.cl)},
                      {"unit_rank", fd.unit_rank},
                      {"roots_of_unity_order", fd.w},
                      {"degree", fd.degree}};
        j["n"] = r.instance.n;
        j["cohomology_orders"] = {{"h0", big(r.orders.h0)},
                                  {"h1", big(r.orders.h1)},
                                  {"h2", big(r.orders.h2)},
                                  {"h3", big(r.orders.h3)}};
        j["closed_form"] = {{"value", big(r.closed.value)},
                            {"etale_factor", big(r.closed.etale_factor)},
                            {"unit_factor", big(r.closed.unit_factor)},
                            {"quotient_factor", big(r.closed.quotient_factor)},
                            {"stabilized", r.closed.stabilized
                                               ? json(big_to_string(*r.closed.stabilized))
                                               : json(nullptr)}};
        j["etale_count"] = big(r.etale);
        j["pair_count"] = big(r.pair_count);
        if (r.brute_value) {
            const auto z = cyclo::phase_sum_float(*r.phases);
            j["brute_force"] = {{"value", big(*r.brute_value)},
                                {"phase_support", phase_support_json(*r.phases)},
                                {"float_display", format_complex(z.real(), z.imag())}};
        } else {
            j["brute_force"] = nullptr;
        }
        j["match"] = r.match;
        j["elapsed_ms"] = meta.elapsed_ms;
        j["notes"] = meta.notes;
        return j.dump(2) + "\n";
    }

    std::ostringstream os;
    if (meta.quiet) {
        os << "gm " << fd.label << " n=" << r.instance.n << ": closed "
           << big_to_string(r.closed.value);
        if (r.brute_value) os << "  brute " << big_to_string(*r.brute_value);
        os << "  match " << yesno(r.match) << "\n";
        return os.str();
    }
    os << "field: " << fd.label << "\n";
    os << "class group: " << format_factors(fd.cl) << "  unit rank: " << fd.unit_rank
       << "  roots of unity: " << fd.w << "  degree: " << fd.degree << "\n";
    os << "n: " << r.instance.n << "\n";
    os << "cohomology orders: |H0|=" << big_to_string(r.orders.h0)
       << " |H1|=" << big_to_string(r.orders.h1) << " |H2|=" << big_to_string(r.orders.h2)
       << " |H3|=" << big_to_string(r.orders.h3) << "\n";
    os << "closed form: " << big_to_string(r.closed.value) << " = "
       << big_to_string(r.closed.etale_factor) << " (etale) x "
       << big_to_string(r.closed.unit_factor) << " (units) x "
       << big_to_string(r.closed.quotient_factor) << " (quotient)\n";
    if (r.closed.stabilized)
        os << "stabilized value: " << big_to_string(*r.closed.stabilized) << "\n";
    os << "etale count: " << big_to_string(r.etale) << "\n";
    os << "pair count: " << big_to_string(r.pair_count) << "\n";
    if (r.brute_value) {
        os << "brute force: " << big_to_string(*r.brute_value) << "\n";
        os << "phases: " << phase_support_text(*r.phases) << "\n";
        const auto z = cyclo::phase_sum_float(*r.phases);
        os << "float check: " << format_complex(z.real(), z.imag()) << "\n";
    }
    os << "match: " << yesno(r.match) << "\n";
    append_notes_text(os, meta);
    return os.str();
}

std::string render_av(const bf_av::Report& r, const Meta& meta)
{
    check_format(meta);
    const auto& m = r.model;
    if (meta.format == "json") {
        json j;
        j["command"] = "av";
        json delta;
        switch (m.delta.kind) {
            case bf_av::DeltaChoice::Kind::canonical: delta = {{"kind", "canonical"}}; break;
            case bf_av::DeltaChoice::Kind::matrix:
                delta = {{"kind", "matrix"}, {"matrix", m.delta.matrix}};
                break;
            case bf_av::DeltaChoice::Kind::seed:
                delta = {{"kind", "seed"}, {"seed", m.delta.seed}};
                break;
        }
        j["model"] = {{"n", m.n},
                      {"mw_a", factors_json(m.mw_a)},
                      {"mw_b", factors_json(m.mw_b)},
                      {"sha_a", factors_json(m.sha_a)},
                      {"sha_b", factors_json(m.sha_b)},
                      {"delta", delta}};
        j["closed_form"] = {{"value", big(r.closed_value)},
                            {"symmetric_value", big(r.closed_value_symmetric)}};
        j["pair_count"] = big(r.pair_count);
        if (r.brute_value) {
            const auto z = cyclo::phase_sum_float(*r.phases);
            j["brute_force"] = {{"value", big(*r.brute_value)},
                                {"phase_support", phase_support_json(*r.phases)},
                                {"float_display", format_complex(z.real(), z.imag())}};
        } else {
            j["brute_force"] = nullptr;
        }
        j["match"] = r.match;
        j["elapsed_ms"] = meta.elapsed_ms;
        j["notes"] = meta.notes;
        return j.dump(2) + "\n";
    }

    std::ostringstream os;
    if (meta.quiet) {
        os << "av n=" << m.n << ": closed " << big_to_string(r.closed_value);
        if (r.brute_value) os << "  brute " << big_to_string(*r.brute_value);
        os << "  match " << yesno(r.match) << "\n";
        return os.str();
    }
    os << "model: n=" << m.n << "  mw_a=" << format_factors(m.mw_a)
       << "  mw_b=" << format_factors(m.mw_b) << "  sha_a=" << format_factors(m.sha_a)
       << "  sha_b=" << format_factors(m.sha_b) << "\n";
    os << "delta: ";
    switch (m.delta.kind) {
        case bf_av::DeltaChoice::Kind::canonical: os << "canonical"; break;
        case bf_av::DeltaChoice::Kind::matrix: os << "explicit matrix"; break;
        case bf_av::DeltaChoice::Kind::seed: os << "seeded random (seed " << m.delta.seed << ")"; break;
    }
    os << "\n";
    os << "closed form: " << big_to_string(r.closed_value)
       << "  (symmetric: " << big_to_string(r.closed_value_symmetric) << ")\n";
    os << "pair count: " << big_to_string(r.pair_count) << "\n";
    if (r.brute_value) {
        os << "brute force: " << big_to_string(*r.brute_value) << "\n";
        os << "phases: " << phase_support_text(*r.phases) << "\n";
        const auto z = cyclo::phase_sum_float(*r.phases);
        os << "float check: " << format_complex(z.real(), z.imag()) << "\n";
    }
    os << "match: " << yesno(r.match) << "\n";
    append_notes_text(os, meta);
    return os.str();
}

} // namespace arithbf::report
