#include "arithbf/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "arithbf/abgroup.hpp"
#include "arithbf/bf_av.hpp"
#include "arithbf/bf_gm.hpp"
#include "arithbf/cyclo.hpp"
#include "arithbf/quadforms.hpp"
#include "arithbf/report.hpp"

namespace arithbf::selftest {

namespace {

using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

[[noreturn]] void fail_check(const std::string& why) { throw std::runtime_error(why); }

void expect(bool cond, const std::string& why)
{
    if (!cond) fail_check(why);
}

std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t k)
{
    if (k < 2) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % k;
    for (;;) {
        const std::uint64_t v = rng();
        if (v < limit) return v % k;
    }
}

// random divisibility chain with order <= max_order (ascending factors,
// each a multiple of the previous)
abgroup::InvariantFactors random_group(std::mt19937_64& rng, std::int64_t max_order)
{
    std::vector<std::int64_t> fs;
    std::int64_t room = max_order;
    while (room >= 2 && rand_below(rng, 3) != 0) {
        const std::int64_t cap = std::min<std::int64_t>(room, 30);
        std::int64_t d;
        if (fs.empty()) {
            d = 2 + static_cast<std::int64_t>(rand_below(rng, static_cast<std::uint64_t>(cap - 1)));
        } else {
            const std::int64_t maxmult = cap / fs.back();
            if (maxmult < 1) break;
            d = fs.back() * (1 + static_cast<std::int64_t>(
                                     rand_below(rng, static_cast<std::uint64_t>(maxmult))));
        }
        if (d < 2 || d > cap) break;
        fs.push_back(d);
        room /= d;
    }
    return abgroup::InvariantFactors(std::move(fs));
}

abgroup::AbElement random_element(std::mt19937_64& rng, const abgroup::InvariantFactors& g)
{
    abgroup::AbElement x = g.zero();
    for (std::size_t i = 0; i < g.rank(); ++i)
        x.coords[i] = static_cast<std::int64_t>(
            rand_below(rng, static_cast<std::uint64_t>(g.factors()[i])));
    return x;
}

bool in_n_multiples(const abgroup::InvariantFactors& g, const abgroup::AbElement& x,
                    std::int64_t n)
{
    for (std::size_t i = 0; i < g.rank(); ++i)
        if (x.coords[i] % std::gcd(g.factors()[i], n) != 0) return false;
    return true;
}

template <typename Body>
CheckResult run_check(const std::string& name, Body&& body)
{
    CheckResult r;
    r.name = name;
    const auto t0 = Clock::now();
    try {
        r.detail = body();
        r.pass = true;
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = e.what();
    }
    r.seconds = secs_since(t0);
    return r;
}

void enforce_budget(CheckResult& r, bool full, double limit_seconds)
{
    if (full && r.pass && r.seconds > limit_seconds) {
        r.pass = false;
        std::ostringstream os;
        os << "exceeded time budget: " << r.seconds << "s > " << limit_seconds << "s";
        r.detail = os.str();
    }
}

constexpr std::int64_t kNativeDiscs[] = {-3, -4, -7, -15, -23, -39, -47, -71};

// ---- check bodies -------------------------------------------------------

std::string check_gm_product_identity(const BatteryOptions& opt)
{
    const std::int64_t n_max = opt.full ? 12 : 6;
    const std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> spot = {
        {{-23, 3}, 3}, {{-4, 2}, 2}, {{-3, 6}, 6}, {{-39, 2}, 8}, {{-47, 5}, 5}};

    int cases = 0;
    double max_case = 0.0;
    for (const std::int64_t disc : kNativeDiscs) {
        const bf_gm::FieldData fd = bf_gm::field_from_discriminant(disc);
        for (std::int64_t n = 1; n <= n_max; ++n) {
            const auto t0 = Clock::now();
            bf_gm::Options o;
            o.debug_zero_pairing = opt.debug_zero_pairing;
            const bf_gm::Report r = bf_gm::path_integral_gm({fd, n}, o);
            expect(r.brute_value.has_value(), "brute value missing");
            expect(r.match,
                   "brute force " + big_to_string(*r.brute_value) + " != closed form " +
                       big_to_string(r.closed.value) + " at disc " + std::to_string(disc) +
                       ", n " + std::to_string(n));
            expect(r.pair_count == r.orders.h1 * r.orders.h2,
                   "pair count disagrees with cohomology orders");
            const auto it = spot.find({disc, n});
            if (it != spot.end())
                expect(r.closed.value == it->second,
                       "spot value mismatch at disc " + std::to_string(disc) + ", n " +
                           std::to_string(n) + ": got " + big_to_string(r.closed.value) +
                           ", expected " + std::to_string(it->second));
            ++cases;
            max_case = std::max(max_case, secs_since(t0));
            if (opt.full && max_case > 1.0)
                fail_check("single case exceeded 1s at disc " + std::to_string(disc) +
                           ", n " + std::to_string(n));
        }
    }
    std::ostringstream os;
    os << cases << " cases, slowest " << static_cast<int>(max_case * 1000) << " ms";
    return os.str();
}

std::string check_gm_stabilization(const BatteryOptions& opt)
{
    const bf_gm::FieldData fd = bf_gm::field_from_discriminant(-23);
    int cases = 0;
    for (std::int64_t n = 3; n <= 30; n += 3) {
        bf_gm::Options o;
        o.debug_zero_pairing = opt.debug_zero_pairing;
        const bf_gm::Report r = bf_gm::path_integral_gm({fd, n}, o);
        const BigInt want = BigInt(std::gcd<std::int64_t>(2, n)) * 3;
        expect(r.closed.value == want, "stabilized closed form at n " + std::to_string(n) +
                                           ": got " + big_to_string(r.closed.value) +
                                           ", expected " + big_to_string(want));
        expect(r.match, "brute force disagrees at n " + std::to_string(n));
        expect(r.closed.stabilized.has_value() && *r.closed.stabilized == want,
               "stabilized form not reported at n " + std::to_string(n));
        ++cases;
    }
    return std::to_string(cases) + " multiples of 3 up to 30";
}

std::string check_gm_etale_consistency(const BatteryOptions& opt)
{
    const std::int64_t n_max = opt.full ? 12 : 6;
    int cases = 0;
    for (const std::int64_t disc : kNativeDiscs) {
        const bf_gm::FieldData fd = bf_gm::field_from_discriminant(disc);
        const auto& cl = fd.cl;
        const std::int64_t order = cl.order_i64();
        for (std::int64_t n = 1; n <= n_max; ++n) {
            const bf_gm::GMInstance inst{fd, n};
            const bf_gm::ClosedForm cf = bf_gm::closed_form_gm(inst);

            // brute-force subgroup orders straight from the group law
            std::int64_t tors = 0;
            std::set<abgroup::AbElement> shifted;
            for (std::int64_t i = 0; i < order; ++i) {
                const abgroup::AbElement x = cl.element_at(i);
                if (cl.scalar_mul(n, x) == cl.zero()) ++tors;
                if (cl.scalar_mul(n * n, x) == cl.zero())
                    shifted.insert(cl.scalar_mul(n, x));
            }
            const auto etale = static_cast<std::int64_t>(shifted.size());

            expect(cf.etale_factor == etale, "etale factor disagrees with enumeration");
            expect(bf_gm::etale_count(inst) == etale, "etale count disagrees");
            expect(abgroup::n_times_torsion(cl, n).group().order() == etale,
                   "shifted-torsion subgroup order disagrees");
            expect(cf.value == BigInt(tors) * cf.unit_factor * etale,
                   "rearranged product (torsion x units x etale) disagrees at disc " +
                       std::to_string(disc) + ", n " + std::to_string(n));
            ++cases;
        }
    }
    return std::to_string(cases) + " cases cross-checked by enumeration";
}

std::string check_av_product_identity(const BatteryOptions& opt)
{
    const int models = opt.full ? 200 : 40;
    const std::int64_t ns[] = {2, 3, 4, 5, 6, 8, 9};

    for (int i = 0; i < models; ++i) {
        const auto seed = static_cast<std::uint64_t>(i + 1);
        const std::int64_t n = ns[i % 7];
        const bf_av::AVModel m = bf_av::random_model(seed, n, 1000);
        const bf_av::AVInstance inst = bf_av::AVInstance::build(m);
        bf_av::Options o;
        o.debug_zero_pairing = opt.debug_zero_pairing;
        const bf_av::Report r = bf_av::path_integral_av(inst, o);
        const BigInt want = m.mw_a.order() * m.mw_b.order() * m.sha_a.order();
        expect(r.brute_value.has_value() && *r.brute_value == want && r.match,
               "product formula failed at seed " + std::to_string(seed) + ", n " +
                   std::to_string(n));
        expect(r.closed_value == r.closed_value_symmetric, "symmetric form disagrees");
    }

    // the value must not depend on which injective delta was drawn
    struct Shape {
        std::int64_t n;
        std::vector<std::int64_t> mw_a, mw_b, sha;
    };
    const Shape shapes[] = {
        {3, {}, {}, {3}},       {3, {3}, {}, {3, 3}},  {2, {2}, {2}, {2, 2}},
        {4, {2}, {4}, {4}},     {4, {}, {2}, {2, 4}},  {5, {5}, {}, {5}},
        {6, {2}, {3}, {6}},     {8, {2}, {2}, {2, 8}}, {9, {3}, {9}, {3, 9}},
        {6, {6}, {6}, {2, 6}},
    };
    const int draws = opt.full ? 20 : 6;
    for (const Shape& s : shapes) {
        std::optional<BigInt> first;
        for (int d = 0; d < draws; ++d) {
            bf_av::AVModel m;
            m.n = s.n;
            m.mw_a = abgroup::InvariantFactors(s.mw_a);
            m.mw_b = abgroup::InvariantFactors(s.mw_b);
            m.sha_a = abgroup::InvariantFactors(s.sha);
            m.sha_b = abgroup::InvariantFactors(s.sha);
            m.delta.kind = bf_av::DeltaChoice::Kind::seed;
            m.delta.seed = static_cast<std::uint64_t>(d);
            bf_av::Options o;
            o.debug_zero_pairing = opt.debug_zero_pairing;
            const bf_av::Report r =
                bf_av::path_integral_av(bf_av::AVInstance::build(m), o);
            if (!first) first = *r.brute_value;
            expect(*r.brute_value == *first,
                   "value depends on the delta draw at n " + std::to_string(s.n));
            expect(r.match, "delta-invariance model mismatched the closed form");
        }
    }
    std::ostringstream os;
    os << models << " random models, " << std::size(shapes) << " shapes x " << draws
       << " delta draws";
    return os.str();
}

std::string check_hom_orthogonality(const BatteryOptions& opt)
{
    const int groups = opt.full ? 100 : 30;
    std::mt19937_64 rng(20260815);
    for (int i = 0; i < groups; ++i) {
        const abgroup::InvariantFactors g = random_group(rng, 1000);
        const std::int64_t n = 1 + static_cast<std::int64_t>(rand_below(rng, 12));
        const abgroup::AbElement x = random_element(rng, g);

        abgroup::HomEnumerator homs(g, n);
        cyclo::PhaseVector pv(n);
        while (const auto h = homs.next())
            pv.add(opt.debug_zero_pairing ? 0 : h->eval(x));

        const std::optional<BigInt> s = cyclo::phase_sum_as_integer(pv);
        expect(s.has_value(), "character sum is not an integer");
        const BigInt want = in_n_multiples(g, x, n) ? homs.count() : BigInt(0);
        expect(*s == want, "character sum over homs: got " + big_to_string(*s) +
                               ", expected " + big_to_string(want));
    }
    return std::to_string(groups) + " random (group, n, x) samples";
}

std::string check_structural_identities(const BatteryOptions& opt)
{
    const int groups = opt.full ? 100 : 30;
    std::mt19937_64 rng(777001);
    for (int i = 0; i < groups; ++i) {
        const abgroup::InvariantFactors g = random_group(rng, 1000);
        const std::int64_t n = 1 + static_cast<std::int64_t>(rand_below(rng, 12));
        const std::int64_t order = g.order_i64();

        std::int64_t tors_n = 0, tors_n2 = 0;
        std::set<abgroup::AbElement> n_image, shifted;
        for (std::int64_t idx = 0; idx < order; ++idx) {
            const abgroup::AbElement x = g.element_at(idx);
            const abgroup::AbElement nx = g.scalar_mul(n, x);
            n_image.insert(nx);
            if (nx == g.zero()) ++tors_n;
            if (g.scalar_mul(n * n, x) == g.zero()) {
                ++tors_n2;
                shifted.insert(nx);
            }
        }

        const BigInt t = abgroup::torsion_subgroup(g, n).group().order();
        const BigInt q = abgroup::quotient_mod_n(g, n).group().order();
        const BigInt s = abgroup::n_times_torsion(g, n).group().order();
        expect(t == tors_n, "torsion subgroup order disagrees with enumeration");
        expect(q == order / static_cast<std::int64_t>(n_image.size()),
               "quotient order disagrees with enumeration");
        expect(t == q, "torsion and quotient orders differ");
        expect(s == static_cast<std::int64_t>(shifted.size()),
               "shifted torsion order disagrees with enumeration");
        expect(s * t == tors_n2, "order identity |nG[n^2]| * |G[n]| = |G[n^2]| failed");
    }
    return std::to_string(groups) + " random groups, n up to 12";
}

std::string check_classgroup_laws(const BatteryOptions& opt)
{
    const std::int64_t floor_disc = opt.full ? -10000 : -1500;
    int discs = 0;
    std::int64_t assoc_discs = 0;
    for (std::int64_t disc = -3; disc > floor_disc; --disc) {
        if (!quadforms::Discriminant::check_fundamental(disc).empty()) continue;
        const quadforms::Discriminant d(disc);
        const quadforms::ClassGroup cg = quadforms::class_group(d);
        const auto h = static_cast<std::size_t>(cg.class_number());
        expect(cg.structure.order() == h, "structure order != reduced form count");

        std::map<quadforms::QuadForm, std::size_t> index;
        for (std::size_t i = 0; i < h; ++i) index.emplace(cg.reduced_forms[i], i);
        const quadforms::QuadForm id = quadforms::principal_form(d);

        for (const auto& f : cg.reduced_forms) {
            expect(quadforms::compose(id, f) == f, "identity law failed");
            expect(quadforms::compose(f, quadforms::inverse_form(f)) == id,
                   "inverse law failed");
        }

        if (h <= 20) {
            // multiplication table: closure for every pair, then
            // associativity of all triples by table lookup
            std::vector<std::vector<std::size_t>> table(h, std::vector<std::size_t>(h));
            for (std::size_t i = 0; i < h; ++i) {
                for (std::size_t j = 0; j < h; ++j) {
                    const auto fg =
                        quadforms::compose(cg.reduced_forms[i], cg.reduced_forms[j]);
                    const auto it = index.find(fg);
                    expect(it != index.end(), "composition left the reduced set");
                    table[i][j] = it->second;

                    // the discrete-log table must be a homomorphism
                    const auto sum = cg.structure.add(cg.dlog.at(cg.reduced_forms[i]),
                                                      cg.dlog.at(cg.reduced_forms[j]));
                    expect(cg.dlog.at(fg) == sum, "discrete-log table is not additive");
                }
            }
            for (std::size_t i = 0; i < h; ++i)
                for (std::size_t j = 0; j < h; ++j)
                    for (std::size_t k = 0; k < h; ++k)
                        expect(table[table[i][j]][k] == table[i][table[j][k]],
                               "associativity failed at disc " + std::to_string(disc));
            ++assoc_discs;
        }
        ++discs;
    }
    std::ostringstream os;
    os << discs << " fundamental discriminants above " << floor_disc << ", "
       << assoc_discs << " with full triple check";
    return os.str();
}

std::string check_cyclotomic_exactness(const BatteryOptions& opt)
{
    const std::int64_t n_max = opt.full ? 200 : 80;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        cyclo::IntPolynomial prod({BigInt(1)});
        for (std::int64_t d = 1; d <= n; ++d)
            if (n % d == 0) prod = prod * cyclo::cyclotomic_polynomial(d);
        expect(prod == cyclo::IntPolynomial::x_pow_minus_one(n),
               "cyclotomic product != x^n - 1 at n " + std::to_string(n));
    }

    std::mt19937_64 rng(424242);
    for (int i = 0; i < 60; ++i) {
        const std::int64_t n = 2 + static_cast<std::int64_t>(rand_below(rng, 39));
        const auto c = static_cast<std::int64_t>(rand_below(rng, 1000000));
        cyclo::PhaseVector pv(n);
        for (std::int64_t k = 0; k < n; ++k) pv.add(k, c);
        const auto s = cyclo::phase_sum_as_integer(pv);
        expect(s.has_value() && *s == 0, "uniform phase vector did not sum to zero");
    }

    const int vectors = opt.full ? 1000 : 200;
    int integer_valued = 0;
    for (int i = 0; i < vectors; ++i) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(rand_below(rng, 60));
        cyclo::PhaseVector pv(n);
        if (i % 2 == 0) {
            // uniform plus a spike at zero: exact value is the spike
            const auto base = static_cast<std::int64_t>(rand_below(rng, 1000000));
            const auto spike = static_cast<std::int64_t>(rand_below(rng, 1000000));
            for (std::int64_t k = 0; k < n; ++k) pv.add(k, base);
            pv.add(0, spike);
        } else {
            for (std::int64_t k = 0; k < n; ++k)
                pv.add(k, static_cast<std::int64_t>(rand_below(rng, 1000000)));
        }
        const auto exact = cyclo::phase_sum_as_integer(pv);
        const auto approx = cyclo::phase_sum_float(pv);
        if (!exact) continue;
        ++integer_valued;
        const double re = static_cast<double>(exact->convert_to<long double>());
        expect(std::abs(approx.real() - re) < 1e-6 && std::abs(approx.imag()) < 1e-6,
               "float summation drifted from the exact integer");
    }
    expect(integer_valued >= vectors / 2, "integer-valued sample starved");
    std::ostringstream os;
    os << "products to n=" << n_max << ", " << vectors << " random vectors ("
       << integer_valued << " integer-valued)";
    return os.str();
}

std::string check_report_determinism(const BatteryOptions& opt)
{
    const int job_counts[] = {1, 4, 16};
    const std::int64_t n_max = opt.full ? 12 : 4;
    int compared = 0;

    for (const std::int64_t disc : kNativeDiscs) {
        const bf_gm::FieldData fd = bf_gm::field_from_discriminant(disc);
        for (std::int64_t n = 1; n <= n_max; ++n) {
            std::optional<std::string> baseline;
            for (const int jobs : job_counts) {
                bf_gm::Options o;
                o.jobs = jobs;
                const bf_gm::Report r = bf_gm::path_integral_gm({fd, n}, o);
                report::Meta meta;
                meta.format = "json";
                meta.elapsed_ms = 0;  // masked: the one run-dependent field
                const std::string s = report::render_gm(r, meta);
                if (!baseline) baseline = s;
                expect(s == *baseline, "gm report differs across job counts at disc " +
                                           std::to_string(disc) + ", n " + std::to_string(n));
            }
            ++compared;
        }
    }

    const int av_models = opt.full ? 20 : 6;
    const std::int64_t ns[] = {2, 3, 4, 5, 6, 8, 9};
    for (int i = 0; i < av_models; ++i) {
        const bf_av::AVModel m =
            bf_av::random_model(static_cast<std::uint64_t>(i + 1), ns[i % 7], 1000);
        const bf_av::AVInstance inst = bf_av::AVInstance::build(m);
        std::optional<std::string> baseline;
        for (const int jobs : job_counts) {
            bf_av::Options o;
            o.jobs = jobs;
            const bf_av::Report r = bf_av::path_integral_av(inst, o);
            report::Meta meta;
            meta.format = "json";
            meta.elapsed_ms = 0;
            const std::string s = report::render_av(r, meta);
            if (!baseline) baseline = s;
            expect(s == *baseline,
                   "av report differs across job counts at seed " + std::to_string(i + 1));
        }
        ++compared;
    }
    return std::to_string(compared) + " reports byte-compared across jobs 1/4/16";
}

} // namespace

std::vector<CheckResult> run_battery(const BatteryOptions& opt)
{
    std::vector<CheckResult> out;

    out.push_back(run_check("gm_product_identity",
                            [&] { return check_gm_product_identity(opt); }));
    out.push_back(run_check("gm_stabilization", [&] { return check_gm_stabilization(opt); }));
    out.push_back(run_check("gm_etale_consistency",
                            [&] { return check_gm_etale_consistency(opt); }));
    out.push_back(run_check("av_product_identity",
                            [&] { return check_av_product_identity(opt); }));
    enforce_budget(out.back(), opt.full, 60.0);
    out.push_back(run_check("hom_orthogonality", [&] { return check_hom_orthogonality(opt); }));
    enforce_budget(out.back(), opt.full, 10.0);
    out.push_back(run_check("structural_identities",
                            [&] { return check_structural_identities(opt); }));
    out.push_back(run_check("classgroup_laws", [&] { return check_classgroup_laws(opt); }));
    enforce_budget(out.back(), opt.full, 120.0);
    out.push_back(run_check("cyclotomic_exactness",
                            [&] { return check_cyclotomic_exactness(opt); }));
    enforce_budget(out.back(), opt.full, 10.0);
    out.push_back(run_check("report_determinism",
                            [&] { return check_report_determinism(opt); }));

    return out;
}

int print_battery(const std::vector<CheckResult>& results, std::ostream& out)
{
    int failures = 0;
    for (const CheckResult& r : results) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
        char buf[32];
        std::snprintf(buf, sizeof buf, " (%.2fs)", r.seconds);
        out << buf;
        if (!r.detail.empty()) out << " -- " << r.detail;
        out << "\n";
        if (!r.pass) ++failures;
    }
    out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
        << "\n";
    return failures;
}

} // namespace arithbf::selftest
