#include "arithbf/bf_gm.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

#include "arithbf/errors.hpp"
#include "arithbf/quadforms.hpp"
#include "parallel.hpp"

namespace arithbf::bf_gm {

void FieldData::validate() const
{
    if (degree < 2 || degree % 2 != 0)
        throw std::invalid_argument("field degree must be even and >= 2 (totally imaginary)");
    if (unit_rank != degree / 2 - 1)
        throw std::invalid_argument("unit rank must equal degree/2 - 1 for a totally imaginary field");
    if (w < 2 || w % 2 != 0)
        throw std::invalid_argument("roots-of-unity order must be even and >= 2");
}

FieldData field_from_discriminant(std::int64_t disc)
{
    const quadforms::Discriminant d(disc);
    FieldData fd;
    fd.label = "Q(sqrt(" + std::to_string(disc) + "))";
    fd.cl = quadforms::class_group(d).structure;
    fd.unit_rank = 0;
    fd.w = quadforms::unit_data(d);
    fd.degree = 2;
    return fd;
}

void GMInstance::validate() const
{
    field.validate();
    if (n < 1) throw std::invalid_argument("n must be >= 1");
}

namespace {

GMInstance validated(GMInstance inst)
{
    inst.validate();
    return inst;
}

BigInt unit_class_count_of(const GMInstance& inst)
{
    return BigInt(std::gcd(inst.field.w, inst.n)) * pow_big(inst.n, inst.field.unit_rank);
}

BigInt torsion_order_of(const GMInstance& inst)
{
    BigInt t = 1;
    for (const std::int64_t d : inst.field.cl.factors()) t *= std::gcd(d, inst.n);
    return t;
}

} // namespace

CohomologyOrders cohomology_orders(const GMInstance& inst)
{
    inst.validate();
    CohomologyOrders o;
    o.h0 = std::gcd(inst.field.w, inst.n);
    o.h1 = torsion_order_of(inst) * unit_class_count_of(inst);
    o.h2 = torsion_order_of(inst);  // |Cl/n| = |Cl[n]| for finite Cl
    o.h3 = inst.n;
    return o;
}

ClosedForm closed_form_gm(const GMInstance& inst)
{
    inst.validate();
    const std::int64_t n = inst.n;
    ClosedForm cf;
    cf.etale_factor = 1;
    cf.quotient_factor = 1;
    bool all_torsion = true;
    for (const std::int64_t d : inst.field.cl.factors()) {
        const std::int64_t g1 = std::gcd(d, n);
        // gcd(d, n^2) = g1 * gcd(d/g1, n), dodging the n^2 overflow
        const std::int64_t g2 = g1 * std::gcd(d / g1, n);
        cf.etale_factor *= g2 / g1;
        cf.quotient_factor *= g1;
        if (g1 != d) all_torsion = false;  // d does not divide n
    }
    cf.unit_factor = unit_class_count_of(inst);
    cf.value = cf.etale_factor * cf.unit_factor * cf.quotient_factor;
    if (all_torsion) cf.stabilized = cf.unit_factor * inst.field.cl.order();
    return cf;
}

BigInt etale_count(const GMInstance& inst)
{
    return closed_form_gm(inst).etale_factor;
}

Evaluator::Evaluator(GMInstance inst)
    : inst_(validated(std::move(inst))),
      tors_(abgroup::torsion_subgroup(inst_.field.cl, inst_.n)),
      quot_(abgroup::quotient_mod_n(inst_.field.cl, inst_.n)),
      unit_count_(unit_class_count_of(inst_))
{
}

abgroup::AbElement Evaluator::bockstein(const H1MuElement& b) const
{
    return quot_.project(tors_.embed(b.t));
}

abgroup::AbElement Evaluator::lifted_bockstein(const H1MuElement& b) const
{
    return quot_.lift(bockstein(b));
}

std::int64_t Evaluator::bf_phase(const abgroup::CyclicHom& a, const H1MuElement& b) const
{
    return a.eval(lifted_bockstein(b));
}

Report path_integral_gm(const GMInstance& inst, const Options& opt)
{
    inst.validate();

    Report rep;
    rep.instance = inst;
    rep.orders = cohomology_orders(inst);
    rep.closed = closed_form_gm(inst);
    rep.etale = rep.closed.etale_factor;
    // |Hom(Cl, Z/n)| * |H^1(X, mu_n)|; the hom count coincides with h2
    rep.pair_count = rep.orders.h2 * rep.orders.h1;

    if (opt.mode == Mode::closed) {
        rep.match = true;
        return rep;
    }
    if (rep.pair_count > opt.pair_budget)
        throw BudgetExceeded("pair count " + big_to_string(rep.pair_count) +
                             " exceeds budget " + big_to_string(opt.pair_budget) +
                             " (raise --budget-pairs to override)");

    const Evaluator ev(inst);
    const std::int64_t n = inst.n;
    const std::int64_t tcount = ev.torsion_group().order_i64();
    const std::int64_t units =
        opt.unit_shortcut ? 1 : to_i64_checked(ev.unit_class_count(), "unit class count");

    const int jobs = std::max(1, opt.jobs);
    std::vector<cyclo::PhaseVector> locals(static_cast<std::size_t>(jobs),
                                           cyclo::PhaseVector(n));
    detail::run_striped(jobs, [&](int j) {
        cyclo::PhaseVector& pv = locals[static_cast<std::size_t>(j)];
        abgroup::HomEnumerator homs(inst.field.cl, n);
        for (std::int64_t ti = j; ti < tcount; ti += jobs) {
            const H1MuElement b{0, ev.torsion_group().element_at(ti)};
            const abgroup::AbElement at = ev.lifted_bockstein(b);
            for (std::int64_t u = 0; u < units; ++u) {
                homs.reset();
                while (const auto a = homs.next())
                    pv.add(opt.debug_zero_pairing ? 0 : a->eval(at));
            }
        }
    });

    cyclo::PhaseVector pv = std::move(locals.front());
    for (std::size_t j = 1; j < locals.size(); ++j) pv.merge(locals[j]);
    if (opt.unit_shortcut) pv.scale(ev.unit_class_count());

    if (pv.total() != rep.pair_count)
        throw std::logic_error("enumerated pair count disagrees with cohomology orders");

    const std::optional<BigInt> value = cyclo::phase_sum_as_integer(pv);
    if (!value)
        throw std::logic_error("phase sum is not an integer; pairing evaluation is inconsistent");
    rep.brute_value = *value;
    rep.phases = std::move(pv);
    rep.match = (*rep.brute_value == rep.closed.value);
    return rep;
}

} // namespace arithbf::bf_gm
