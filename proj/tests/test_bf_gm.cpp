#include "doctest.h"

#include <set>
#include <vector>

#include "arithbf/bf_gm.hpp"
#include "arithbf/errors.hpp"

using namespace arithbf;
using namespace arithbf::bf_gm;

namespace {

// Independent route to the brute-force value, leaning on character
// orthogonality instead of phase summation: a torsion class contributes
// |Hom| exactly when its connecting image vanishes in the quotient, i.e.
// when the class sits in the intersection Cl[n] & n*Cl; everything is
// multiplied by the number of unit classes.
BigInt orthogonality_value(const GMInstance& inst)
{
    const auto& cl = inst.field.cl;
    const std::int64_t n = inst.n;
    const std::int64_t order = cl.order_i64();

    std::set<abgroup::AbElement> n_multiples;
    for (std::int64_t i = 0; i < order; ++i)
        n_multiples.insert(cl.scalar_mul(n, cl.element_at(i)));

    std::int64_t vanishing = 0;
    for (std::int64_t i = 0; i < order; ++i) {
        const abgroup::AbElement x = cl.element_at(i);
        if (cl.scalar_mul(n, x) == cl.zero() && n_multiples.count(x)) ++vanishing;
    }

    const abgroup::HomEnumerator homs(cl, n);
    const CohomologyOrders orders = cohomology_orders(inst);
    const BigInt unit_count = orders.h1 / homs.count();  // h1 = |Cl[n]| * unit part
    return unit_count * vanishing * homs.count();
}

} // namespace

TEST_CASE("native field data from a discriminant")
{
    const FieldData fd = field_from_discriminant(-3);
    CHECK(fd.cl.is_trivial());
    CHECK(fd.w == 6);
    CHECK(fd.unit_rank == 0);
    CHECK(fd.degree == 2);
    CHECK(fd.label == "Q(sqrt(-3))");
    CHECK_NOTHROW(fd.validate());

    CHECK(field_from_discriminant(-23).cl.factors() == std::vector<std::int64_t>{3});
    CHECK_THROWS_AS(field_from_discriminant(-13), std::invalid_argument);
}

TEST_CASE("field data validation names the failed condition")
{
    FieldData fd;
    fd.degree = 3;
    fd.unit_rank = 0;
    CHECK_THROWS_AS(fd.validate(), std::invalid_argument);

    fd.degree = 4;
    fd.unit_rank = 0;  // should be 1 for degree 4
    CHECK_THROWS_AS(fd.validate(), std::invalid_argument);

    fd.unit_rank = 1;
    fd.w = 3;  // -1 is always a root of unity, so w must be even
    CHECK_THROWS_AS(fd.validate(), std::invalid_argument);

    fd.w = 2;
    CHECK_NOTHROW(fd.validate());

    CHECK_THROWS_AS((GMInstance{field_from_discriminant(-3), 0}.validate()),
                    std::invalid_argument);
}

TEST_CASE("cohomology orders for a cyclic class group")
{
    const FieldData fd = field_from_discriminant(-23);  // class group Z/3, w = 2
    {
        const CohomologyOrders o = cohomology_orders({fd, 3});
        CHECK(o.h0 == 1);
        CHECK(o.h1 == 3);
        CHECK(o.h2 == 3);
        CHECK(o.h3 == 3);
    }
    {
        const CohomologyOrders o = cohomology_orders({fd, 2});
        CHECK(o.h0 == 2);
        CHECK(o.h1 == 2);
        CHECK(o.h2 == 1);
        CHECK(o.h3 == 2);
    }
}

TEST_CASE("closed form factors as etale x units x quotient")
{
    const FieldData fd = field_from_discriminant(-23);
    const ClosedForm cf = closed_form_gm({fd, 3});
    CHECK(cf.value == 3);
    CHECK(cf.etale_factor == 1);
    CHECK(cf.unit_factor == 1);
    CHECK(cf.quotient_factor == 3);
    REQUIRE(cf.stabilized.has_value());
    CHECK(*cf.stabilized == 3);  // 3 kills Z/3, so the sum has stabilized

    // n = 9 still kills Z/3; nothing survives the shift, so the value stays 3
    const ClosedForm cf9 = closed_form_gm({fd, 9});
    CHECK(cf9.etale_factor == 1);
    CHECK(cf9.value == 3);
    CHECK(cf9.stabilized == BigInt(3));

    // n = 2 does not kill Z/3, no stabilized value
    CHECK_FALSE(closed_form_gm({fd, 2}).stabilized.has_value());

    // a class group with deeper p-torsion makes the etale factor nontrivial
    FieldData deep;
    deep.label = "synthetic with Z/9";
    deep.cl = abgroup::InvariantFactors({9});
    deep.unit_rank = 0;
    deep.w = 2;
    deep.degree = 2;
    const ClosedForm cfd = closed_form_gm({deep, 3});
    CHECK(cfd.etale_factor == 3);  // |3 * Cl[9]| = 3 inside Z/9
    CHECK(cfd.quotient_factor == 3);
    CHECK(cfd.unit_factor == 1);
    CHECK(cfd.value == 9);
    CHECK_FALSE(cfd.stabilized.has_value());
    CHECK(etale_count({deep, 3}) == 3);

    // and the brute force confirms it
    const Report rd = path_integral_gm({deep, 3});
    CHECK(*rd.brute_value == 9);
    CHECK(rd.match);
}

TEST_CASE("brute force equals the closed form and the orthogonality oracle")
{
    for (const std::int64_t disc : {-23, -39, -47, -71}) {
        const FieldData fd = field_from_discriminant(disc);
        for (std::int64_t n = 1; n <= 8; ++n) {
            const GMInstance inst{fd, n};
            const Report r = path_integral_gm(inst);
            REQUIRE(r.brute_value.has_value());
            CHECK(r.match);
            CHECK(*r.brute_value == r.closed.value);
            CHECK(*r.brute_value == orthogonality_value(inst));
            CHECK(r.pair_count == r.orders.h1 * r.orders.h2);
            CHECK(r.phases->total() == r.pair_count);
        }
    }
}

TEST_CASE("trivial level and trivial class group edge cases")
{
    const Report r1 = path_integral_gm({field_from_discriminant(-23), 1});
    CHECK(r1.closed.value == 1);
    CHECK(*r1.brute_value == 1);
    CHECK(r1.pair_count == 1);

    // Q(sqrt(-3)) at n = 6: trivial class group, so only the units contribute
    const Report r6 = path_integral_gm({field_from_discriminant(-3), 6});
    CHECK(r6.closed.value == 6);
    CHECK(*r6.brute_value == 6);
    CHECK(r6.closed.unit_factor == 6);
    CHECK(r6.closed.quotient_factor == 1);
}

TEST_CASE("ingested field data with positive unit rank")
{
    // degree-6 totally imaginary field, trivial class group, w = 2:
    // value is gcd(2, n) * n^2 with every phase zero
    FieldData fd;
    fd.label = "synthetic sextic";
    fd.cl = abgroup::InvariantFactors(std::vector<std::int64_t>{});
    fd.unit_rank = 2;
    fd.w = 2;
    fd.degree = 6;

    const Report r = path_integral_gm({fd, 2});
    CHECK(r.closed.value == 8);
    CHECK(*r.brute_value == 8);
    CHECK(r.match);
    CHECK(r.closed.unit_factor == 8);
    CHECK(r.phases->counts[0] == 8);

    FieldData fq;
    fq.label = "synthetic quartic";
    fq.cl = abgroup::InvariantFactors({5});
    fq.unit_rank = 1;
    fq.w = 2;
    fq.degree = 4;
    const GMInstance inst{fq, 5};
    const Report r5 = path_integral_gm(inst);
    CHECK(r5.closed.value == 25);
    CHECK(*r5.brute_value == 25);
    CHECK(*r5.brute_value == orthogonality_value(inst));
    REQUIRE(r5.closed.stabilized.has_value());
    CHECK(*r5.closed.stabilized == 25);
}

TEST_CASE("unit shortcut and worker count do not change the phases")
{
    const GMInstance inst{field_from_discriminant(-47), 5};
    const Report base = path_integral_gm(inst);

    Options slow;
    slow.unit_shortcut = false;
    const Report looped = path_integral_gm(inst, slow);
    CHECK(looped.phases == base.phases);
    CHECK(looped.brute_value == base.brute_value);

    Options threaded;
    threaded.jobs = 3;
    const Report parallel = path_integral_gm(inst, threaded);
    CHECK(parallel.phases == base.phases);
}

TEST_CASE("closed mode skips enumeration")
{
    Options o;
    o.mode = Mode::closed;
    const Report r = path_integral_gm({field_from_discriminant(-23), 3}, o);
    CHECK_FALSE(r.brute_value.has_value());
    CHECK_FALSE(r.phases.has_value());
    CHECK(r.match);
    CHECK(r.closed.value == 3);
}

TEST_CASE("pair budget is enforced before enumeration")
{
    Options o;
    o.pair_budget = 5;
    CHECK_THROWS_AS(path_integral_gm({field_from_discriminant(-23), 3}, o),
                    BudgetExceeded);

    // the closed form alone never trips the budget
    o.mode = Mode::closed;
    CHECK_NOTHROW(path_integral_gm({field_from_discriminant(-23), 3}, o));
}

TEST_CASE("corrupted pairing is caught as a mismatch")
{
    Options o;
    o.debug_zero_pairing = true;
    const Report r = path_integral_gm({field_from_discriminant(-23), 3}, o);
    CHECK_FALSE(r.match);
    CHECK(*r.brute_value == r.pair_count);  // every phase forced to zero
}
