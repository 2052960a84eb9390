#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "arithbf/cyclo.hpp"

using namespace arithbf;
using namespace arithbf::cyclo;

namespace {

IntPolynomial poly(std::vector<std::int64_t> coeffs)
{
    std::vector<BigInt> c(coeffs.begin(), coeffs.end());
    return IntPolynomial(std::move(c));
}

} // namespace

TEST_CASE("small cyclotomic polynomials have their textbook coefficients")
{
    CHECK(cyclotomic_polynomial(1) == poly({-1, 1}));
    CHECK(cyclotomic_polynomial(2) == poly({1, 1}));
    CHECK(cyclotomic_polynomial(3) == poly({1, 1, 1}));
    CHECK(cyclotomic_polynomial(4) == poly({1, 0, 1}));
    CHECK(cyclotomic_polynomial(5) == poly({1, 1, 1, 1, 1}));
    CHECK(cyclotomic_polynomial(6) == poly({1, -1, 1}));
    CHECK(cyclotomic_polynomial(12) == poly({1, 0, -1, 0, 1}));

    // first index with a coefficient outside {-1, 0, 1}
    const IntPolynomial p105 = cyclotomic_polynomial(105);
    CHECK(p105.degree() == 48);  // phi(105)
    CHECK(p105.coeff(7) == -2);
    CHECK(p105.coeff(48) == 1);
}

TEST_CASE("cyclotomic product identity")
{
    for (std::int64_t n = 1; n <= 30; ++n) {
        IntPolynomial prod({BigInt(1)});
        for (std::int64_t d = 1; d <= n; ++d)
            if (n % d == 0) prod = prod * cyclotomic_polynomial(d);
        CHECK(prod == IntPolynomial::x_pow_minus_one(n));
    }
}

TEST_CASE("division round trips")
{
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<BigInt> nc(1 + rng() % 9), dc(1 + rng() % 4);
        for (auto& c : nc) c = static_cast<std::int64_t>(rng() % 21) - 10;
        for (auto& c : dc) c = static_cast<std::int64_t>(rng() % 21) - 10;
        dc.push_back(1);  // monic divisor
        const IntPolynomial num(std::move(nc)), den(std::move(dc));

        const auto [q, r] = IntPolynomial::divmod(num, den);
        CHECK(r.degree() < den.degree());
        CHECK((num - q * den - r).is_zero());
    }
    CHECK_THROWS_AS(IntPolynomial::divmod(poly({1, 1}), poly({1, 2})),
                    std::invalid_argument);
    CHECK_THROWS_AS(IntPolynomial::divmod(poly({1, 1}), IntPolynomial{}),
                    std::invalid_argument);
}

TEST_CASE("phase sums that are integers")
{
    for (std::int64_t n = 1; n <= 12; ++n) {
        PhaseVector uniform(n);
        for (std::int64_t k = 0; k < n; ++k) uniform.add(k, 17);
        const auto s = phase_sum_as_integer(uniform);
        REQUIRE(s.has_value());
        CHECK(*s == (n == 1 ? 17 : 0));

        PhaseVector spiked = uniform;
        spiked.add(0, 5);
        const auto t = phase_sum_as_integer(spiked);
        REQUIRE(t.has_value());
        CHECK(*t == (n == 1 ? 22 : 5));
    }

    // sums over a coset of a proper subgroup of the phase group also vanish
    PhaseVector evens(6);
    evens.add(0); evens.add(2); evens.add(4);
    CHECK(phase_sum_as_integer(evens) == BigInt(0));
    PhaseVector odds(6);
    odds.add(1); odds.add(3); odds.add(5);
    CHECK(phase_sum_as_integer(odds) == BigInt(0));

    PhaseVector two(2);
    two.add(0, 9);
    two.add(1, 4);
    CHECK(phase_sum_as_integer(two) == BigInt(5));
}

TEST_CASE("phase sums that are not integers")
{
    PhaseVector i4(4);
    i4.add(1);  // zeta_4 = i
    CHECK_FALSE(phase_sum_as_integer(i4).has_value());

    PhaseVector z3(3);
    z3.add(0, 2);
    z3.add(1, 1);  // 2 + zeta_3
    CHECK_FALSE(phase_sum_as_integer(z3).has_value());
}

TEST_CASE("float rendering tracks the exact value")
{
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 24);
        PhaseVector pv(n);
        const auto base = static_cast<std::int64_t>(rng() % 1000);
        const auto spike = static_cast<std::int64_t>(rng() % 1000);
        for (std::int64_t k = 0; k < n; ++k) pv.add(k, base);
        pv.add(0, spike);
        const auto exact = phase_sum_as_integer(pv);
        REQUIRE(exact.has_value());
        const auto z = phase_sum_float(pv);
        CHECK(std::abs(z.real() - exact->convert_to<double>()) < 1e-6);
        CHECK(std::abs(z.imag()) < 1e-6);
    }
}

TEST_CASE("phase vector bookkeeping")
{
    PhaseVector a(5), b(5);
    a.add(1, 2);
    b.add(1, 3);
    b.add(4, 7);
    a.merge(b);
    CHECK(a.counts[1] == 5);
    CHECK(a.counts[4] == 7);
    CHECK(a.total() == 12);
    a.scale(3);
    CHECK(a.counts[1] == 15);
    CHECK(a.total() == 36);

    CHECK_THROWS_AS(a.add(5, 1), std::out_of_range);
    CHECK_THROWS_AS(a.add(-1, 1), std::out_of_range);
    CHECK_THROWS_AS(a.add(2, -1), std::invalid_argument);
    PhaseVector c(4);
    CHECK_THROWS_AS(a.merge(c), std::invalid_argument);
    CHECK_THROWS_AS(PhaseVector(0), std::invalid_argument);
}
