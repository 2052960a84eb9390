#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "arithbf/abgroup.hpp"

using namespace arithbf;
using namespace arithbf::abgroup;

namespace {

// determinant by cofactor expansion; the matrices here are tiny
BigInt det(const IntMatrix& m)
{
    REQUIRE(m.rows() == m.cols());
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m.at(0, 0);
    BigInt acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j) == 0) continue;
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0, cc = 0; c < n; ++c)
                if (c != j) minor.at(r - 1, cc++) = m.at(r, c);
        const BigInt term = m.at(0, j) * det(minor);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

// advances a k-subset of {0..n-1} in lexicographic order
bool next_combination(std::vector<std::size_t>& idx, std::size_t n)
{
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] != i + n - k) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// gcd of all k x k minors, 0 when every minor vanishes
BigInt minor_gcd(const IntMatrix& m, std::size_t k)
{
    BigInt g = 0;
    std::vector<std::size_t> rs(k);
    std::iota(rs.begin(), rs.end(), 0);
    do {
        std::vector<std::size_t> cs(k);
        std::iota(cs.begin(), cs.end(), 0);
        do {
            IntMatrix sub(k, k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) sub.at(i, j) = m.at(rs[i], cs[j]);
            g = gcd(g, det(sub));
        } while (next_combination(cs, m.cols()));
    } while (next_combination(rs, m.rows()));
    return abs(g);
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

} // namespace

TEST_CASE("invariant factor chains are validated")
{
    CHECK_NOTHROW(InvariantFactors(std::vector<std::int64_t>{}));
    CHECK_NOTHROW(InvariantFactors({2, 6, 12}));
    CHECK_THROWS_AS(InvariantFactors({1}), std::invalid_argument);
    CHECK_THROWS_AS(InvariantFactors({0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(InvariantFactors({2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(InvariantFactors({4, 2}), std::invalid_argument);

    const InvariantFactors g({2, 6});
    CHECK(g.order() == 12);
    CHECK(g.order_i64() == 12);
    CHECK(g.rank() == 2);
    CHECK_FALSE(g.is_trivial());
    CHECK(InvariantFactors(std::vector<std::int64_t>{}).order() == 1);
    CHECK(InvariantFactors(std::vector<std::int64_t>{}).is_trivial());
}

TEST_CASE("group law round trips")
{
    const InvariantFactors g({4, 12});
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const AbElement x = g.element_at(static_cast<std::int64_t>(rand_below(rng, 48)));
        const AbElement y = g.element_at(static_cast<std::int64_t>(rand_below(rng, 48)));
        CHECK(g.add(x, g.negate(x)) == g.zero());
        CHECK(g.scalar_mul(g.order_i64(), x) == g.zero());
        CHECK(g.add(x, y) == g.add(y, x));
        CHECK(g.scalar_mul(3, x) == g.add(x, g.add(x, x)));
        CHECK(g.scalar_mul(-1, x) == g.negate(x));
    }
}

TEST_CASE("element indexing is a bijection")
{
    const InvariantFactors g({2, 6});
    std::set<AbElement> seen;
    for (std::int64_t i = 0; i < g.order_i64(); ++i) {
        const AbElement x = g.element_at(i);
        CHECK(g.contains(x));
        CHECK(g.index_of(x) == i);
        seen.insert(x);
    }
    CHECK(seen.size() == 12);
    CHECK_THROWS_AS(g.element_at(12), std::out_of_range);
    CHECK_THROWS_AS(g.element_at(-1), std::out_of_range);
}

TEST_CASE("hom enumeration matches the brute-force filter")
{
    struct Case {
        std::vector<std::int64_t> factors;
        std::int64_t n;
    };
    const Case cases[] = {{{2, 6}, 4}, {{3}, 5}, {{2, 4, 8}, 6}, {{}, 7}, {{5, 25}, 10}};
    for (const Case& tc : cases) {
        const InvariantFactors g(tc.factors);
        HomEnumerator homs(g, tc.n);

        // independent oracle: try every image vector and keep the well-defined ones
        std::set<std::vector<std::int64_t>> expected;
        std::vector<std::int64_t> v(g.rank(), 0);
        const auto advance = [&]() {
            for (std::size_t i = v.size(); i-- > 0;) {
                if (++v[i] < tc.n) return true;
                v[i] = 0;
            }
            return false;
        };
        do {
            if (is_well_defined(g, CyclicHom{tc.n, v})) expected.insert(v);
        } while (advance());

        std::set<std::vector<std::int64_t>> produced;
        std::vector<CyclicHom> ordered;
        while (const auto h = homs.next()) {
            CHECK(is_well_defined(g, *h));
            produced.insert(h->images);
            ordered.push_back(*h);
        }
        CHECK(produced == expected);
        CHECK(BigInt(static_cast<std::int64_t>(produced.size())) == homs.count());

        // random access agrees with streaming order
        for (std::size_t i = 0; i < ordered.size(); ++i)
            CHECK(homs.at(static_cast<std::int64_t>(i)) == ordered[i]);

        // streaming order is lexicographic on image vectors
        CHECK(std::is_sorted(ordered.begin(), ordered.end()));
    }
}

TEST_CASE("homs are homomorphisms")
{
    const InvariantFactors g({2, 6});
    HomEnumerator homs(g, 4);
    std::mt19937_64 rng(5);
    while (const auto h = homs.next()) {
        for (int i = 0; i < 10; ++i) {
            const AbElement x = g.element_at(static_cast<std::int64_t>(rand_below(rng, 12)));
            const AbElement y = g.element_at(static_cast<std::int64_t>(rand_below(rng, 12)));
            CHECK(h->eval(g.add(x, y)) == (h->eval(x) + h->eval(y)) % 4);
        }
        CHECK(h->eval(g.zero()) == 0);
    }
}

TEST_CASE("smith normal form: recomposition, unimodularity, minor gcds")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t rows = 1 + rand_below(rng, 4);
        const std::size_t cols = 1 + rand_below(rng, 4);
        IntMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                m.at(i, j) = static_cast<std::int64_t>(rand_below(rng, 19)) - 9;

        const SnfResult snf = smith_normal_form(m);
        CHECK(snf.u.multiplied_by(m).multiplied_by(snf.v) == snf.s);
        CHECK(abs(det(snf.u)) == 1);
        CHECK(abs(det(snf.v)) == 1);
        CHECK(snf.v.multiplied_by(snf.v_inv) == IntMatrix::identity(cols));

        // off-diagonal zero, diagonal a divisibility chain
        const auto diag = snf.diagonal();
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                if (i != j) CHECK(snf.s.at(i, j) == 0);
        for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
            if (diag[i] == 0) CHECK(diag[i + 1] == 0);
            if (diag[i] != 0 && diag[i + 1] != 0) CHECK(diag[i + 1] % diag[i] == 0);
        }

        // d_k(M) = s_1 * ... * s_k (gcd of k x k minors is an invariant)
        for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
            BigInt prod = 1;
            for (std::size_t i = 0; i < k; ++i) prod *= diag[i];
            CHECK(minor_gcd(m, k) == abs(prod));
        }
    }
}

TEST_CASE("group presentations reduce to invariant factors")
{
    {
        IntMatrix m(2, 2);
        m.at(0, 0) = 2;
        m.at(1, 1) = 3;
        const QuotientStructure q = group_from_relations(m);
        CHECK(q.torsion().factors() == std::vector<std::int64_t>{6});
        CHECK(q.free_rank() == 0);
    }
    {
        IntMatrix m(2, 2);
        m.at(0, 0) = 2;
        m.at(1, 1) = 2;
        const QuotientStructure q = group_from_relations(m);
        CHECK(q.torsion().factors() == std::vector<std::int64_t>{2, 2});
        CHECK(q.free_rank() == 0);
    }
    {
        IntMatrix m(1, 2);
        m.at(0, 0) = 2;
        m.at(0, 1) = 4;
        const QuotientStructure q = group_from_relations(m);
        CHECK(q.torsion().factors() == std::vector<std::int64_t>{2});
        CHECK(q.free_rank() == 1);
    }
    {
        const IntMatrix m(2, 2);  // zero relations
        const QuotientStructure q = group_from_relations(m);
        CHECK(q.torsion().is_trivial());
        CHECK(q.free_rank() == 2);
    }
    {
        const QuotientStructure q = group_from_relations(IntMatrix::identity(3));
        CHECK(q.torsion().is_trivial());
        CHECK(q.free_rank() == 0);
    }
}

TEST_CASE("quotient projection is a homomorphism hitting the right order")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        // random full-rank lower-triangular relations: the quotient order
        // is the determinant, an oracle independent of the SNF pipeline
        const std::size_t g = 2 + rand_below(rng, 2);
        IntMatrix m(g, g);
        BigInt order = 1;
        for (std::size_t i = 0; i < g; ++i) {
            const std::int64_t d = 1 + static_cast<std::int64_t>(rand_below(rng, 6));
            m.at(i, i) = d;
            order *= d;
            for (std::size_t j = 0; j < i; ++j)
                m.at(i, j) = static_cast<std::int64_t>(rand_below(rng, 7)) - 3;
        }
        const QuotientStructure q = group_from_relations(m);
        CHECK(q.free_rank() == 0);
        CHECK(q.torsion().order() == order);

        // relation rows project to zero; projection is additive
        for (std::size_t i = 0; i < g; ++i) {
            std::vector<std::int64_t> row(g);
            for (std::size_t j = 0; j < g; ++j)
                row[j] = to_i64_checked(m.at(i, j), "relation entry");
            CHECK(q.project(row) == q.torsion().zero());
        }
        for (int k = 0; k < 10; ++k) {
            std::vector<std::int64_t> x(g), y(g), xy(g);
            for (std::size_t j = 0; j < g; ++j) {
                x[j] = static_cast<std::int64_t>(rand_below(rng, 21)) - 10;
                y[j] = static_cast<std::int64_t>(rand_below(rng, 21)) - 10;
                xy[j] = x[j] + y[j];
            }
            CHECK(q.project(xy) == q.torsion().add(q.project(x), q.project(y)));
        }

        // preimages of the canonical generators project to the basis
        const auto pre = q.generator_preimages();
        REQUIRE(pre.size() == q.torsion().rank());
        for (std::size_t i = 0; i < pre.size(); ++i) {
            std::vector<std::int64_t> v(g);
            for (std::size_t j = 0; j < g; ++j) {
                BigInt r = pre[i][j] % order;
                if (r < 0) r += order;
                v[j] = to_i64_checked(r, "preimage entry");
            }
            // reducing exponents mod the group order never changes the class
            AbElement basis = q.torsion().zero();
            basis.coords[i] = 1;
            CHECK(q.project(v) == basis);
        }
    }
}

TEST_CASE("torsion subgroup matches enumeration")
{
    const InvariantFactors g({4, 12});
    for (const std::int64_t n : {1, 2, 3, 4, 6, 7, 12}) {
        const EmbeddedSubgroup t = torsion_subgroup(g, n);

        std::set<AbElement> expected;
        for (std::int64_t i = 0; i < g.order_i64(); ++i) {
            const AbElement x = g.element_at(i);
            if (g.scalar_mul(n, x) == g.zero()) expected.insert(x);
        }

        std::set<AbElement> produced;
        for (std::int64_t i = 0; i < t.group().order_i64(); ++i)
            produced.insert(t.embed(t.group().element_at(i)));

        CHECK(produced == expected);  // same subgroup, and embed is injective
        CHECK(t.group().order() == static_cast<std::int64_t>(expected.size()));
    }
}

TEST_CASE("shifted torsion subgroup matches enumeration")
{
    const InvariantFactors g({4, 12});
    for (const std::int64_t n : {1, 2, 3, 4, 6, 12}) {
        const EmbeddedSubgroup s = n_times_torsion(g, n);

        std::set<AbElement> expected;
        for (std::int64_t i = 0; i < g.order_i64(); ++i) {
            const AbElement x = g.element_at(i);
            if (g.scalar_mul(n * n, x) == g.zero()) expected.insert(g.scalar_mul(n, x));
        }

        std::set<AbElement> produced;
        for (std::int64_t i = 0; i < s.group().order_i64(); ++i)
            produced.insert(s.embed(s.group().element_at(i)));

        CHECK(produced == expected);
        CHECK(s.group().order() == static_cast<std::int64_t>(expected.size()));
    }
}

TEST_CASE("mod-n quotient: projection, section, coset count")
{
    const InvariantFactors g({4, 12});
    for (const std::int64_t n : {1, 2, 3, 4, 6, 8, 12}) {
        const QuotientModN q = quotient_mod_n(g, n);

        std::set<AbElement> classes;
        for (std::int64_t i = 0; i < g.order_i64(); ++i) {
            const AbElement x = g.element_at(i);
            classes.insert(q.project(x));
            const AbElement y = g.element_at((i * 7 + 3) % g.order_i64());
            CHECK(q.project(g.add(x, y)) ==
                  q.group().add(q.project(x), q.project(y)));
        }
        CHECK(q.group().order() == static_cast<std::int64_t>(classes.size()));

        for (std::int64_t i = 0; i < q.group().order_i64(); ++i) {
            const AbElement c = q.group().element_at(i);
            CHECK(q.project(q.lift(c)) == c);
        }
    }
}
