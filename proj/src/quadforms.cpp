#include "arithbf/quadforms.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace arithbf::quadforms {

namespace {

BigInt mod_pos(const BigInt& a, const BigInt& m)
{
    BigInt r = a % m;
    if (r < 0) r += m;
    return r;
}

struct ExtGcd {
    BigInt g, x, y;  // a*x + b*y = g, g >= 0
};

ExtGcd ext_gcd(BigInt a, BigInt b)
{
    BigInt old_r = std::move(a), r = std::move(b);
    BigInt old_x = 1, x = 0, old_y = 0, y = 1;
    while (r != 0) {
        const BigInt q = old_r / r;
        BigInt t = old_r - q * r; old_r = std::move(r); r = std::move(t);
        t = old_x - q * x; old_x = std::move(x); x = std::move(t);
        t = old_y - q * y; old_y = std::move(y); y = std::move(t);
    }
    if (old_r < 0) { old_r = -old_r; old_x = -old_x; old_y = -old_y; }
    return {std::move(old_r), std::move(old_x), std::move(old_y)};
}

BigInt inv_mod(const BigInt& a, const BigInt& m)
{
    const ExtGcd e = ext_gcd(mod_pos(a, m), m);
    if (e.g != 1) throw std::logic_error("inv_mod: arguments are not coprime");
    return mod_pos(e.x, m);
}

// x = r1 mod m1, x = r2 mod m2 for coprime moduli
BigInt crt_pair(const BigInt& r1, const BigInt& m1, const BigInt& r2, const BigInt& m2)
{
    const BigInt k = mod_pos((r2 - r1) * inv_mod(m1, m2), m2);
    return r1 + m1 * k;
}

std::vector<std::int64_t> distinct_prime_factors(std::int64_t n)
{
    std::vector<std::int64_t> ps;
    for (std::int64_t p = 2; p <= n / p; ++p) {
        if (n % p != 0) continue;
        ps.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

// principal form without the fundamentality gate, for internal use on any
// valid discriminant (0 or 1 mod 4)
QuadForm principal_of(std::int64_t disc)
{
    if (((disc % 4) + 4) % 4 == 0)
        return {1, 0, to_i64_checked(BigInt(disc) / -4, "principal form coefficient")};
    return {1, 1, to_i64_checked((1 - BigInt(disc)) / 4, "principal form coefficient")};
}

// Reduction on wide coefficients; narrows to int64 only once reduced, where
// every coefficient is bounded by |D|.
QuadForm reduce_triple(BigInt a, BigInt b, BigInt c)
{
    if (b * b - 4 * a * c >= 0)
        throw std::invalid_argument("form is not definite: discriminant >= 0");
    if (a < 0)
        throw std::invalid_argument("form is negative definite, expected positive definite");
    if (gcd(gcd(abs(a), abs(b)), abs(c)) != 1)
        throw std::invalid_argument("form is not primitive");
    for (;;) {
        if (b > a || b <= -a) {
            // translate: b into (-a, a], c follows from the discriminant
            const BigInt twoa = 2 * a;
            BigInt r = b % twoa;
            if (r < 0) r += twoa;
            if (r > a) r -= twoa;
            const BigInt k = (b - r) / twoa;
            c += a * k * k - b * k;
            b = std::move(r);
            continue;
        }
        if (a > c) {  // flip: (a, b, c) -> (c, -b, a)
            swap(a, c);
            b = -b;
            continue;
        }
        if (a == c && b < 0) {
            b = -b;
            continue;
        }
        break;
    }
    return {to_i64_checked(a, "reduced coefficient a"),
            to_i64_checked(b, "reduced coefficient b"),
            to_i64_checked(c, "reduced coefficient c")};
}

// smallest p with p^2 | n, or 0 if squarefree
std::int64_t smallest_square_divisor(std::int64_t n)
{
    n = std::abs(n);
    for (std::int64_t p = 2; p <= n / p; ++p)
        if (n % (p * p) == 0) return p;
    return 0;
}

} // namespace

Discriminant::Discriminant(std::int64_t d) : d_(d)
{
    const std::string why = check_fundamental(d);
    if (!why.empty())
        throw std::invalid_argument("discriminant " + std::to_string(d) +
                                    " is not fundamental: " + why);
}

std::string Discriminant::check_fundamental(std::int64_t d)
{
    if (d >= 0) return "must be negative";
    const std::int64_t r4 = ((d % 4) + 4) % 4;
    if (r4 != 0 && r4 != 1) return "must be 0 or 1 mod 4";
    if (r4 == 1) {
        if (const std::int64_t p = smallest_square_divisor(d))
            return "divisible by " + std::to_string(p) + "^2";
        return "";
    }
    const std::int64_t m = d / 4;
    const std::int64_t m4 = ((m % 4) + 4) % 4;
    if (m4 != 2 && m4 != 3) return "d/4 must be 2 or 3 mod 4";
    if (const std::int64_t p = smallest_square_divisor(m))
        return "d/4 divisible by " + std::to_string(p) + "^2";
    return "";
}

std::int64_t QuadForm::discriminant() const
{
    return to_i64_checked(BigInt(b) * b - 4 * BigInt(a) * c, "discriminant");
}

bool QuadForm::is_primitive() const
{
    return std::gcd(std::gcd(a, b), c) == 1;
}

bool QuadForm::is_reduced() const
{
    if (a <= 0) return false;
    if (!(-a < b && b <= a && a <= c)) return false;
    if (a == c && b < 0) return false;
    return BigInt(b) * b - 4 * BigInt(a) * c < 0;
}

QuadForm reduce(const QuadForm& f)
{
    return reduce_triple(f.a, f.b, f.c);
}

std::vector<QuadForm> enumerate_reduced(const Discriminant& d)
{
    const std::int64_t D = d.value();
    const std::int64_t amax = isqrt_i64((-D) / 3);
    std::vector<QuadForm> out;
    for (std::int64_t a = 1; a <= amax; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            const __int128 num = static_cast<__int128>(b) * b - D;
            if (num % (4 * static_cast<__int128>(a)) != 0) continue;
            // c <= (a^2 + |D|) / (4a) <= |D|, so the narrow is safe
            const auto c = static_cast<std::int64_t>(num / (4 * static_cast<__int128>(a)));
            if (c < a) continue;
            if (a == c && b < 0) continue;
            const QuadForm f{a, b, c};
            if (!f.is_primitive()) continue;
            out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

QuadForm principal_form(const Discriminant& d)
{
    return principal_of(d.value());
}

QuadForm compose(const QuadForm& f0, const QuadForm& g0)
{
    const std::int64_t D = f0.discriminant();
    if (D != g0.discriminant())
        throw std::invalid_argument("cannot compose forms of different discriminants");
    const QuadForm f = reduce(f0);
    const QuadForm g = reduce(g0);

    /*
     * Move g to an equivalent form whose leading coefficient is coprime to
     * f.a: at every prime p | f.a pick (x, y) in {(1,0), (0,1), (1,1)} with
     * g(x, y) != 0 mod p (primitivity guarantees one works), glue the picks
     * with CRT, and strip gcd(x, y) -- which is coprime to all those primes
     * -- to get a primitive vector.
     */
    BigInt x = 1, y = 0, pmod = 1;
    for (const std::int64_t p : distinct_prime_factors(f.a)) {
        std::int64_t xp = 1, yp = 1;
        if (g.a % p != 0) { xp = 1; yp = 0; }
        else if (g.c % p != 0) { xp = 0; yp = 1; }
        // else p | a and p | c force p coprime to b, and g(1,1) = b mod p
        x = crt_pair(x, pmod, xp, p);
        y = crt_pair(y, pmod, yp, p);
        pmod *= p;
    }
    const BigInt shared = gcd(x, y);
    if (shared == 0) throw std::logic_error("composition: zero representative vector");
    x /= shared;
    y /= shared;

    // extend to the unimodular matrix [[x, u], [y, v]] and transport g
    const ExtGcd e = ext_gcd(x, y);
    if (e.g != 1) throw std::logic_error("composition: representative vector is not primitive");
    const BigInt u = -e.y, v = e.x;
    const BigInt a2 = g.a, b2 = g.b, c2 = g.c;
    const BigInt m = a2 * x * x + b2 * x * y + c2 * y * y;
    const BigInt bm = 2 * a2 * x * u + b2 * (x * v + y * u) + 2 * c2 * y * v;

    const BigInt a1 = f.a, b1 = f.b;
    if (gcd(m, a1) != 1)
        throw std::logic_error("composition: failed to reach a coprime representative");

    // concordant middle coefficient: B = b1 mod 2*a1 and B = bm mod 2*m
    const BigInt t = mod_pos((bm - b1) / 2 % m * inv_mod(a1, m), m);
    const BigInt B = b1 + 2 * a1 * t;
    const BigInt A = a1 * m;
    const BigInt num = B * B - D;
    if (num % (4 * A) != 0) throw std::logic_error("composition: concordance failed");

    const QuadForm out = reduce_triple(A, B, num / (4 * A));
    if (out.discriminant() != D) throw std::logic_error("composition changed the discriminant");
    return out;
}

QuadForm inverse_form(const QuadForm& f)
{
    return reduce_triple(f.a, -static_cast<BigInt>(f.b), f.c);
}

QuadForm power(const QuadForm& f, std::int64_t e)
{
    if (e < 0) return power(inverse_form(f), -e);
    QuadForm acc = principal_of(f.discriminant());
    QuadForm base = reduce(f);
    while (e > 0) {
        if (e & 1) acc = compose(acc, base);
        e >>= 1;
        if (e) base = compose(base, base);
    }
    return acc;
}

ClassGroup class_group(const Discriminant& d)
{
    ClassGroup cg;
    cg.discriminant = d.value();
    cg.reduced_forms = enumerate_reduced(d);
    const std::size_t h = cg.reduced_forms.size();

    /*
     * Polycyclic walk: grow the known subgroup one generator at a time. For
     * each new generator g take its smallest power r landing in what is
     * already generated; that gives the relation g^r = (known element) and
     * the new cosets g^e * S for 0 < e < r. The relation matrix is lower
     * triangular with the relative orders on the diagonal, so its Smith
     * form recovers the invariant factors, and the exponent table doubles
     * as a discrete-log table once projected to canonical coordinates.
     */
    std::map<QuadForm, std::vector<std::int64_t>> expr;
    expr[principal_form(d)] = {};

    std::vector<QuadForm> gens;
    struct Relation {
        std::int64_t order;
        std::vector<std::int64_t> tail;  // expression of g^order over earlier gens
    };
    std::vector<Relation> rels;

    while (expr.size() < h) {
        QuadForm g{};
        bool found = false;
        for (const QuadForm& form : cg.reduced_forms) {
            if (!expr.count(form)) { g = form; found = true; break; }
        }
        if (!found) throw std::logic_error("class group enumeration out of sync");

        const std::size_t gi = gens.size();
        gens.push_back(g);

        std::vector<QuadForm> pows;  // g^1 .. g^(r-1)
        QuadForm p = g;
        while (!expr.count(p)) {
            pows.push_back(p);
            p = compose(p, g);
        }
        const auto r = static_cast<std::int64_t>(pows.size()) + 1;
        rels.push_back({r, expr.at(p)});

        const std::vector<std::pair<QuadForm, std::vector<std::int64_t>>> old(expr.begin(),
                                                                              expr.end());
        for (std::int64_t e = 1; e < r; ++e) {
            for (const auto& [s, vs] : old) {
                std::vector<std::int64_t> w = vs;
                w.resize(gi + 1, 0);
                w[gi] = e;
                if (!expr.emplace(compose(pows[e - 1], s), std::move(w)).second)
                    throw std::logic_error("class group cosets overlap");
            }
        }
    }

    const std::size_t k = gens.size();
    abgroup::IntMatrix relations(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        relations.at(i, i) = rels[i].order;
        for (std::size_t j = 0; j < rels[i].tail.size(); ++j)
            relations.at(i, j) -= rels[i].tail[j];
    }
    const abgroup::QuotientStructure qs = abgroup::group_from_relations(relations);
    if (qs.free_rank() != 0)
        throw std::logic_error("class group relations left a free part");
    cg.structure = qs.torsion();
    if (cg.structure.order() != h)
        throw std::logic_error("class group structure order mismatch");

    for (const auto& [form, v] : expr) {
        std::vector<std::int64_t> padded(k, 0);
        std::copy(v.begin(), v.end(), padded.begin());
        cg.dlog.emplace(form, qs.project(padded));
    }

    // one concrete form per invariant factor, checked against the table
    const auto hh = static_cast<std::int64_t>(h);
    const std::vector<std::vector<BigInt>> pre = qs.generator_preimages();
    for (std::size_t i = 0; i < pre.size(); ++i) {
        QuadForm gen = principal_form(d);
        for (std::size_t j = 0; j < k; ++j) {
            const std::int64_t ej = to_i64_checked(mod_pos(pre[i][j], hh), "generator exponent");
            if (ej) gen = compose(gen, power(gens[j], ej));
        }
        abgroup::AbElement basis = cg.structure.zero();
        basis.coords[i] = 1;
        if (cg.dlog.at(gen) != basis)
            throw std::logic_error("class group generator coordinates out of sync");
        cg.generators.push_back(gen);
    }

    return cg;
}

std::int64_t unit_data(const Discriminant& d)
{
    if (d.value() == -3) return 6;
    if (d.value() == -4) return 4;
    return 2;
}

std::string to_string(const QuadForm& f)
{
    return "(" + std::to_string(f.a) + ", " + std::to_string(f.b) + ", " +
           std::to_string(f.c) + ")";
}

} // namespace arithbf::quadforms
