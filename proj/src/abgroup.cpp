#include "arithbf/abgroup.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace arithbf::abgroup {

namespace {

std::int64_t mod_pos(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// (a * b) mod m without overflow for |a|,|b| < 2^63.
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m)
{
    return static_cast<std::int64_t>(
        static_cast<__int128>(a) * b % m);
}

} // namespace

InvariantFactors::InvariantFactors(std::vector<std::int64_t> factors)
    : factors_(std::move(factors))
{
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i] < 2)
            throw std::invalid_argument("invariant factor < 2 (trivial factors are dropped, not stored)");
        if (i > 0 && factors_[i] % factors_[i - 1] != 0)
            throw std::invalid_argument("invariant factors must form a divisibility chain");
    }
}

BigInt InvariantFactors::order() const
{
    BigInt o = 1;
    for (auto d : factors_) o *= d;
    return o;
}

std::int64_t InvariantFactors::order_i64() const
{
    return to_i64_checked(order(), "group order");
}

AbElement InvariantFactors::zero() const
{
    return AbElement{std::vector<std::int64_t>(factors_.size(), 0)};
}

AbElement InvariantFactors::add(const AbElement& a, const AbElement& b) const
{
    if (a.coords.size() != factors_.size() || b.coords.size() != factors_.size())
        throw std::invalid_argument("AbElement rank mismatch in add");
    AbElement r = zero();
    for (std::size_t i = 0; i < factors_.size(); ++i)
        r.coords[i] = mod_pos(a.coords[i] + b.coords[i], factors_[i]);
    return r;
}

AbElement InvariantFactors::negate(const AbElement& a) const
{
    if (a.coords.size() != factors_.size())
        throw std::invalid_argument("AbElement rank mismatch in negate");
    AbElement r = zero();
    for (std::size_t i = 0; i < factors_.size(); ++i)
        r.coords[i] = mod_pos(-a.coords[i], factors_[i]);
    return r;
}

AbElement InvariantFactors::scalar_mul(std::int64_t k, const AbElement& a) const
{
    if (a.coords.size() != factors_.size())
        throw std::invalid_argument("AbElement rank mismatch in scalar_mul");
    AbElement r = zero();
    for (std::size_t i = 0; i < factors_.size(); ++i)
        r.coords[i] = mul_mod(mod_pos(k, factors_[i]), a.coords[i], factors_[i]);
    return r;
}

bool InvariantFactors::contains(const AbElement& a) const
{
    if (a.coords.size() != factors_.size()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (a.coords[i] < 0 || a.coords[i] >= factors_[i]) return false;
    return true;
}

AbElement InvariantFactors::element_at(std::int64_t index) const
{
    if (index < 0 || BigInt(index) >= order())
        throw std::out_of_range("element index out of range");
    AbElement r = zero();
    for (std::size_t i = factors_.size(); i-- > 0;) {
        r.coords[i] = index % factors_[i];
        index /= factors_[i];
    }
    return r;
}

std::int64_t InvariantFactors::index_of(const AbElement& a) const
{
    if (!contains(a)) throw std::invalid_argument("element not in group");
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i)
        idx = idx * factors_[i] + a.coords[i];
    return idx;
}

std::int64_t CyclicHom::eval(const AbElement& x) const
{
    if (x.coords.size() != images.size())
        throw std::invalid_argument("CyclicHom/element rank mismatch");
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < images.size(); ++i)
        acc = mod_pos(acc + mul_mod(images[i], x.coords[i], modulus), modulus);
    return acc;
}

bool is_well_defined(const InvariantFactors& domain, const CyclicHom& h)
{
    if (h.modulus < 1 || h.images.size() != domain.rank()) return false;
    for (std::size_t i = 0; i < h.images.size(); ++i) {
        std::int64_t hi = h.images[i];
        if (hi < 0 || hi >= h.modulus) return false;
        if (mul_mod(mod_pos(domain.factors()[i], h.modulus), hi, h.modulus) != 0)
            return false;
    }
    return true;
}

HomEnumerator::HomEnumerator(const InvariantFactors& domain, std::int64_t n)
    : modulus_(n)
{
    if (n < 1) throw std::invalid_argument("hom target modulus must be >= 1");
    for (auto d : domain.factors()) {
        std::int64_t g = std::gcd(d, n);
        choices_.push_back(g);
        steps_.push_back(n / g);
    }
    state_.assign(choices_.size(), 0);
}

BigInt HomEnumerator::count() const
{
    BigInt c = 1;
    for (auto g : choices_) c *= g;
    return c;
}

std::int64_t HomEnumerator::count_i64() const
{
    return to_i64_checked(count(), "hom count");
}

void HomEnumerator::reset()
{
    state_.assign(choices_.size(), 0);
    exhausted_ = false;
}

std::optional<CyclicHom> HomEnumerator::next()
{
    if (exhausted_) return std::nullopt;
    CyclicHom h{modulus_, std::vector<std::int64_t>(state_.size())};
    for (std::size_t i = 0; i < state_.size(); ++i)
        h.images[i] = state_[i] * steps_[i];
    // odometer, last coordinate fastest: lexicographic on image vectors
    std::size_t i = state_.size();
    while (i-- > 0) {
        if (++state_[i] < choices_[i]) return h;
        state_[i] = 0;
    }
    exhausted_ = true;
    return h;
}

CyclicHom HomEnumerator::at(std::int64_t index) const
{
    if (index < 0 || BigInt(index) >= count())
        throw std::out_of_range("hom index out of range");
    CyclicHom h{modulus_, std::vector<std::int64_t>(choices_.size())};
    for (std::size_t i = choices_.size(); i-- > 0;) {
        h.images[i] = (index % choices_[i]) * steps_[i];
        index /= choices_[i];
    }
    return h;
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols)
{
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::multiplied_by(const IntMatrix& rhs) const
{
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix shape mismatch");
    IntMatrix r(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const BigInt& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                r.at(i, j) += a * rhs.at(k, j);
        }
    return r;
}

std::vector<std::int64_t> SnfResult::diagonal() const
{
    std::vector<std::int64_t> d;
    std::size_t k = std::min(s.rows(), s.cols());
    for (std::size_t i = 0; i < k; ++i)
        d.push_back(to_i64_checked(s.at(i, i), "SNF diagonal entry"));
    return d;
}

namespace {

struct SnfWork {
    IntMatrix s, u, v, v_inv;

    void row_swap(std::size_t i, std::size_t j)
    {
        if (i == j) return;
        for (std::size_t c = 0; c < s.cols(); ++c) std::swap(s.at(i, c), s.at(j, c));
        for (std::size_t c = 0; c < u.cols(); ++c) std::swap(u.at(i, c), u.at(j, c));
    }
    void col_swap(std::size_t i, std::size_t j)
    {
        if (i == j) return;
        for (std::size_t r = 0; r < s.rows(); ++r) std::swap(s.at(r, i), s.at(r, j));
        for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v.at(r, i), v.at(r, j));
        for (std::size_t c = 0; c < v_inv.cols(); ++c) std::swap(v_inv.at(i, c), v_inv.at(j, c));
    }
    // row_i += q * row_j
    void row_add(std::size_t i, std::size_t j, const BigInt& q)
    {
        for (std::size_t c = 0; c < s.cols(); ++c) s.at(i, c) += q * s.at(j, c);
        for (std::size_t c = 0; c < u.cols(); ++c) u.at(i, c) += q * u.at(j, c);
    }
    // col_i += q * col_j; v_inv gets the inverse op on rows: row_j -= q * row_i
    void col_add(std::size_t i, std::size_t j, const BigInt& q)
    {
        for (std::size_t r = 0; r < s.rows(); ++r) s.at(r, i) += q * s.at(r, j);
        for (std::size_t r = 0; r < v.rows(); ++r) v.at(r, i) += q * v.at(r, j);
        for (std::size_t c = 0; c < v_inv.cols(); ++c) v_inv.at(j, c) -= q * v_inv.at(i, c);
    }
    void row_negate(std::size_t i)
    {
        for (std::size_t c = 0; c < s.cols(); ++c) s.at(i, c) = -s.at(i, c);
        for (std::size_t c = 0; c < u.cols(); ++c) u.at(i, c) = -u.at(i, c);
    }
};

} // namespace

SnfResult smith_normal_form(const IntMatrix& m)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    SnfWork w{m, IntMatrix::identity(rows), IntMatrix::identity(cols),
              IntMatrix::identity(cols)};
    const std::size_t k = std::min(rows, cols);

    // Clears row t and column t beyond the pivot (t,t), which must be
    // nonzero on entry. Remainders smaller than the pivot get promoted, so
    // the pivot shrinks to the gcd of everything it touches.
    auto eliminate = [&](std::size_t t) {
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (w.s.at(i, t) == 0) continue;
                BigInt q = w.s.at(i, t) / w.s.at(t, t);
                w.row_add(i, t, -q);
                if (w.s.at(i, t) != 0) {
                    w.row_swap(t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (w.s.at(t, j) == 0) continue;
                BigInt q = w.s.at(t, j) / w.s.at(t, t);
                w.col_add(j, t, -q);
                if (w.s.at(t, j) != 0) {
                    w.col_swap(t, j);
                    clean = false;
                }
            }
            if (clean) break;
        }
        if (w.s.at(t, t) < 0) w.row_negate(t);
    };

    for (std::size_t t = 0; t < k; ++t) {
        // smallest-|value| nonzero pivot in the trailing submatrix
        bool found = false;
        std::size_t pi = t, pj = t;
        BigInt best;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                const BigInt& e = w.s.at(i, j);
                if (e == 0) continue;
                BigInt a = abs(e);
                if (!found || a < best) {
                    found = true;
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break;  // trailing block is zero; zeros stay last
        w.row_swap(t, pi);
        w.col_swap(t, pj);
        eliminate(t);
    }

    // Diagonal now; enforce the divisibility chain by folding each offending
    // pair into a gcd/lcm pair until stable.
    for (bool stable = false; !stable;) {
        stable = true;
        for (std::size_t t = 0; t + 1 < k; ++t) {
            const BigInt& a = w.s.at(t, t);
            const BigInt& b = w.s.at(t + 1, t + 1);
            if (a == 0 || b % a == 0) continue;
            w.col_add(t, t + 1, 1);  // puts b into position (t+1, t)
            eliminate(t);
            if (w.s.at(t + 1, t + 1) < 0) w.row_negate(t + 1);
            stable = false;
        }
    }

    SnfResult result{std::move(w.u), std::move(w.s), std::move(w.v), std::move(w.v_inv)};

    // exact recomposition check; this cannot fail unless the code above is wrong
    if (result.u.multiplied_by(m).multiplied_by(result.v) != result.s)
        throw std::logic_error("smith_normal_form: U*M*V != S");
    for (std::size_t t = 0; t + 1 < k; ++t) {
        const BigInt& a = result.s.at(t, t);
        const BigInt& b = result.s.at(t + 1, t + 1);
        if (a == 0 && b != 0)
            throw std::logic_error("smith_normal_form: zero before nonzero on diagonal");
        if (a != 0 && b % a != 0)
            throw std::logic_error("smith_normal_form: diagonal not a divisibility chain");
    }
    return result;
}

QuotientStructure group_from_relations(const IntMatrix& relations)
{
    SnfResult snf = smith_normal_form(relations);
    const std::size_t g = relations.cols();
    const std::size_t k = std::min(relations.rows(), g);

    QuotientStructure q;
    std::vector<std::int64_t> factors;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < k; ++i) {
        BigInt d = snf.s.at(i, i);
        if (d == 0) continue;
        ++nonzero;
        if (d >= 2) {
            factors.push_back(to_i64_checked(d, "invariant factor"));
            q.kept_.push_back(i);
        }
    }
    q.torsion_ = InvariantFactors(std::move(factors));
    q.free_rank_ = g - nonzero;
    q.v_ = std::move(snf.v);
    q.v_inv_ = std::move(snf.v_inv);
    return q;
}

AbElement QuotientStructure::project(const std::vector<std::int64_t>& exponents) const
{
    if (exponents.size() != v_.rows())
        throw std::invalid_argument("exponent vector has wrong length");
    AbElement r = torsion_.zero();
    for (std::size_t out = 0; out < kept_.size(); ++out) {
        BigInt acc = 0;
        const std::size_t j = kept_[out];
        for (std::size_t i = 0; i < v_.rows(); ++i)
            acc += BigInt(exponents[i]) * v_.at(i, j);
        const std::int64_t d = torsion_.factors()[out];
        BigInt m = acc % d;
        if (m < 0) m += d;
        r.coords[out] = static_cast<std::int64_t>(m);
    }
    return r;
}

std::vector<std::vector<BigInt>> QuotientStructure::generator_preimages() const
{
    std::vector<std::vector<BigInt>> rows;
    for (std::size_t j : kept_) {
        std::vector<BigInt> row(v_inv_.cols());
        for (std::size_t c = 0; c < v_inv_.cols(); ++c) row[c] = v_inv_.at(j, c);
        rows.push_back(std::move(row));
    }
    return rows;
}

EmbeddedSubgroup::EmbeddedSubgroup(InvariantFactors parent, InvariantFactors sub,
                                   std::vector<AbElement> generators)
    : parent_(std::move(parent)), sub_(std::move(sub)), gens_(std::move(generators))
{
    if (gens_.size() != sub_.rank())
        throw std::invalid_argument("subgroup generator count mismatch");
}

AbElement EmbeddedSubgroup::embed(const AbElement& x) const
{
    if (x.coords.size() != sub_.rank())
        throw std::invalid_argument("element rank mismatch in embed");
    AbElement r = parent_.zero();
    for (std::size_t i = 0; i < gens_.size(); ++i)
        r = parent_.add(r, parent_.scalar_mul(x.coords[i], gens_[i]));
    return r;
}

EmbeddedSubgroup torsion_subgroup(const InvariantFactors& g, std::int64_t n)
{
    if (n < 1) throw std::invalid_argument("torsion order must be >= 1");
    std::vector<std::int64_t> factors;
    std::vector<AbElement> gens;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        const std::int64_t d = g.factors()[i];
        const std::int64_t gc = std::gcd(d, n);
        if (gc < 2) continue;
        factors.push_back(gc);
        AbElement e = g.zero();
        e.coords[i] = d / gc;
        gens.push_back(std::move(e));
    }
    return EmbeddedSubgroup(g, InvariantFactors(std::move(factors)), std::move(gens));
}

EmbeddedSubgroup n_times_torsion(const InvariantFactors& g, std::int64_t n)
{
    if (n < 1) throw std::invalid_argument("torsion order must be >= 1");
    std::vector<std::int64_t> factors;
    std::vector<AbElement> gens;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        const std::int64_t d = g.factors()[i];
        // gcd(d, n^2) without forming n^2: gcd(d, n) * gcd(d / gcd(d,n), n)
        const std::int64_t g1 = std::gcd(d, n);
        const std::int64_t g2 = g1 * std::gcd(d / g1, n);
        const std::int64_t f = g2 / g1;
        if (f < 2) continue;
        factors.push_back(f);
        // generator: n * (d / g2) inside Z/d, an element of order g2/g1
        AbElement e = g.zero();
        e.coords[i] = static_cast<std::int64_t>(
            static_cast<__int128>(n % d) * (d / g2) % d);
        gens.push_back(std::move(e));
    }
    return EmbeddedSubgroup(g, InvariantFactors(std::move(factors)), std::move(gens));
}

QuotientModN::QuotientModN(InvariantFactors parent, std::int64_t n)
    : parent_(std::move(parent))
{
    if (n < 1) throw std::invalid_argument("quotient modulus must be >= 1");
    std::vector<std::int64_t> factors;
    for (std::size_t i = 0; i < parent_.rank(); ++i) {
        const std::int64_t gc = std::gcd(parent_.factors()[i], n);
        if (gc < 2) continue;
        factors.push_back(gc);
        kept_.push_back(i);
        mods_.push_back(gc);
    }
    quot_ = InvariantFactors(std::move(factors));
}

AbElement QuotientModN::project(const AbElement& x) const
{
    if (x.coords.size() != parent_.rank())
        throw std::invalid_argument("element rank mismatch in project");
    AbElement r = quot_.zero();
    for (std::size_t i = 0; i < kept_.size(); ++i)
        r.coords[i] = mod_pos(x.coords[kept_[i]], mods_[i]);
    return r;
}

AbElement QuotientModN::lift(const AbElement& q) const
{
    if (q.coords.size() != quot_.rank())
        throw std::invalid_argument("element rank mismatch in lift");
    AbElement r = parent_.zero();
    for (std::size_t i = 0; i < kept_.size(); ++i)
        r.coords[kept_[i]] = q.coords[i];
    return r;
}

QuotientModN quotient_mod_n(const InvariantFactors& g, std::int64_t n)
{
    return QuotientModN(g, n);
}

} // namespace arithbf::abgroup
