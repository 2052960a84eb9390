#include "arithbf/bf_av.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "arithbf/errors.hpp"
#include "parallel.hpp"

namespace arithbf::bf_av {

namespace {

constexpr std::int64_t kInjectivityScanCap = 10'000'000;
constexpr int kRandomDeltaAttempts = 1000;

std::int64_t mod_pos64(std::int64_t v, std::int64_t m)
{
    const std::int64_t r = v % m;
    return r < 0 ? r + m : r;
}

std::int64_t mul_mod64(std::int64_t a, std::int64_t b, std::int64_t m)
{
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

// unbiased draw from [0, k), deterministic across platforms since the
// mt19937_64 stream itself is pinned by the standard
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

abgroup::CyclicHom zero_hom(std::int64_t n, std::size_t rank)
{
    return {n, std::vector<std::int64_t>(rank, 0)};
}

SelChar zero_char(const AVModel& m)
{
    return {zero_hom(m.n, m.mw_a.rank()), zero_hom(m.n, m.sha_a.rank())};
}

void add_scaled(SelChar& acc, std::int64_t k, const SelChar& x, std::int64_t n)
{
    for (std::size_t i = 0; i < acc.on_mw.images.size(); ++i)
        acc.on_mw.images[i] =
            mod_pos64(acc.on_mw.images[i] + mul_mod64(k, x.on_mw.images[i], n), n);
    for (std::size_t i = 0; i < acc.on_sha.images.size(); ++i)
        acc.on_sha.images[i] =
            mod_pos64(acc.on_sha.images[i] + mul_mod64(k, x.on_sha.images[i], n), n);
}

// prime -> exponent over the factors of a chain (all factors known to be
// small; trial division is plenty)
std::map<std::int64_t, std::vector<std::int64_t>> prime_profiles(
    const abgroup::InvariantFactors& g)
{
    std::map<std::int64_t, std::vector<std::int64_t>> out;
    for (std::int64_t d : g.factors()) {
        for (std::int64_t p = 2; p <= d / p; ++p) {
            if (d % p != 0) continue;
            std::int64_t e = 0;
            while (d % p == 0) { d /= p; ++e; }
            out[p].push_back(e);
        }
        if (d > 1) out[d].push_back(1);
    }
    for (auto& [p, es] : out) std::sort(es.begin(), es.end(), std::greater<>());
    return out;
}

bool is_injective(const abgroup::InvariantFactors& sha_b,
                  const std::vector<SelChar>& images, const AVModel& m)
{
    const std::int64_t count = sha_b.order_i64();
    if (count > kInjectivityScanCap)
        throw BudgetExceeded("sha_b too large to verify delta injectivity by enumeration");
    std::int64_t zeros = 0;
    for (std::int64_t idx = 0; idx < count; ++idx) {
        const abgroup::AbElement x = sha_b.element_at(idx);
        SelChar c = zero_char(m);
        for (std::size_t j = 0; j < images.size(); ++j)
            add_scaled(c, x.coords[j], images[j], m.n);
        if (c.is_zero()) ++zeros;
    }
    return zeros == 1;
}

std::vector<SelChar> canonical_images(const AVModel& m)
{
    if (m.sha_b.factors() != m.sha_a.factors())
        throw std::invalid_argument(
            "canonical delta requires sha_b to equal the dual of sha_a");
    std::vector<SelChar> images;
    for (std::size_t j = 0; j < m.sha_a.rank(); ++j) {
        SelChar c = zero_char(m);
        c.on_sha.images[j] = m.n / m.sha_a.factors()[j];
        images.push_back(std::move(c));
    }
    return images;
}

std::vector<SelChar> matrix_images(const AVModel& m,
                                   const std::vector<std::vector<std::int64_t>>& rows)
{
    if (rows.size() != m.sha_b.rank())
        throw std::invalid_argument("delta matrix must have one row per sha_b generator");
    std::vector<SelChar> images;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != m.sha_a.rank())
            throw std::invalid_argument(
                "delta matrix must have one column per sha_a generator");
        const std::int64_t sj = m.sha_b.factors()[j];
        SelChar c = zero_char(m);
        for (std::size_t i = 0; i < rows[j].size(); ++i) {
            const std::int64_t di = m.sha_a.factors()[i];
            const std::int64_t cji = mod_pos64(rows[j][i], di);
            // the image of a generator of order s_j must have order
            // dividing s_j: c * s_j = 0 mod d_i
            if (mul_mod64(mod_pos64(sj, di), cji, di) != 0)
                throw std::invalid_argument(
                    "delta matrix entry (" + std::to_string(j) + "," + std::to_string(i) +
                    ") must be a multiple of " + std::to_string(di / std::gcd(di, sj)));
            c.on_sha.images[i] = mul_mod64(cji, m.n / di, m.n);
        }
        images.push_back(std::move(c));
    }
    return images;
}

std::vector<SelChar> seeded_images(const AVModel& m)
{
    if (!embeds_into(m.sha_b, m.sha_a))
        throw std::invalid_argument("no injective delta exists for the given sha shapes");
    std::mt19937_64 rng(m.delta.seed);
    for (int attempt = 0; attempt < kRandomDeltaAttempts; ++attempt) {
        std::vector<std::vector<std::int64_t>> rows(m.sha_b.rank());
        for (std::size_t j = 0; j < m.sha_b.rank(); ++j) {
            const std::int64_t sj = m.sha_b.factors()[j];
            rows[j].resize(m.sha_a.rank());
            for (std::size_t i = 0; i < m.sha_a.rank(); ++i) {
                const std::int64_t di = m.sha_a.factors()[i];
                const std::int64_t step = di / std::gcd(di, sj);
                rows[j][i] = step * static_cast<std::int64_t>(
                                        rand_below(rng, static_cast<std::uint64_t>(di / step)));
            }
        }
        std::vector<SelChar> images = matrix_images(m, rows);
        if (is_injective(m.sha_b, images, m)) return images;
    }
    throw std::invalid_argument("failed to draw an injective delta after " +
                                std::to_string(kRandomDeltaAttempts) + " attempts");
}

void require_n_torsion(const abgroup::InvariantFactors& g, std::int64_t n, const char* name)
{
    for (const std::int64_t d : g.factors())
        if (n % d != 0)
            throw std::invalid_argument(std::string(name) + " has invariant factor " +
                                        std::to_string(d) + " not dividing n");
}

} // namespace

void AVModel::validate() const
{
    if (n < 2) throw std::invalid_argument("model n must be >= 2");
    require_n_torsion(mw_a, n, "mw_a");
    require_n_torsion(mw_b, n, "mw_b");
    require_n_torsion(sha_a, n, "sha_a");
    require_n_torsion(sha_b, n, "sha_b");
    if (sha_a.order() != sha_b.order())
        throw std::invalid_argument("sha_a and sha_b must have equal order");
}

bool SelChar::is_zero() const
{
    const auto zero = [](const std::vector<std::int64_t>& v) {
        return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
    };
    return zero(on_mw.images) && zero(on_sha.images);
}

std::int64_t SelChar::eval(const SelElement& a) const
{
    const std::int64_t s = on_mw.eval(a.mw) + on_sha.eval(a.sha);
    return s >= on_mw.modulus ? s - on_mw.modulus : s;
}

bool embeds_into(const abgroup::InvariantFactors& sub,
                 const abgroup::InvariantFactors& ambient)
{
    const auto sp = prime_profiles(sub);
    const auto ap = prime_profiles(ambient);
    for (const auto& [p, es] : sp) {
        const auto it = ap.find(p);
        if (it == ap.end()) return false;
        if (es.size() > it->second.size()) return false;
        for (std::size_t i = 0; i < es.size(); ++i)
            if (es[i] > it->second[i]) return false;
    }
    return true;
}

AVInstance AVInstance::build(const AVModel& m)
{
    m.validate();
    AVInstance inst;
    inst.model_ = m;
    switch (m.delta.kind) {
        case DeltaChoice::Kind::canonical:
            inst.delta_images_ = canonical_images(m);
            break;
        case DeltaChoice::Kind::matrix:
            inst.delta_images_ = matrix_images(m, m.delta.matrix);
            break;
        case DeltaChoice::Kind::seed:
            inst.delta_images_ = seeded_images(m);
            break;
    }
    if (!is_injective(m.sha_b, inst.delta_images_, m))
        throw std::invalid_argument("delta is not injective on sha_b");
    return inst;
}

BigInt AVInstance::sel_a_order() const
{
    return model_.mw_a.order() * model_.sha_a.order();
}

BigInt AVInstance::sel_b_order() const
{
    return model_.mw_b.order() * model_.sha_b.order();
}

SelChar AVInstance::bockstein(const SelElement& b) const
{
    SelChar c = zero_char(model_);
    for (std::size_t j = 0; j < delta_images_.size(); ++j)
        add_scaled(c, b.sha.coords[j], delta_images_[j], model_.n);
    return c;
}

std::int64_t AVInstance::bf_phase(const SelElement& a, const SelElement& b) const
{
    return bockstein(b).eval(a);
}

Report path_integral_av(const AVInstance& inst, const Options& opt)
{
    const AVModel& m = inst.model();
    Report rep;
    rep.model = m;
    rep.closed_value = m.mw_a.order() * m.mw_b.order() * m.sha_a.order();
    rep.closed_value_symmetric = m.mw_b.order() * m.mw_a.order() * m.sha_b.order();
    rep.pair_count = inst.sel_a_order() * inst.sel_b_order();

    if (rep.pair_count > opt.pair_budget)
        throw BudgetExceeded("pair count " + big_to_string(rep.pair_count) +
                             " exceeds budget " + big_to_string(opt.pair_budget) +
                             " (raise --budget-pairs to override)");

    const std::int64_t mwa_count = m.mw_a.order_i64();
    const std::int64_t shaa_count = m.sha_a.order_i64();
    const std::int64_t mwb_count = m.mw_b.order_i64();
    const std::int64_t shab_count = m.sha_b.order_i64();
    const std::int64_t bcount = mwb_count * shab_count;

    // materialize the a side once; every b-iteration walks the same list
    std::vector<SelElement> a_side;
    a_side.reserve(static_cast<std::size_t>(mwa_count * shaa_count));
    for (std::int64_t i = 0; i < mwa_count; ++i)
        for (std::int64_t j = 0; j < shaa_count; ++j)
            a_side.push_back({m.mw_a.element_at(i), m.sha_a.element_at(j)});

    const int jobs = std::max(1, opt.jobs);
    std::vector<cyclo::PhaseVector> locals(static_cast<std::size_t>(jobs),
                                           cyclo::PhaseVector(m.n));
    detail::run_striped(jobs, [&](int w) {
        cyclo::PhaseVector& pv = locals[static_cast<std::size_t>(w)];
        for (std::int64_t bi = w; bi < bcount; bi += jobs) {
            const SelElement b{m.mw_b.element_at(bi / shab_count),
                               m.sha_b.element_at(bi % shab_count)};
            const SelChar chi = inst.bockstein(b);
            for (const SelElement& a : a_side)
                pv.add(opt.debug_zero_pairing ? 0 : chi.eval(a));
        }
    });

    cyclo::PhaseVector pv = std::move(locals.front());
    for (std::size_t j = 1; j < locals.size(); ++j) pv.merge(locals[j]);

    if (pv.total() != rep.pair_count)
        throw std::logic_error("enumerated pair count disagrees with model orders");
    const std::optional<BigInt> value = cyclo::phase_sum_as_integer(pv);
    if (!value)
        throw std::logic_error("phase sum is not an integer; pairing evaluation is inconsistent");
    rep.brute_value = *value;
    rep.phases = std::move(pv);
    rep.match = (*rep.brute_value == rep.closed_value);
    return rep;
}

namespace {

abgroup::InvariantFactors random_chain(std::mt19937_64& rng, std::int64_t n,
                                       std::int64_t max_order)
{
    std::vector<std::int64_t> fs;
    std::int64_t room = max_order, prev = n;
    while (prev > 1 && room >= 2) {
        if (rand_below(rng, 2) == 0) break;
        std::vector<std::int64_t> ds;
        for (std::int64_t d = 2; d <= prev && d <= room; ++d)
            if (prev % d == 0) ds.push_back(d);
        if (ds.empty()) break;
        const std::int64_t d = ds[rand_below(rng, ds.size())];
        fs.push_back(d);
        room /= d;
        prev = d;
    }
    std::reverse(fs.begin(), fs.end());
    return abgroup::InvariantFactors(std::move(fs));
}

std::int64_t valuation(std::int64_t n, std::int64_t p)
{
    std::int64_t v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

// random group of the same order as `like`, still n-torsion: per prime,
// repartition the exponent into parts bounded by the valuation of n
abgroup::InvariantFactors random_same_order(std::mt19937_64& rng, std::int64_t n,
                                            const abgroup::InvariantFactors& like)
{
    std::map<std::int64_t, std::int64_t> total;  // prime -> exponent of |like|
    for (const auto& [p, es] : prime_profiles(like))
        for (const std::int64_t e : es) total[p] += e;

    std::map<std::int64_t, std::vector<std::int64_t>> parts;
    std::size_t max_len = 0;
    for (const auto& [p, e] : total) {
        const std::int64_t cap = valuation(n, p);
        std::int64_t rem = e;
        auto& ps = parts[p];
        while (rem > 0) {
            const auto part = static_cast<std::int64_t>(
                1 + rand_below(rng, static_cast<std::uint64_t>(std::min(cap, rem))));
            ps.push_back(part);
            rem -= part;
        }
        std::sort(ps.begin(), ps.end(), std::greater<>());
        max_len = std::max(max_len, ps.size());
    }

    std::vector<std::int64_t> fs;
    for (std::size_t k = 0; k < max_len; ++k) {
        std::int64_t f = 1;
        for (const auto& [p, ps] : parts)
            if (k < ps.size()) f *= pow_big(p, ps[k]).convert_to<std::int64_t>();
        fs.push_back(f);
    }
    std::reverse(fs.begin(), fs.end());
    return abgroup::InvariantFactors(std::move(fs));
}

} // namespace

AVModel random_model(std::uint64_t seed, std::int64_t n, std::int64_t max_side_order)
{
    if (n < 2) throw std::invalid_argument("model n must be >= 2");
    if (max_side_order < 1) throw std::invalid_argument("max_side_order must be >= 1");

    std::mt19937_64 rng(seed);
    AVModel m;
    m.n = n;
    m.sha_a = random_chain(rng, n, max_side_order);
    m.mw_a = random_chain(rng, n, max_side_order / m.sha_a.order_i64());
    m.sha_b = random_same_order(rng, n, m.sha_a);
    m.mw_b = random_chain(rng, n, max_side_order / m.sha_b.order_i64());

    if (embeds_into(m.sha_b, m.sha_a)) {
        m.delta.kind = DeltaChoice::Kind::seed;
        m.delta.seed = rng();
    } else {
        m.sha_b = m.sha_a;
        m.delta.kind = DeltaChoice::Kind::canonical;
    }
    m.validate();
    return m;
}

} // namespace arithbf::bf_av
