#include "arithbf/cyclo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace arithbf::cyclo {

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs))
{
    trim();
}

void IntPolynomial::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPolynomial IntPolynomial::x_pow_minus_one(std::int64_t n)
{
    if (n < 1) throw std::invalid_argument("x^n - 1 needs n >= 1");
    std::vector<BigInt> c(static_cast<std::size_t>(n) + 1);
    c[0] = -1;
    c.back() = 1;
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& rhs) const
{
    if (is_zero() || rhs.is_zero()) return {};
    std::vector<BigInt> c(coeffs_.size() + rhs.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
            c[i + j] += coeffs_[i] * rhs.coeffs_[j];
    }
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& rhs) const
{
    std::vector<BigInt> c(std::max(coeffs_.size(), rhs.coeffs_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(i) - rhs.coeff(i);
    return IntPolynomial(std::move(c));
}

IntPolynomial::DivMod IntPolynomial::divmod(const IntPolynomial& num, const IntPolynomial& den)
{
    if (den.is_zero() || den.coeffs_.back() != 1)
        throw std::invalid_argument("divmod requires a monic divisor");
    std::vector<BigInt> rem = num.coeffs_;
    const int dd = den.degree();
    if (num.degree() < dd) return {IntPolynomial{}, num};
    std::vector<BigInt> quot(num.coeffs_.size() - den.coeffs_.size() + 1);
    for (std::size_t i = quot.size(); i-- > 0;) {
        BigInt c = rem[i + dd];
        if (c == 0) continue;
        quot[i] = c;
        for (int j = 0; j <= dd; ++j)
            rem[i + j] -= c * den.coeffs_[j];
    }
    return {IntPolynomial(std::move(quot)), IntPolynomial(std::move(rem))};
}

IntPolynomial cyclotomic_polynomial(std::int64_t n)
{
    if (n < 1) throw std::invalid_argument("cyclotomic index must be >= 1");
    // Phi_d for each divisor d of n, ascending; the last one is Phi_n.
    std::vector<std::int64_t> divisors;
    for (std::int64_t d = 1; d <= n; ++d)
        if (n % d == 0) divisors.push_back(d);
    std::vector<IntPolynomial> table;
    for (std::int64_t d : divisors) {
        IntPolynomial prod(std::vector<BigInt>{1});
        for (std::size_t i = 0; i < table.size(); ++i)
            if (d % divisors[i] == 0) prod = prod * table[i];
        auto [q, r] = IntPolynomial::divmod(IntPolynomial::x_pow_minus_one(d), prod);
        if (!r.is_zero())
            throw std::logic_error("cyclotomic division left a remainder");
        table.push_back(std::move(q));
    }
    return table.back();
}

PhaseVector::PhaseVector(std::int64_t n) : modulus(n)
{
    if (n < 1) throw std::invalid_argument("phase modulus must be >= 1");
    counts.assign(static_cast<std::size_t>(n), BigInt(0));
}

void PhaseVector::add(std::int64_t phase, const BigInt& count)
{
    if (phase < 0 || phase >= modulus) throw std::out_of_range("phase out of range");
    if (count < 0) throw std::invalid_argument("phase counts are nonnegative");
    counts[static_cast<std::size_t>(phase)] += count;
}

void PhaseVector::merge(const PhaseVector& other)
{
    if (other.modulus != modulus) throw std::invalid_argument("phase modulus mismatch");
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += other.counts[k];
}

void PhaseVector::scale(const BigInt& factor)
{
    if (factor < 0) throw std::invalid_argument("phase counts are nonnegative");
    for (auto& c : counts) c *= factor;
}

BigInt PhaseVector::total() const
{
    BigInt t = 0;
    for (const auto& c : counts) t += c;
    return t;
}

std::optional<BigInt> phase_sum_as_integer(const PhaseVector& p)
{
    IntPolynomial poly{std::vector<BigInt>(p.counts)};
    auto [q, r] = IntPolynomial::divmod(poly, cyclotomic_polynomial(p.modulus));
    (void)q;
    if (r.degree() > 0) return std::nullopt;
    return r.coeff(0);
}

std::complex<double> phase_sum_float(const PhaseVector& p)
{
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < p.counts.size(); ++k) {
        if (p.counts[k] == 0) continue;
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(p.modulus);
        acc += static_cast<double>(p.counts[k]) *
               std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return acc;
}

} // namespace arithbf::cyclo
