#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "arithbf/bigint.hpp"

namespace arithbf::cyclo {

// Integer polynomial, lowest degree first, no trailing zero coefficients.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<BigInt> coeffs);

    // degree of the zero polynomial is -1
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }
    BigInt coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : BigInt(0); }

    static IntPolynomial x_pow_minus_one(std::int64_t n);

    IntPolynomial operator*(const IntPolynomial& rhs) const;
    IntPolynomial operator-(const IntPolynomial& rhs) const;

    // Long division by a monic divisor; exact over the integers.
    struct DivMod;
    static DivMod divmod(const IntPolynomial& num, const IntPolynomial& den);

    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

private:
    std::vector<BigInt> coeffs_;
    void trim();
};

struct IntPolynomial::DivMod {
    IntPolynomial quotient, remainder;
};

// Phi_n, computed by exact division of x^n - 1 by the product of all
// lower-level cyclotomic polynomials. Monic of degree phi(n).
IntPolynomial cyclotomic_polynomial(std::int64_t n);

// Multiset of phases k/n: counts[k] pairs contributed phase k/n. The value
// it represents is sum counts[k] * zeta_n^k, an element of Z[zeta_n].
struct PhaseVector {
    std::int64_t modulus = 1;
    std::vector<BigInt> counts;

    explicit PhaseVector(std::int64_t n);
    void add(std::int64_t phase, const BigInt& count = 1);
    void merge(const PhaseVector& other);
    void scale(const BigInt& factor);
    BigInt total() const;

    friend bool operator==(const PhaseVector&, const PhaseVector&) = default;
};

// The represented value as an exact integer, or nullopt when the sum is
// not an integer. Decided by reducing sum counts[k] x^k modulo Phi_n and
// checking that the remainder is constant.
std::optional<BigInt> phase_sum_as_integer(const PhaseVector& p);

// Double-precision rendering for display; never used for verdicts.
std::complex<double> phase_sum_float(const PhaseVector& p);

} // namespace arithbf::cyclo
