#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "arithbf/bigint.hpp"

namespace arithbf::abgroup {

// Element of a finite abelian group in canonical coordinates: one residue
// per invariant factor, 0 <= coords[i] < d_i.
struct AbElement {
    std::vector<std::int64_t> coords;

    friend auto operator<=>(const AbElement&, const AbElement&) = default;
};

/*
 * A finite abelian group as its invariant-factor chain d_1 | d_2 | ... | d_k,
 * every d_i >= 2. The empty chain is the trivial group; [1] is never stored,
 * so equal factor lists mean isomorphic groups.
 */
class InvariantFactors {
public:
    InvariantFactors() = default;
    explicit InvariantFactors(std::vector<std::int64_t> factors);

    const std::vector<std::int64_t>& factors() const { return factors_; }
    std::size_t rank() const { return factors_.size(); }
    bool is_trivial() const { return factors_.empty(); }
    BigInt order() const;
    // Order as int64; throws std::overflow_error on groups too large to
    // enumerate, which is already past any sane enumeration budget.
    std::int64_t order_i64() const;

    AbElement zero() const;
    AbElement add(const AbElement& a, const AbElement& b) const;
    AbElement negate(const AbElement& a) const;
    AbElement scalar_mul(std::int64_t k, const AbElement& a) const;
    bool contains(const AbElement& a) const;

    // Mixed-radix enumeration, last coordinate fastest. Deterministic, so
    // parallel workers can partition by index.
    AbElement element_at(std::int64_t index) const;
    std::int64_t index_of(const AbElement& a) const;

    friend bool operator==(const InvariantFactors&, const InvariantFactors&) = default;

private:
    std::vector<std::int64_t> factors_;
};

// Homomorphism from a group with canonical generators into Z/n, stored as
// the generator images. Well-definedness (d_i * h_i = 0 mod n) is checked
// at construction sites, not on every eval.
struct CyclicHom {
    std::int64_t modulus = 1;
    std::vector<std::int64_t> images;

    // sum h_i * x_i mod n; throws std::invalid_argument on rank mismatch.
    std::int64_t eval(const AbElement& x) const;

    friend auto operator<=>(const CyclicHom&, const CyclicHom&) = default;
};

bool is_well_defined(const InvariantFactors& domain, const CyclicHom& h);

// Streams every hom domain -> Z/n exactly once, lexicographically ordered
// on the image vectors. count() = prod gcd(d_i, n).
class HomEnumerator {
public:
    HomEnumerator(const InvariantFactors& domain, std::int64_t n);

    BigInt count() const;
    std::int64_t count_i64() const;
    std::optional<CyclicHom> next();
    void reset();
    // Random access for partitioned consumption; index in [0, count).
    CyclicHom at(std::int64_t index) const;

private:
    std::int64_t modulus_;
    std::vector<std::int64_t> choices_;  // gcd(d_i, n)
    std::vector<std::int64_t> steps_;    // n / gcd(d_i, n)
    std::vector<std::int64_t> state_;
    bool exhausted_ = false;
};

// Dense integer matrix over BigInt; row-major. Sized for the small
// presentation and relation matrices that appear here, not for linear
// algebra at scale.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    BigInt& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const BigInt& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntMatrix multiplied_by(const IntMatrix& rhs) const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BigInt> data_;
};

// U * M * V = S with S diagonal, s_1 | s_2 | ..., U and V unimodular.
// v_inv tracks the inverse of V so callers can pull generators back.
struct SnfResult {
    IntMatrix u, s, v, v_inv;
    std::vector<std::int64_t> diagonal() const;
};

SnfResult smith_normal_form(const IntMatrix& m);

/*
 * Z^g modulo the row lattice of a relation matrix: the torsion part as an
 * invariant-factor chain plus the free rank, with the coordinate change
 * needed to map generator exponent vectors into canonical coordinates.
 */
class QuotientStructure {
public:
    const InvariantFactors& torsion() const { return torsion_; }
    std::size_t free_rank() const { return free_rank_; }

    // Canonical torsion coordinates of an exponent vector over the original
    // g generators. The free part is discarded.
    AbElement project(const std::vector<std::int64_t>& exponents) const;

    // For each invariant factor, the exponent vector (over the original
    // generators) of an element generating that cyclic factor.
    std::vector<std::vector<BigInt>> generator_preimages() const;

    friend QuotientStructure group_from_relations(const IntMatrix& relations);

private:
    InvariantFactors torsion_;
    std::size_t free_rank_ = 0;
    IntMatrix v_, v_inv_;
    std::vector<std::size_t> kept_;  // diagonal positions with s_i >= 2
};

QuotientStructure group_from_relations(const IntMatrix& relations);

// A subgroup of G presented by its own invariant factors together with the
// images of its canonical generators inside G.
class EmbeddedSubgroup {
public:
    EmbeddedSubgroup(InvariantFactors parent, InvariantFactors sub,
                     std::vector<AbElement> generators);

    const InvariantFactors& group() const { return sub_; }
    const InvariantFactors& parent() const { return parent_; }
    const std::vector<AbElement>& generators_in_parent() const { return gens_; }
    AbElement embed(const AbElement& x) const;

private:
    InvariantFactors parent_, sub_;
    std::vector<AbElement> gens_;
};

// G[n]: elements killed by n. |G[n]| = prod gcd(d_i, n).
EmbeddedSubgroup torsion_subgroup(const InvariantFactors& g, std::int64_t n);

// n * G[n^2], a subgroup of G[n] of order prod gcd(d_i,n^2)/gcd(d_i,n).
EmbeddedSubgroup n_times_torsion(const InvariantFactors& g, std::int64_t n);

// G/nG with the coordinatewise projection and a section back into G.
class QuotientModN {
public:
    QuotientModN(InvariantFactors parent, std::int64_t n);

    const InvariantFactors& group() const { return quot_; }
    AbElement project(const AbElement& x) const;
    // A set-level section: coset representative with small coordinates.
    AbElement lift(const AbElement& q) const;

private:
    InvariantFactors parent_, quot_;
    std::vector<std::size_t> kept_;
    std::vector<std::int64_t> mods_;
};

QuotientModN quotient_mod_n(const InvariantFactors& g, std::int64_t n);

} // namespace arithbf::abgroup
