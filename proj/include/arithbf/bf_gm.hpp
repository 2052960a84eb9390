#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "arithbf/abgroup.hpp"
#include "arithbf/bigint.hpp"
#include "arithbf/cyclo.hpp"

namespace arithbf::bf_gm {

// Arithmetic invariants of a totally imaginary field of degree 2r: class
// group, unit rank r-1, and the order w of the roots of unity. Either
// computed natively (imaginary quadratic, via quadforms) or ingested.
struct FieldData {
    std::string label;
    abgroup::InvariantFactors cl;
    std::int64_t unit_rank = 0;
    std::int64_t w = 2;
    std::int64_t degree = 2;

    // throws std::invalid_argument naming the violated condition
    void validate() const;
};

FieldData field_from_discriminant(std::int64_t disc);

struct GMInstance {
    FieldData field;
    std::int64_t n = 1;

    void validate() const;
};

// |H^i(X, mu_n)| for i = 0..3; everything above vanishes.
struct CohomologyOrders {
    BigInt h0, h1, h2, h3;

    friend bool operator==(const CohomologyOrders&, const CohomologyOrders&) = default;
};

CohomologyOrders cohomology_orders(const GMInstance& inst);

// Class in the multiplicative first cohomology group: a unit-class index u
// (the unit part has order gcd(w,n) * n^unit_rank) together with an
// n-torsion ideal class t. The extension need not split, but the pairing
// only sees t, so a set-level product suffices.
struct H1MuElement {
    std::int64_t u = 0;
    abgroup::AbElement t;  // coordinates in the n-torsion subgroup of cl
};

// The product identity's right-hand side, kept factored the way it is
// proved: torsion-shift count, unit classes, class-group quotient.
struct ClosedForm {
    BigInt value;
    BigInt etale_factor;     // |n * Cl[n^2]|
    BigInt unit_factor;      // gcd(w, n) * n^unit_rank
    BigInt quotient_factor;  // |Cl / n|
    // unit_factor * |Cl|, present exactly when Cl is all n-torsion (the
    // value the sum stabilizes to once n kills the class group)
    std::optional<BigInt> stabilized;
};

ClosedForm closed_form_gm(const GMInstance& inst);

// Number of unramified Z/n-etale algebras embeddable in the ring of
// integers, derived from the product identity: equals |n * Cl[n^2]|.
BigInt etale_count(const GMInstance& inst);

enum class Mode { brute, closed, both };

struct Options {
    Mode mode = Mode::both;
    // The unit coordinate never changes a phase, so its loop contributes a
    // plain multiplicative factor; with unit_shortcut the factor is applied
    // to the counts, without it the loop genuinely runs.
    bool unit_shortcut = true;
    int jobs = 1;
    BigInt pair_budget = 100000000;
    // Forces every phase to zero. Only the self-test negative control sets
    // this; it must make the named identities fail.
    bool debug_zero_pairing = false;
};

// Per-instance scaffolding: the n-torsion subgroup, the mod-n quotient,
// and the pairing evaluation built from them.
class Evaluator {
public:
    explicit Evaluator(GMInstance inst);

    const GMInstance& instance() const { return inst_; }
    const abgroup::InvariantFactors& torsion_group() const { return tors_.group(); }
    const abgroup::InvariantFactors& quotient_group() const { return quot_.group(); }
    const BigInt& unit_class_count() const { return unit_count_; }

    // connecting map: embed Cl[n] into Cl, then reduce mod n*Cl
    abgroup::AbElement bockstein(const H1MuElement& b) const;
    // a coset representative in Cl of bockstein(b), the point where
    // characters get evaluated
    abgroup::AbElement lifted_bockstein(const H1MuElement& b) const;
    // k of the phase k/n attached to the pair (a, b)
    std::int64_t bf_phase(const abgroup::CyclicHom& a, const H1MuElement& b) const;

private:
    GMInstance inst_;
    abgroup::EmbeddedSubgroup tors_;
    abgroup::QuotientModN quot_;
    BigInt unit_count_;
};

struct Report {
    GMInstance instance;
    CohomologyOrders orders;
    ClosedForm closed;
    BigInt etale;
    BigInt pair_count;
    std::optional<cyclo::PhaseVector> phases;
    std::optional<BigInt> brute_value;
    bool match = true;
};

// Enumerates all pairs (brute/both), or just evaluates the closed form,
// and cross-checks the two. Throws BudgetExceeded when the pair count is
// over budget and logic_error if the phase sum fails to be an integer.
Report path_integral_gm(const GMInstance& inst, const Options& opt = {});

} // namespace arithbf::bf_gm
