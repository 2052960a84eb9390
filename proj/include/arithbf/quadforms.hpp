#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "arithbf/abgroup.hpp"
#include "arithbf/bigint.hpp"

namespace arithbf::quadforms {

// Fundamental negative discriminant: D = 1 mod 4 squarefree, or D = 4m with
// m = 2,3 mod 4 squarefree. Construction rejects anything else; the reason
// string from check_fundamental() names the failed condition.
class Discriminant {
public:
    explicit Discriminant(std::int64_t d);
    std::int64_t value() const { return d_; }

    // empty string when fundamental, else a diagnostic
    static std::string check_fundamental(std::int64_t d);

private:
    std::int64_t d_;
};

// Primitive positive definite integral binary quadratic form a x^2 + b xy +
// c y^2 of discriminant b^2 - 4ac < 0. Forms are plain value triples; class
// arithmetic lives in the free functions below.
struct QuadForm {
    std::int64_t a = 1, b = 0, c = 0;

    std::int64_t discriminant() const;
    bool is_primitive() const;
    // |b| <= a <= c with b >= 0 when |b| = a or a = c
    bool is_reduced() const;

    friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

// The unique reduced representative of the class of f. Rejects forms that
// are not primitive or not positive definite.
QuadForm reduce(const QuadForm& f);

// All reduced primitive forms of discriminant D, sorted; the length is the
// class number h(D).
std::vector<QuadForm> enumerate_reduced(const Discriminant& d);

// (1, 0, -D/4) or (1, 1, (1-D)/4)
QuadForm principal_form(const Discriminant& d);

// Reduced Dirichlet composition: the second form is first moved to an
// equivalent one whose leading coefficient is coprime to f.a, then the two
// are put in concordant position and multiplied. Throws on discriminant
// mismatch.
QuadForm compose(const QuadForm& f, const QuadForm& g);

QuadForm inverse_form(const QuadForm& f);

QuadForm power(const QuadForm& f, std::int64_t e);

// The form class group: structure, generating forms (one per invariant
// factor), and the discrete-log table sending every reduced form to its
// canonical coordinates. The table is a group isomorphism.
struct ClassGroup {
    std::int64_t discriminant;
    std::vector<QuadForm> reduced_forms;
    abgroup::InvariantFactors structure;
    std::vector<QuadForm> generators;
    std::map<QuadForm, abgroup::AbElement> dlog;

    std::int64_t class_number() const { return static_cast<std::int64_t>(reduced_forms.size()); }
};

ClassGroup class_group(const Discriminant& d);

// Order w of the roots of unity: 6 for D=-3, 4 for D=-4, 2 otherwise. The
// unit group of an imaginary quadratic order is exactly its roots of unity.
std::int64_t unit_data(const Discriminant& d);

std::string to_string(const QuadForm& f);

} // namespace arithbf::quadforms
