#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "arithbf/abgroup.hpp"
#include "arithbf/bigint.hpp"
#include "arithbf/cyclo.hpp"

namespace arithbf::bf_av {

// How the injection of sha_b into the dual of sha_a is chosen: the
// coordinate-wise canonical one (sha_b must equal sha_a's factors), an
// explicit coefficient matrix, or a seeded random draw.
struct DeltaChoice {
    enum class Kind { canonical, matrix, seed };
    Kind kind = Kind::canonical;
    // rows indexed by sha_b generators, columns by sha_a dual generators;
    // entry (j, i) is the coefficient against the i-th dual generator
    std::vector<std::vector<std::int64_t>> matrix;
    std::uint64_t seed = 0;
};

// Synthetic dual-pair model: four finite n-torsion groups standing in for
// the Mordell-Weil quotients and the n-torsion of the two Sha groups, plus
// the delta choice. The two sha orders must agree.
struct AVModel {
    std::int64_t n = 2;
    abgroup::InvariantFactors mw_a, mw_b, sha_a, sha_b;
    DeltaChoice delta;

    // throws std::invalid_argument naming the violated condition
    void validate() const;
};

// Element of a Selmer-model product set mw x sha.
struct SelElement {
    abgroup::AbElement mw, sha;
};

// Character of sel_a = mw_a x sha_a with values in Z/n, stored as its two
// restrictions. These make up the group modeling the second cohomology of
// the dual side.
struct SelChar {
    abgroup::CyclicHom on_mw, on_sha;

    bool is_zero() const;
    std::int64_t eval(const SelElement& a) const;

    friend auto operator<=>(const SelChar&, const SelChar&) = default;
};

// Whether a group with factors `sub` injects into one with factors
// `ambient`: per prime, the sorted cyclic orders must dominate.
bool embeds_into(const abgroup::InvariantFactors& sub,
                 const abgroup::InvariantFactors& ambient);

class AVInstance {
public:
    // Validates the model, resolves the delta choice to concrete generator
    // images, and checks injectivity (random draws retry up to a bound).
    static AVInstance build(const AVModel& m);

    const AVModel& model() const { return model_; }
    BigInt sel_a_order() const;
    BigInt sel_b_order() const;
    // images of the sha_b generators under delta, as characters of sel_a
    const std::vector<SelChar>& delta_generator_images() const { return delta_images_; }

    // kills the mw part, applies delta to the sha part
    SelChar bockstein(const SelElement& b) const;
    // k of the phase k/n for the pair (a, b)
    std::int64_t bf_phase(const SelElement& a, const SelElement& b) const;

private:
    AVModel model_;
    std::vector<SelChar> delta_images_;
};

struct Options {
    int jobs = 1;
    BigInt pair_budget = 100000000;
    bool debug_zero_pairing = false;  // self-test negative control
};

struct Report {
    AVModel model;
    BigInt closed_value;            // |mw_a| * |mw_b| * |sha_a|
    BigInt closed_value_symmetric;  // |mw_b| * |mw_a| * |sha_b|
    BigInt pair_count;
    std::optional<cyclo::PhaseVector> phases;
    std::optional<BigInt> brute_value;
    bool match = true;
};

Report path_integral_av(const AVInstance& inst, const Options& opt = {});

// Reproducible model generator: n-torsion groups with each side's product
// order bounded by max_side_order, equal sha orders, and a delta choice
// that admits an injection (falling back to sha_b = sha_a with the
// canonical delta when the drawn shapes do not embed).
AVModel random_model(std::uint64_t seed, std::int64_t n,
                     std::int64_t max_side_order = 1000);

} // namespace arithbf::bf_av
