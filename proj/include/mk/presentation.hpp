#pragma once

#include <string>
#include <vector>

#include "mk/field.hpp"
#include "mk/tensorpoly.hpp"
#include "mk/words.hpp"

namespace mk {

/* A finitely presented nonnegatively graded connected algebra T(V)/(relations),
 * as read from input.  Relations are kept with exact rational coefficients;
 * reduction into a prime field happens when an engine run starts. */
struct Presentation {
    FieldSpec field;
    GeneratorSet gens;
    std::vector<TensorPoly> relations;   // homogeneous, degree >= 2, nonzero
    std::vector<std::uint32_t> rel_degrees;

    std::string relation_str(std::size_t i) const { return poly_str(relations[i], gens); }
};

/* Parse the line-oriented presentation format:
 *   field Q            (or: field F <p>)
 *   gens x:1, y:1
 *   rel x*y - y*x
 * with # comments.  Throws InputError on malformed input, inhomogeneous or
 * degree-<2 relations, duplicate generators, nonpositive degrees. */
Presentation parse_presentation(const std::string& text);

Presentation parse_presentation_file(const std::string& path);

/* Coproduct in graded algebras: disjoint union of generators and relations.
 * Colliding generator names from the second factor get numeric suffixes. */
Presentation free_product(const Presentation& a, const Presentation& b);

/* Same generators, every relation word-reversed. */
Presentation opposite(const Presentation& p);

} // namespace mk
