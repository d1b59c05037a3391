#pragma once

#include <map>
#include <string>

#include "mk/field.hpp"
#include "mk/linalg.hpp"
#include "mk/words.hpp"

namespace mk {

/* An element of T(V) with exact rational coefficients, as parsed from input.
 * Engine-internal arithmetic uses coordinate vectors instead; this form only
 * lives at the I/O boundary. */
struct TensorPoly {
    std::map<Word, Rat> terms; // zero coefficients absent

    bool is_zero() const { return terms.empty(); }
};

/* Parse `3*x*y - y*x + 1/2*z^2` style input.  Terms are separated by + and -,
 * factors inside a term by *, `name^k` repeats a generator, and coefficients
 * are integers or fractions a/b. */
TensorPoly parse_tensor_poly(const std::string& text, const GeneratorSet& gens);

/* All words reversed, coefficients unchanged. */
TensorPoly reverse(const TensorPoly& p);

/* The common Adams degree of all terms; InputError when terms mix degrees.
 * The zero polynomial has no degree. */
std::optional<std::uint32_t> homogeneous_degree(const TensorPoly& p, const GeneratorSet& gens);

std::string poly_str(const TensorPoly& p, const GeneratorSet& gens);

/* Coordinate vector of a homogeneous polynomial in the word basis of its
 * degree, with coefficients reduced into K. */
template <class K>
SparseVec<K> poly_vector(const TensorPoly& p, const WordTable& wt, std::uint32_t degree) {
    std::map<std::uint32_t, K> acc;
    for (const auto& [w, c] : p.terms) {
        if (wt.degree_of(w) != degree)
            throw InternalError("poly_vector: term degree mismatch");
        K kc = scalar_from_fraction<K>(c);
        auto [it, fresh] = acc.emplace(wt.index_of(w), kc);
        if (!fresh) {
            K t = it->second + kc;
            it->second = t;
        }
    }
    SparseVec<K> v;
    for (const auto& [j, c] : acc)
        if (!is_zero(c)) v.emplace_back(j, c);
    return v;
}

/* Inverse of poly_vector, for reports and debugging output. */
template <class K>
TensorPoly vector_poly(const SparseVec<K>& v, const WordTable& wt, std::uint32_t degree);

template <>
inline TensorPoly vector_poly<Rat>(const SparseVec<Rat>& v, const WordTable& wt,
                                   std::uint32_t degree) {
    TensorPoly p;
    for (const auto& [j, c] : v) p.terms.emplace(wt.words(degree)[j], c);
    return p;
}

template <>
inline TensorPoly vector_poly<Fp>(const SparseVec<Fp>& v, const WordTable& wt,
                                  std::uint32_t degree) {
    TensorPoly p;
    for (const auto& [j, c] : v)
        p.terms.emplace(wt.words(degree)[j], Rat(static_cast<long>(c.value())));
    return p;
}

} // namespace mk
