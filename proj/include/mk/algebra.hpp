#pragma once

#include <limits>

#include "mk/graded.hpp"
#include "mk/presentation.hpp"

namespace mk {

/* The quotient algebra A = T(V)/(relations) up to an Adams truncation D:
 * the ideal degreewise, the minimal space of relations R, normal-word bases
 * of every A_n, the projection π, and precomputed structure constants.
 *
 * Everything is canonical: the ideal components are canonical subspaces, the
 * normal words are the non-pivot word indices, and R is the deterministic
 * complement of the decomposables inside the ideal.  Two equivalent input
 * orders produce bit-identical results. */
template <class K>
class TruncatedAlgebra {
public:
    static TruncatedAlgebra build(const Presentation& pres, std::uint32_t D,
                                  std::uint64_t cap = default_word_cap());

    const Presentation& pres() const { return pres_; }
    const WordTable& wt() const { return wt_; }
    std::uint32_t trunc() const { return D_; }

    const GradedSubspace<K>& ideal() const { return ideal_; }

    /* Minimal space of relations: the canonical complement of
     * (T(V)_{>0}·I + I·T(V)_{>0})_n inside I_n. */
    const GradedSubspace<K>& relations() const { return rels_; }

    /* Input relations that did not enlarge the span of decomposables plus
     * earlier relations; reported, never silently repaired away. */
    const std::vector<std::string>& dropped_relations() const { return dropped_; }

    std::uint32_t adim(std::uint32_t n) const {
        return static_cast<std::uint32_t>(normal(n).size());
    }

    std::vector<std::uint32_t> hilbert() const {
        std::vector<std::uint32_t> h(D_ + 1);
        for (std::uint32_t n = 0; n <= D_; ++n) h[n] = adim(n);
        return h;
    }

    /* Word indices of the normal-word basis of A_n, ascending. */
    const std::vector<std::uint32_t>& normal(std::uint32_t n) const {
        if (n > D_) throw InternalError("algebra queried above its truncation");
        return normal_[n];
    }

    /* π : T(V)_n → A_n in coordinates. */
    SparseVec<K> pi(std::uint32_t n, const SparseVec<K>& v) const {
        SparseVec<K> res = ideal_.at(n).reduce(v);
        SparseVec<K> out;
        out.reserve(res.size());
        for (const auto& [j, c] : res) {
            std::uint32_t pos = normal_pos_[n][j];
            if (pos == kNoPos) throw InternalError("pi: residual hit an ideal pivot column");
            out.emplace_back(pos, c);
        }
        return out;
    }

    /* Normal-word representative of an A_n coordinate vector inside T(V)_n. */
    SparseVec<K> lift(std::uint32_t n, const SparseVec<K>& va) const {
        SparseVec<K> out;
        out.reserve(va.size());
        for (const auto& [pos, c] : va) out.emplace_back(normal_[n][pos], c);
        return out;
    }

    /* Product of basis elements: A_a basis i times A_b basis j in A_{a+b}
     * coordinates. */
    const SparseVec<K>& mult(std::uint32_t a, std::uint32_t i, std::uint32_t b,
                             std::uint32_t j) const {
        if (a + b > D_) throw InternalError("mult: product degree above truncation");
        return mult_[a][b][std::size_t(i) * adim(b) + j];
    }

    SparseVec<K> mult_vec(std::uint32_t a, const SparseVec<K>& va, std::uint32_t b,
                          const SparseVec<K>& vb) const {
        std::map<std::uint32_t, K> acc;
        for (const auto& [i, c] : va) {
            for (const auto& [j, d] : vb) {
                K cd = c * d;
                for (const auto& [q, e] : mult(a, i, b, j)) {
                    K t = cd * e;
                    auto [it, fresh] = acc.emplace(q, t);
                    if (!fresh) {
                        K s = it->second + t;
                        it->second = s;
                    }
                }
            }
        }
        SparseVec<K> out;
        for (const auto& [q, c] : acc)
            if (!is_zero(c)) out.emplace_back(q, c);
        return out;
    }

private:
    TruncatedAlgebra(Presentation pres, WordTable wt)
        : pres_(std::move(pres)), wt_(std::move(wt)) {}

    static constexpr std::uint32_t kNoPos = std::numeric_limits<std::uint32_t>::max();

    void check_minimal_generators() const;

    Presentation pres_;
    WordTable wt_;
    std::uint32_t D_ = 0;
    GradedSubspace<K> ideal_;
    GradedSubspace<K> rels_;
    std::vector<std::string> dropped_;
    std::vector<std::vector<std::uint32_t>> normal_;
    std::vector<std::vector<std::uint32_t>> normal_pos_;
    std::vector<std::vector<std::vector<SparseVec<K>>>> mult_;
};

template <class K>
TruncatedAlgebra<K> TruncatedAlgebra<K>::build(const Presentation& pres, std::uint32_t D,
                                               std::uint64_t cap) {
    WordTable wt(pres.gens, D, cap);
    TruncatedAlgebra alg(pres, std::move(wt));
    alg.D_ = D;

    // Coordinate vectors of the input relations, grouped by degree but kept in
    // declaration order inside each degree (the dropped-relation report
    // depends on that order; the computed spaces do not).
    std::vector<std::vector<std::pair<std::size_t, SparseVec<K>>>> rel_by_deg(D + 1);
    for (std::size_t r = 0; r < pres.relations.size(); ++r) {
        std::uint32_t d = pres.rel_degrees[r];
        if (d > D) continue;
        rel_by_deg[d].emplace_back(r, poly_vector<K>(pres.relations[r], alg.wt_, d));
    }

    // Ideal fixpoint: I_n = span(rel_n) + Σ_g (g·I_{n-|g|} + I_{n-|g|}·g).
    // The generator-shift part alone spans the decomposables
    // (T_{>0}·I + I·T_{>0})_n, whose complement inside I_n is R_n.
    std::vector<Subspace<K>> icomp, rcomp;
    for (std::uint32_t n = 0; n <= D; ++n) {
        Echelon<K> acc(alg.wt_.dim(n));
        for (std::uint16_t g = 0; g < pres.gens.size(); ++g) {
            std::uint32_t dg = pres.gens.degrees[g];
            if (dg >= n) continue;
            std::uint32_t wg = alg.wt_.index_of(Word{g});
            SparseVec<K> eg = sv_unit<K>(wg);
            for (const auto& row : icomp[n - dg].rows()) {
                acc.add_row(concat_vectors(alg.wt_, dg, eg, n - dg, row));
                acc.add_row(concat_vectors(alg.wt_, n - dg, row, dg, eg));
            }
        }
        Subspace<K> decomposables = acc.to_subspace();
        for (const auto& [r, vec] : rel_by_deg[n])
            if (!acc.add_row(vec)) alg.dropped_.push_back(pres.relation_str(r));
        Subspace<K> in = acc.to_subspace();
        rcomp.push_back(complement_in(decomposables, in));
        icomp.push_back(std::move(in));
    }
    alg.ideal_ = GradedSubspace<K>(D, std::move(icomp));
    alg.rels_ = GradedSubspace<K>(D, std::move(rcomp));

    // Normal words: the non-pivot word indices of each I_n.
    alg.normal_.resize(D + 1);
    alg.normal_pos_.resize(D + 1);
    for (std::uint32_t n = 0; n <= D; ++n) {
        const auto& piv = alg.ideal_.at(n).pivots();
        alg.normal_pos_[n].assign(alg.wt_.dim(n), kNoPos);
        for (std::uint32_t j = 0; j < alg.wt_.dim(n); ++j) {
            if (std::binary_search(piv.begin(), piv.end(), j)) continue;
            alg.normal_pos_[n][j] = static_cast<std::uint32_t>(alg.normal_[n].size());
            alg.normal_[n].push_back(j);
        }
    }

    // Structure constants for every pair of basis elements with a+b ≤ D.
    alg.mult_.resize(D + 1);
    for (std::uint32_t a = 0; a <= D; ++a) {
        alg.mult_[a].resize(D - a + 1);
        for (std::uint32_t b = 0; a + b <= D; ++b) {
            auto& table = alg.mult_[a][b];
            table.reserve(std::size_t(alg.adim(a)) * alg.adim(b));
            for (std::uint32_t i = 0; i < alg.adim(a); ++i) {
                for (std::uint32_t j = 0; j < alg.adim(b); ++j) {
                    if (a == 0) {
                        table.push_back(sv_unit<K>(j));
                    } else if (b == 0) {
                        table.push_back(sv_unit<K>(i));
                    } else {
                        std::uint32_t w =
                            alg.wt_.concat_index(a, alg.normal_[a][i], b, alg.normal_[b][j]);
                        table.push_back(alg.pi(a + b, sv_unit<K>(w)));
                    }
                }
            }
        }
    }

    alg.check_minimal_generators();
    return alg;
}

/* A generator whose class lies in A_{>0}·A_{>0} plus the span of the earlier
 * generators of its degree is redundant; the input is rejected rather than
 * repaired so V stays a minimal generating space. */
template <class K>
void TruncatedAlgebra<K>::check_minimal_generators() const {
    std::vector<std::string> redundant;
    for (std::uint32_t n = 1; n <= D_; ++n) {
        bool has_gen = false;
        for (std::size_t g = 0; g < pres_.gens.size(); ++g)
            if (pres_.gens.degrees[g] == n) has_gen = true;
        if (!has_gen) continue;
        Echelon<K> acc(adim(n));
        for (std::uint32_t a = 1; a < n; ++a) {
            std::uint32_t b = n - a;
            for (std::uint32_t i = 0; i < adim(a); ++i)
                for (std::uint32_t j = 0; j < adim(b); ++j) acc.add_row(mult(a, i, b, j));
        }
        for (std::uint16_t g = 0; g < pres_.gens.size(); ++g) {
            if (pres_.gens.degrees[g] != n) continue;
            SparseVec<K> v = pi(n, sv_unit<K>(wt_.index_of(Word{g})));
            if (!acc.add_row(v)) redundant.push_back(pres_.gens.names[g]);
        }
    }
    if (!redundant.empty()) {
        std::string msg = "redundant generator(s):";
        for (const auto& name : redundant) msg += " " + name;
        msg += " (expressible through lower products; restate the presentation without them)";
        throw InputError(msg);
    }
}

} // namespace mk
