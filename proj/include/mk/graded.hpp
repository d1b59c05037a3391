#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mk/linalg.hpp"
#include "mk/words.hpp"

namespace mk {

/* A graded subspace of T(V), stored degreewise in canonical form up to an
 * explicit truncation bound.  Components above the bound are undefined, not
 * zero; at() enforces that so truncation bugs fail loudly. */
template <class K>
class GradedSubspace {
public:
    GradedSubspace() = default;
    GradedSubspace(std::uint32_t trunc, std::vector<Subspace<K>> comp)
        : trunc_(trunc), comp_(std::move(comp)) {
        if (comp_.size() != trunc_ + 1)
            throw InternalError("graded subspace: component count mismatch");
    }

    std::uint32_t truncation() const { return trunc_; }

    const Subspace<K>& at(std::uint32_t n) const {
        if (n > trunc_)
            throw InternalError("graded subspace used above its truncation bound");
        return comp_[n];
    }

    std::uint32_t dim(std::uint32_t n) const { return at(n).dim(); }

    std::vector<std::uint32_t> dims() const {
        std::vector<std::uint32_t> d(trunc_ + 1);
        for (std::uint32_t n = 0; n <= trunc_; ++n) d[n] = comp_[n].dim();
        return d;
    }

    /* Smallest degree with a nonzero component; trunc+1 when empty. */
    std::uint32_t mindeg() const {
        for (std::uint32_t n = 0; n <= trunc_; ++n)
            if (comp_[n].dim() > 0) return n;
        return trunc_ + 1;
    }

    std::uint32_t total_dim() const {
        std::uint32_t t = 0;
        for (const auto& c : comp_) t += c.dim();
        return t;
    }

    bool operator==(const GradedSubspace& other) const {
        return trunc_ == other.trunc_ && comp_ == other.comp_;
    }

private:
    std::uint32_t trunc_ = 0;
    std::vector<Subspace<K>> comp_;
};

template <class K>
GradedSubspace<K> gs_zero(const WordTable& wt, std::uint32_t trunc) {
    std::vector<Subspace<K>> comp;
    for (std::uint32_t n = 0; n <= trunc; ++n) comp.push_back(Subspace<K>::zero(wt.dim(n)));
    return GradedSubspace<K>(trunc, std::move(comp));
}

/* T(V) itself, truncated. */
template <class K>
GradedSubspace<K> gs_full(const WordTable& wt, std::uint32_t trunc) {
    std::vector<Subspace<K>> comp;
    for (std::uint32_t n = 0; n <= trunc; ++n) comp.push_back(Subspace<K>::full(wt.dim(n)));
    return GradedSubspace<K>(trunc, std::move(comp));
}

/* T(V)_{>0}. */
template <class K>
GradedSubspace<K> gs_full_positive(const WordTable& wt, std::uint32_t trunc) {
    std::vector<Subspace<K>> comp;
    comp.push_back(Subspace<K>::zero(wt.dim(0)));
    for (std::uint32_t n = 1; n <= trunc; ++n) comp.push_back(Subspace<K>::full(wt.dim(n)));
    return GradedSubspace<K>(trunc, std::move(comp));
}

/* Words of tensor length exactly m; m=0 gives the scalars, m=1 gives V. */
template <class K>
GradedSubspace<K> gs_power(const WordTable& wt, std::uint32_t m, std::uint32_t trunc) {
    std::vector<Subspace<K>> comp;
    for (std::uint32_t n = 0; n <= trunc; ++n) {
        std::vector<SparseVec<K>> rows;
        std::vector<std::uint32_t> piv;
        const auto& ws = wt.words(n);
        for (std::uint32_t j = 0; j < ws.size(); ++j) {
            if (ws[j].size() != m) continue;
            rows.push_back(sv_unit<K>(j));
            piv.push_back(j);
        }
        comp.push_back(Subspace<K>::from_rref(wt.dim(n), std::move(rows), std::move(piv)));
    }
    return GradedSubspace<K>(trunc, std::move(comp));
}

template <class K>
GradedSubspace<K> gs_generators(const WordTable& wt, std::uint32_t trunc) {
    return gs_power<K>(wt, 1, trunc);
}

/* Span of homogeneous vectors given as (degree, coordinates) pairs. */
template <class K>
GradedSubspace<K> gs_from_vectors(const WordTable& wt, std::uint32_t trunc,
                                  const std::vector<std::pair<std::uint32_t, SparseVec<K>>>& gens) {
    std::vector<Echelon<K>> acc;
    for (std::uint32_t n = 0; n <= trunc; ++n) acc.emplace_back(wt.dim(n));
    for (const auto& [n, v] : gens) {
        if (n > trunc) throw InternalError("gs_from_vectors: degree above truncation");
        acc[n].add_row(v);
    }
    std::vector<Subspace<K>> comp;
    for (std::uint32_t n = 0; n <= trunc; ++n) comp.push_back(acc[n].to_subspace());
    return GradedSubspace<K>(trunc, std::move(comp));
}

template <class K>
GradedSubspace<K> gs_sum(const GradedSubspace<K>& a, const GradedSubspace<K>& b) {
    std::uint32_t trunc = std::min(a.truncation(), b.truncation());
    std::vector<Subspace<K>> comp;
    for (std::uint32_t n = 0; n <= trunc; ++n) comp.push_back(sum(a.at(n), b.at(n)));
    return GradedSubspace<K>(trunc, std::move(comp));
}

template <class K>
GradedSubspace<K> gs_intersect(const GradedSubspace<K>& a, const GradedSubspace<K>& b) {
    std::uint32_t trunc = std::min(a.truncation(), b.truncation());
    std::vector<Subspace<K>> comp;
    for (std::uint32_t n = 0; n <= trunc; ++n) comp.push_back(intersect(a.at(n), b.at(n)));
    return GradedSubspace<K>(trunc, std::move(comp));
}

/* Concatenation product of coordinate vectors: T(V)_a ⊗ T(V)_b → T(V)_{a+b}. */
template <class K>
SparseVec<K> concat_vectors(const WordTable& wt, std::uint32_t deg_a, const SparseVec<K>& va,
                            std::uint32_t deg_b, const SparseVec<K>& vb) {
    std::map<std::uint32_t, K> acc;
    for (const auto& [i, c] : va) {
        for (const auto& [j, d] : vb) {
            K t = c * d;
            std::uint32_t idx = wt.concat_index(deg_a, i, deg_b, j);
            auto [it, fresh] = acc.emplace(idx, t);
            if (!fresh) {
                K s = it->second + t;
                it->second = s;
            }
        }
    }
    SparseVec<K> out;
    for (const auto& [j, c] : acc)
        if (!is_zero(c)) out.emplace_back(j, c);
    return out;
}

/* Internal product U·W inside T(V): degreewise span of concatenations of
 * basis elements. */
template <class K>
GradedSubspace<K> gs_product(const WordTable& wt, const GradedSubspace<K>& u,
                             const GradedSubspace<K>& w) {
    std::uint32_t trunc = std::min(u.truncation(), w.truncation());
    std::vector<Subspace<K>> comp;
    for (std::uint32_t n = 0; n <= trunc; ++n) {
        Echelon<K> acc(wt.dim(n));
        for (std::uint32_t a = 0; a <= n; ++a) {
            std::uint32_t b = n - a;
            const Subspace<K>& ua = u.at(a);
            const Subspace<K>& wb = w.at(b);
            if (ua.dim() == 0 || wb.dim() == 0) continue;
            for (const auto& ru : ua.rows())
                for (const auto& rw : wb.rows())
                    acc.add_row(concat_vectors(wt, a, ru, b, rw));
        }
        comp.push_back(acc.to_subspace());
    }
    return GradedSubspace<K>(trunc, std::move(comp));
}

enum class Side { left, right };

/* Tensor-intersection faithfulness up to degree D: on the left side this
 * checks U ∩ (U·T(V)_{>0}) = 0 degreewise, on the right U ∩ (T(V)_{>0}·U) = 0.
 * A false answer is definitive; a true answer is certified only up to D. */
template <class K>
bool is_tif(const WordTable& wt, const GradedSubspace<K>& u, Side side, std::uint32_t D) {
    if (D > u.truncation())
        throw InternalError("is_tif: bound above the truncation of u");
    GradedSubspace<K> tpos = gs_full_positive<K>(wt, D);
    GradedSubspace<K> prod = (side == Side::left) ? gs_product(wt, u, tpos)
                                                  : gs_product(wt, tpos, u);
    for (std::uint32_t n = 0; n <= D; ++n)
        if (intersect(u.at(n), prod.at(n)).dim() != 0) return false;
    return true;
}

/* One summand of an expansion over an abstract tensor product of graded
 * subspaces: factor degrees, basis row index within each factor, coefficient. */
template <class K>
struct TensorCoord {
    std::vector<std::uint32_t> degs;
    std::vector<std::uint32_t> rows;
    K coeff;
};

template <class K>
using TensorExpansion = std::vector<TensorCoord<K>>;

namespace detail {

/* All degree compositions (d_1,...,d_m) of n with dim factor_l(d_l) > 0,
 * in lexicographic order. */
template <class K>
void compositions_rec(const std::vector<const GradedSubspace<K>*>& factors, std::size_t l,
                      std::uint32_t rest, std::vector<std::uint32_t>& cur,
                      std::vector<std::vector<std::uint32_t>>& out) {
    if (l + 1 == factors.size()) {
        if (rest <= factors[l]->truncation() && factors[l]->dim(rest) > 0) {
            cur.push_back(rest);
            out.push_back(cur);
            cur.pop_back();
        }
        return;
    }
    std::uint32_t hi = std::min(rest, factors[l]->truncation());
    for (std::uint32_t d = 0; d <= hi; ++d) {
        if (factors[l]->dim(d) == 0) continue;
        cur.push_back(d);
        compositions_rec(factors, l + 1, rest - d, cur, out);
        cur.pop_back();
    }
}

} // namespace detail

template <class K>
std::vector<std::vector<std::uint32_t>> degree_compositions(
    const std::vector<const GradedSubspace<K>*>& factors, std::uint32_t n) {
    std::vector<std::vector<std::uint32_t>> out;
    if (factors.empty()) throw InternalError("degree_compositions: no factors");
    std::vector<std::uint32_t> cur;
    detail::compositions_rec(factors, 0, n, cur, out);
    return out;
}

/* Concatenation of one basis-row tuple. */
template <class K>
SparseVec<K> concat_tuple(const WordTable& wt,
                          const std::vector<const GradedSubspace<K>*>& factors,
                          const std::vector<std::uint32_t>& degs,
                          const std::vector<std::uint32_t>& rows) {
    SparseVec<K> acc = factors[0]->at(degs[0]).rows()[rows[0]];
    std::uint32_t deg = degs[0];
    for (std::size_t l = 1; l < factors.size(); ++l) {
        acc = concat_vectors(wt, deg, acc, degs[l], factors[l]->at(degs[l]).rows()[rows[l]]);
        deg += degs[l];
    }
    return acc;
}

/* Solver for expansions over an abstract tensor product of graded subspaces.
 * Rows are concatenations of factor-basis tuples across all degree
 * compositions of n; independence of those rows is exactly the faithfulness
 * the expansion's uniqueness rests on, and the solver checks it. */
template <class K>
class ProductSolver {
public:
    ProductSolver(const WordTable& wt, std::uint32_t degree,
                  std::vector<const GradedSubspace<K>*> factors)
        : wt_(wt), degree_(degree), factors_(std::move(factors)) {
        std::vector<SparseVec<K>> mat;
        for (const auto& degs : degree_compositions(factors_, degree_)) {
            std::vector<std::uint32_t> rows(factors_.size(), 0);
            bool carry = false;
            while (!carry) {
                mat.push_back(concat_tuple(wt_, factors_, degs, rows));
                labels_.push_back({degs, rows, K(1)});
                carry = true;
                for (std::size_t l = factors_.size(); l-- > 0;) {
                    if (++rows[l] < factors_[l]->dim(degs[l])) { carry = false; break; }
                    rows[l] = 0;
                }
            }
        }
        solver_.emplace(wt_.dim(degree_), mat);
    }

    bool faithful() const { return solver_->independent(); }

    /* Unique expansion of omega, or nullopt when omega is outside the product. */
    std::optional<TensorExpansion<K>> solve(const SparseVec<K>& omega) const {
        if (!faithful())
            throw InternalError("factorize: faithfulness precondition violated");
        auto x = solver_->solve(omega);
        if (!x) return std::nullopt;
        TensorExpansion<K> out;
        for (std::size_t i = 0; i < x->size(); ++i) {
            if (is_zero((*x)[i])) continue;
            TensorCoord<K> tc = labels_[i];
            tc.coeff = (*x)[i];
            out.push_back(std::move(tc));
        }
        return out;
    }

private:
    const WordTable& wt_;
    std::uint32_t degree_;
    std::vector<const GradedSubspace<K>*> factors_;
    std::vector<TensorCoord<K>> labels_;
    std::optional<SpanSolver<K>> solver_;
};

/* The unique expansion of a homogeneous omega over the factors; throws when
 * omega is outside the product or the factors fail faithfulness. */
template <class K>
TensorExpansion<K> factorize(const WordTable& wt, const SparseVec<K>& omega, std::uint32_t degree,
                             const std::vector<const GradedSubspace<K>*>& factors) {
    ProductSolver<K> solver(wt, degree, factors);
    auto r = solver.solve(omega);
    if (!r) throw InternalError("factorize: element is not a member of the product");
    return *r;
}

/* Inverse of factorize: evaluate an abstract expansion back inside T(V). */
template <class K>
SparseVec<K> expansion_concatenate(const WordTable& wt, const TensorExpansion<K>& exp,
                                   const std::vector<const GradedSubspace<K>*>& factors) {
    SparseVec<K> acc;
    for (const auto& tc : exp) {
        SparseVec<K> v = concat_tuple(wt, factors, tc.degs, tc.rows);
        acc = sv_add_scaled(acc, tc.coeff, v);
    }
    return acc;
}

} // namespace mk
