#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mk/algebra.hpp"
#include "mk/graded.hpp"

/* The tower of relation-derived subspaces J_i of the tensor algebra, the
 * one-step variant for presentations generated in degree 1, the special
 * (tensor-length) direct-sum decompositions around them, and the inclusion
 * maps of a J space into tensor products of lower ones.  These are the raw
 * combinatorial ingredients of the generalized Koszul complexes and of the
 * Yoneda A-infinity structure. */

namespace mk {

/* Adams degree where the i-th space of a tower with all relations in a single
 * degree s is concentrated: s*j for i = 2j, s*j + 1 for i = 2j + 1. */
inline std::uint32_t concentration_degree(std::uint32_t s, std::uint32_t i) {
    return s * (i / 2) + (i % 2);
}

template <class K>
class JFamily {
public:
    JFamily(std::uint32_t hmax, std::uint32_t trunc, std::vector<GradedSubspace<K>> spaces)
        : hmax_(hmax), trunc_(trunc), spaces_(std::move(spaces)) {
        if (spaces_.size() != hmax_ + 1)
            throw InternalError("JFamily: space count mismatch");
    }

    std::uint32_t hmax() const { return hmax_; }
    std::uint32_t trunc() const { return trunc_; }

    const GradedSubspace<K>& at(std::uint32_t i) const {
        if (i > hmax_)
            throw InternalError("JFamily: index above the computed bound");
        return spaces_[i];
    }

    /* Nonzero dimensions only, keyed i -> Adams degree -> dim. */
    std::map<std::uint32_t, std::map<std::uint32_t, std::uint32_t>> dim_table() const {
        std::map<std::uint32_t, std::map<std::uint32_t, std::uint32_t>> out;
        for (std::uint32_t i = 0; i <= hmax_; ++i) {
            std::map<std::uint32_t, std::uint32_t> row;
            for (std::uint32_t n = 0; n <= trunc_; ++n)
                if (spaces_[i].dim(n) > 0) row[n] = spaces_[i].dim(n);
            out[i] = std::move(row);
        }
        return out;
    }

private:
    std::uint32_t hmax_ = 0;
    std::uint32_t trunc_ = 0;
    std::vector<GradedSubspace<K>> spaces_;
};

namespace detail {

/* Shrink or zero-extend a graded subspace to a new truncation bound.  The
 * extension direction is sound when the space is known to vanish above its old
 * bound, or when the higher components are deliberately pruned because they
 * cannot reach the degrees a capped product is computed at. */
template <class K>
GradedSubspace<K> gs_retruncate(const WordTable& wt, const GradedSubspace<K>& g,
                                std::uint32_t t) {
    std::vector<Subspace<K>> comp;
    for (std::uint32_t n = 0; n <= t; ++n) {
        if (n <= g.truncation())
            comp.push_back(g.at(n));
        else
            comp.push_back(Subspace<K>::zero(wt.dim(n)));
    }
    return GradedSubspace<K>(t, std::move(comp));
}

/* A factor string for the constraint products: runs of tensor powers of V
 * interleaved with J spaces, in canonical form (no zero-power V runs, no J_0,
 * adjacent V runs merged). */
using FactorList = std::vector<std::pair<char, std::uint32_t>>;

inline void push_factor(FactorList& fl, char kind, std::uint32_t val) {
    if (val == 0 && kind == 'V') return;
    if (kind == 'J' && val == 0) return;
    if (kind == 'V' && !fl.empty() && fl.back().first == 'V') {
        fl.back().second += val;
        return;
    }
    fl.emplace_back(kind, val);
}

/* All tuples of `parts` nonnegative integers summing to `total`. */
inline std::vector<std::vector<std::uint32_t>> zero_compositions(std::uint32_t total,
                                                                 std::uint32_t parts) {
    std::vector<std::vector<std::uint32_t>> out;
    if (parts == 0) {
        if (total == 0) out.push_back({});
        return out;
    }
    std::vector<std::uint32_t> cur(parts, 0);
    std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t slot,
                                                                std::uint32_t rest) {
        if (slot + 1 == parts) {
            cur[slot] = rest;
            out.push_back(cur);
            return;
        }
        for (std::uint32_t v = 0; v <= rest; ++v) {
            cur[slot] = v;
            rec(slot + 1, rest - v);
        }
    };
    rec(0, total);
    return out;
}

/* Product of a canonical factor list, truncated to `cap`.  V runs come from
 * the word table directly; J factors from the tower built so far. */
template <class K>
GradedSubspace<K> eval_factors(const WordTable& wt, const std::vector<GradedSubspace<K>>& jtower,
                               const FactorList& fl, std::uint32_t cap) {
    if (fl.empty()) return gs_power<K>(wt, 0, cap);
    auto one = [&](std::size_t l) {
        const auto& [kind, val] = fl[l];
        if (kind == 'V') return gs_power<K>(wt, val, cap);
        return gs_retruncate(wt, jtower[val], cap);
    };
    std::vector<std::uint32_t> min_tail(fl.size() + 1, 0);
    for (std::size_t l = fl.size(); l-- > 0;) {
        std::uint32_t md = (fl[l].first == 'V') ? fl[l].second  /* at least one letter each */
                                                : jtower[fl[l].second].mindeg();
        min_tail[l] = min_tail[l + 1] + md;
    }
    GradedSubspace<K> acc = one(0);
    for (std::size_t l = 1; l < fl.size(); ++l) {
        std::uint32_t step_cap = (min_tail[l + 1] > cap) ? 0 : cap - min_tail[l + 1];
        acc = gs_product(wt, gs_retruncate(wt, acc, step_cap), one(l));
        if (acc.total_dim() == 0) return gs_retruncate(wt, acc, cap);
    }
    return gs_retruncate(wt, acc, cap);
}

} // namespace detail

/* Iterated internal product g^(count) inside T(V); count = 0 gives the scalars. */
template <class K>
GradedSubspace<K> gs_repeat(const WordTable& wt, const GradedSubspace<K>& g,
                            std::uint32_t count) {
    GradedSubspace<K> acc = gs_power<K>(wt, 0, g.truncation());
    for (std::uint32_t c = 0; c < count; ++c) acc = gs_product(wt, acc, g);
    return acc;
}

/* The J tower: J_0 = k, J_1 = V, J_2 = R, then alternately
 *   J_{2i+1} = (V.J_{2i}) n (J_{2i}.V)
 *   J_{2(i+1)} = [ sum_{N >= 2} of the intersection, over all ways to place i
 *                  inner J slots (indices summing to 2i, even) and N letters of
 *                  V padding around them, of the corresponding products ]
 *                n R^(i+1)
 * computed degreewise up to the truncation D.  With debug_crosscheck the even
 * step is recomputed with the padding sum started at N = 1 and the two results
 * are asserted equal. */
template <class K>
JFamily<K> compute_J(const WordTable& wt, std::uint32_t H, std::uint32_t D,
                     const GradedSubspace<K>& R, bool debug_crosscheck = false) {
    if (R.truncation() < D)
        throw InternalError("compute_J: relation space truncated below D");
    GradedSubspace<K> V = gs_generators<K>(wt, D);
    std::vector<GradedSubspace<K>> J;
    J.push_back(gs_power<K>(wt, 0, D));
    if (H >= 1) J.push_back(V);
    if (H >= 2) J.push_back(detail::gs_retruncate(wt, R, D));

    std::vector<GradedSubspace<K>> rpow = {gs_power<K>(wt, 0, D), J.size() > 2 ? J[2] : V};
    auto rpow_at = [&](std::uint32_t m) -> const GradedSubspace<K>& {
        while (rpow.size() <= m) rpow.push_back(gs_product(wt, rpow.back(), J[2]));
        return rpow[m];
    };

    auto even_step = [&](std::uint32_t idx, std::uint32_t n_start) {
        std::uint32_t slots = idx / 2 - 1;
        const GradedSubspace<K>& rp = rpow_at(idx / 2);
        std::uint32_t maxt = 0;
        bool any_target = false;
        for (std::uint32_t n = 0; n <= D; ++n)
            if (rp.dim(n) > 0) { maxt = n; any_target = true; }
        GradedSubspace<K> total = gs_zero<K>(wt, D);
        bool inner_zero = false;
        for (std::uint32_t n = 1; n <= slots; ++n)
            if (J[2 * n].mindeg() > D) inner_zero = true;
        if (any_target && !inner_zero) {
            auto nbars = detail::zero_compositions(slots, slots);
            std::uint32_t min_inner = D + 1;
            for (const auto& nbar : nbars) {
                std::uint32_t s = 0;
                for (auto n : nbar)
                    if (n > 0) s += J[2 * n].mindeg();
                min_inner = std::min(min_inner, s);
            }
            std::uint32_t mg = wt.gens().degrees.empty()
                                   ? 1
                                   : *std::min_element(wt.gens().degrees.begin(),
                                                       wt.gens().degrees.end());
            for (std::uint32_t N = n_start; N * mg + min_inner <= maxt; ++N) {
                std::set<detail::FactorList> constraints;
                for (const auto& nbar : nbars) {
                    for (const auto& mbar : detail::zero_compositions(N, slots + 1)) {
                        detail::FactorList fl;
                        for (std::uint32_t l = 0; l < slots; ++l) {
                            detail::push_factor(fl, 'V', mbar[l]);
                            detail::push_factor(fl, 'J', 2 * nbar[l]);
                        }
                        detail::push_factor(fl, 'V', mbar[slots]);
                        constraints.insert(std::move(fl));
                    }
                }
                std::vector<GradedSubspace<K>> spaces;
                for (const auto& fl : constraints)
                    spaces.push_back(detail::eval_factors(wt, J, fl, maxt));
                std::sort(spaces.begin(), spaces.end(),
                          [](const GradedSubspace<K>& a, const GradedSubspace<K>& b) {
                              return a.total_dim() < b.total_dim();
                          });
                GradedSubspace<K> tn = spaces.front();
                for (std::size_t l = 1; l < spaces.size() && tn.total_dim() > 0; ++l)
                    tn = gs_intersect(tn, spaces[l]);
                total = gs_sum(total, detail::gs_retruncate(wt, tn, D));
            }
        }
        return detail::gs_retruncate(wt, gs_intersect(total, rp), D);
    };

    for (std::uint32_t idx = 3; idx <= H; ++idx) {
        if (idx % 2 == 1) {
            const GradedSubspace<K>& prev = J[idx - 1];
            J.push_back(gs_intersect(gs_product(wt, V, prev), gs_product(wt, prev, V)));
        } else {
            GradedSubspace<K> val = even_step(idx, 2);
            if (debug_crosscheck) {
                GradedSubspace<K> ext = even_step(idx, 1);
                if (!(ext == val))
                    throw InternalError("compute_J: padding-sum cross-check failed at index " +
                                        std::to_string(idx));
            }
            J.push_back(std::move(val));
        }
    }
    return JFamily<K>(H, D, std::move(J));
}

template <class K>
JFamily<K> compute_J(const TruncatedAlgebra<K>& A, std::uint32_t H,
                     bool debug_crosscheck = false) {
    return compute_J<K>(A.wt(), H, A.trunc(), A.relations(), debug_crosscheck);
}

/* One-step variant for presentations generated in degree 1: the i-th space is
 * the sum over relation degrees s of
 *   intersection over l = 0..n-s of  V^(l) . R_s . V^(n-s-l),
 * concentrated in Adams degree n = concentration_degree(s, i). */
template <class K>
JFamily<K> compute_Jtilde(const TruncatedAlgebra<K>& A, std::uint32_t H) {
    for (std::uint32_t d : A.pres().gens.degrees)
        if (d != 1)
            throw InputError("the one-step tower needs every generator in degree 1");
    const WordTable& wt = A.wt();
    std::uint32_t D = A.trunc();
    const GradedSubspace<K>& R = A.relations();
    std::vector<GradedSubspace<K>> J;
    J.push_back(gs_power<K>(wt, 0, D));
    if (H >= 1) J.push_back(gs_generators<K>(wt, D));
    for (std::uint32_t i = 2; i <= H; ++i) {
        GradedSubspace<K> out = gs_zero<K>(wt, D);
        for (std::uint32_t s = 1; s <= D; ++s) {
            if (R.dim(s) == 0) continue;
            std::uint32_t n = concentration_degree(s, i);
            if (n > D) continue;
            std::vector<Subspace<K>> rs_comp;
            for (std::uint32_t m = 0; m <= D; ++m)
                rs_comp.push_back(m == s ? R.at(s) : Subspace<K>::zero(wt.dim(m)));
            GradedSubspace<K> rs(D, std::move(rs_comp));
            std::optional<GradedSubspace<K>> acc;
            for (std::uint32_t l = 0; l + s <= n; ++l) {
                GradedSubspace<K> left = gs_product(wt, gs_power<K>(wt, l, n), rs);
                GradedSubspace<K> prod = gs_product(wt, left, gs_power<K>(wt, n - s - l, n));
                acc = acc ? gs_intersect(*acc, prod) : prod;
                if (acc->total_dim() == 0) break;
            }
            if (acc) out = gs_sum(out, detail::gs_retruncate(wt, *acc, D));
        }
        J.push_back(std::move(out));
    }
    return JFamily<K>(H, D, std::move(J));
}

/* A direct-sum decomposition of a subspace of T(V) indexed by tensor length N,
 * with the independence of the summands verified degreewise by dimension
 * count, and coordinate solvers splitting an element into its N-components. */
template <class K>
class SpecialDecomposition {
public:
    SpecialDecomposition(const WordTable& wt,
                         std::vector<std::pair<std::uint32_t, GradedSubspace<K>>> summands)
        : summands_(std::move(summands)) {
        if (summands_.empty()) throw InternalError("special decomposition: no summands");
        trunc_ = summands_.front().second.truncation();
        for (const auto& [N, g] : summands_)
            if (g.truncation() != trunc_)
                throw InternalError("special decomposition: truncation mismatch");
        for (std::uint32_t n = 0; n <= trunc_; ++n) {
            std::uint32_t want = 0;
            std::vector<SparseVec<K>> rows;
            for (const auto& [N, g] : summands_) {
                want += g.dim(n);
                for (const auto& r : g.at(n).rows()) rows.push_back(r);
            }
            Echelon<K> ech(wt.dim(n));
            for (const auto& r : rows) ech.add_row(r);
            if (ech.rank() != want)
                throw InternalError("special decomposition: summands fail independence "
                                    "at Adams degree " + std::to_string(n));
            if (!rows.empty()) solvers_.emplace(n, SpanSolver<K>(wt.dim(n), rows));
        }
    }

    std::uint32_t truncation() const { return trunc_; }

    std::vector<std::uint32_t> special_degrees() const {
        std::vector<std::uint32_t> out;
        for (const auto& [N, g] : summands_)
            if (g.total_dim() > 0) out.push_back(N);
        return out;
    }

    const GradedSubspace<K>* summand(std::uint32_t N) const {
        for (const auto& [M, g] : summands_)
            if (M == N) return &g;
        return nullptr;
    }

    /* Split v (homogeneous of Adams degree n) into its N-components.  Throws
     * when v lies outside the direct sum. */
    std::map<std::uint32_t, SparseVec<K>> decompose(std::uint32_t n, const SparseVec<K>& v) const {
        std::map<std::uint32_t, SparseVec<K>> out;
        if (v.empty()) return out;
        auto it = solvers_.find(n);
        if (it == solvers_.end())
            throw InternalError("special decomposition: element outside the direct sum");
        auto x = it->second.solve(v);
        if (!x)
            throw InternalError("special decomposition: element outside the direct sum");
        std::size_t pos = 0;
        for (const auto& [N, g] : summands_) {
            SparseVec<K> comp;
            for (const auto& row : g.at(n).rows()) {
                K c = (*x)[pos++];
                if (!is_zero(c)) comp = sv_add_scaled(comp, c, row);
            }
            if (!comp.empty()) out[N] = std::move(comp);
        }
        return out;
    }

private:
    std::vector<std::pair<std::uint32_t, GradedSubspace<K>>> summands_;
    std::uint32_t trunc_ = 0;
    std::map<std::uint32_t, SpanSolver<K>> solvers_;
};

/* The tower  +_{N >= n_min}  (intersection over l = 0..N of V^(l).core.V^(N-l)),
 * truncated to D.  With core = R^(i) this is the special tower of the i-th
 * relation power; with core = J_{2j+1} it is the tower the even differential
 * factors through. */
template <class K>
SpecialDecomposition<K> special_summands(const WordTable& wt, const GradedSubspace<K>& core,
                                         std::uint32_t D, std::uint32_t n_min = 0) {
    std::uint32_t mg = 1;
    if (!wt.gens().degrees.empty())
        mg = *std::min_element(wt.gens().degrees.begin(), wt.gens().degrees.end());
    std::vector<std::pair<std::uint32_t, GradedSubspace<K>>> summands;
    GradedSubspace<K> core_r = detail::gs_retruncate(wt, core, D);
    std::uint32_t cmin = core_r.mindeg();
    // left_prod[l] = V^(l) . core, shared by every N >= l.
    std::vector<GradedSubspace<K>> left_prod;
    for (std::uint32_t N = n_min; N * mg + cmin <= D; ++N) {
        std::optional<GradedSubspace<K>> acc;
        for (std::uint32_t l = 0; l <= N; ++l) {
            while (left_prod.size() <= l)
                left_prod.push_back(gs_product(
                    wt, gs_power<K>(wt, static_cast<std::uint32_t>(left_prod.size()), D),
                    core_r));
            GradedSubspace<K> prod =
                gs_product(wt, left_prod[l], gs_power<K>(wt, N - l, D));
            acc = acc ? gs_intersect(*acc, prod) : prod;
            if (acc->total_dim() == 0) break;
        }
        summands.emplace_back(N, detail::gs_retruncate(wt, *acc, D));
    }
    if (summands.empty()) summands.emplace_back(n_min, gs_zero<K>(wt, D));
    return SpecialDecomposition<K>(wt, std::move(summands));
}

/* The tower  +_{N >= 2}  (intersection over all paddings m in N_0^{slots+1}
 * with |m| = N of  V^(m_1) . J_{e_1} . ... . J_{e_slots} . V^(m_{slots+1})),
 * for a fixed list of even tower indices e_l.  This is the space a J space
 * includes into before being projected onto one tensor length. */
template <class K>
SpecialDecomposition<K> special_slot_decomposition(const WordTable& wt, const JFamily<K>& j,
                                                   const std::vector<std::uint32_t>& evens,
                                                   std::uint32_t D) {
    std::uint32_t slots = static_cast<std::uint32_t>(evens.size());
    std::vector<GradedSubspace<K>> jtower;
    for (std::uint32_t i = 0; i <= j.hmax(); ++i)
        jtower.push_back(detail::gs_retruncate(wt, j.at(i), D));
    std::uint32_t mg = 1;
    if (!wt.gens().degrees.empty())
        mg = *std::min_element(wt.gens().degrees.begin(), wt.gens().degrees.end());
    std::uint32_t min_inner = 0;
    bool dead = false;
    for (auto e : evens) {
        if (e > j.hmax()) throw InternalError("slot decomposition: tower index out of range");
        if (e == 0) continue;
        if (jtower[e].mindeg() > D) dead = true;
        else min_inner += jtower[e].mindeg();
    }
    std::vector<std::pair<std::uint32_t, GradedSubspace<K>>> summands;
    for (std::uint32_t N = 2; !dead && N * mg + min_inner <= D; ++N) {
        std::set<detail::FactorList> constraints;
        for (const auto& mbar : detail::zero_compositions(N, slots + 1)) {
            detail::FactorList fl;
            for (std::uint32_t l = 0; l < slots; ++l) {
                detail::push_factor(fl, 'V', mbar[l]);
                detail::push_factor(fl, 'J', evens[l]);
            }
            detail::push_factor(fl, 'V', mbar[slots]);
            constraints.insert(std::move(fl));
        }
        std::optional<GradedSubspace<K>> acc;
        for (const auto& fl : constraints) {
            GradedSubspace<K> s = detail::eval_factors(wt, jtower, fl, D);
            acc = acc ? gs_intersect(*acc, s) : s;
            if (acc->total_dim() == 0) break;
        }
        summands.emplace_back(N, detail::gs_retruncate(wt, *acc, D));
    }
    if (summands.empty()) summands.emplace_back(2, gs_zero<K>(wt, D));
    return SpecialDecomposition<K>(wt, std::move(summands));
}

/* A J-to-tensor-product inclusion map, stored as the expansion of each basis
 * row of the source over the abstract tensor product of the targets. */
template <class K>
struct IotaMap {
    std::uint32_t source = 0;
    std::vector<std::uint32_t> targets;
    std::map<std::uint32_t, std::vector<TensorExpansion<K>>> expansions;
};

/* Pair inclusion J_{i1+i2} -> J_{i1} (x) J_{i2}.  When one index is even (or
 * zero) the source sits inside the internal product and the expansion is
 * direct; when both are odd it sits inside T(V).J_{i1}.J_{i2} and the map
 * keeps the scalar component of the leading factor. */
template <class K>
IotaMap<K> iota2(const WordTable& wt, const JFamily<K>& j, std::uint32_t i1, std::uint32_t i2) {
    IotaMap<K> out;
    out.source = i1 + i2;
    out.targets = {i1, i2};
    const GradedSubspace<K>& src = j.at(i1 + i2);
    std::uint32_t D = j.trunc();
    if (i1 == 0 || i2 == 0) {
        for (std::uint32_t n = 0; n <= D; ++n) {
            std::uint32_t d = src.dim(n);
            if (d == 0) continue;
            std::vector<TensorExpansion<K>> col;
            for (std::uint32_t r = 0; r < d; ++r) {
                TensorCoord<K> tc;
                tc.degs = (i1 == 0) ? std::vector<std::uint32_t>{0, n}
                                    : std::vector<std::uint32_t>{n, 0};
                tc.rows = (i1 == 0) ? std::vector<std::uint32_t>{0, r}
                                    : std::vector<std::uint32_t>{r, 0};
                tc.coeff = K(1);
                col.push_back({tc});
            }
            out.expansions[n] = std::move(col);
        }
        return out;
    }
    bool both_odd = (i1 % 2 == 1) && (i2 % 2 == 1);
    std::optional<GradedSubspace<K>> full;
    if (both_odd) full.emplace(gs_full<K>(wt, D));
    for (std::uint32_t n = 0; n <= D; ++n) {
        std::uint32_t d = src.dim(n);
        if (d == 0) continue;
        std::vector<TensorExpansion<K>> col;
        if (!both_odd) {
            std::vector<const GradedSubspace<K>*> factors = {&j.at(i1), &j.at(i2)};
            ProductSolver<K> solver(wt, n, factors);
            for (const auto& row : src.at(n).rows()) {
                auto e = solver.solve(row);
                if (!e)
                    throw InternalError("pair inclusion: source element escapes the product");
                col.push_back(std::move(*e));
            }
        } else {
            std::vector<const GradedSubspace<K>*> factors = {&*full, &j.at(i1), &j.at(i2)};
            ProductSolver<K> solver(wt, n, factors);
            for (const auto& row : src.at(n).rows()) {
                auto e = solver.solve(row);
                if (!e)
                    throw InternalError("pair inclusion: source element escapes the product");
                TensorExpansion<K> kept;
                for (auto& tc : *e) {
                    if (tc.degs[0] != 0) continue;
                    TensorCoord<K> flat;
                    flat.degs = {tc.degs[1], tc.degs[2]};
                    flat.rows = {tc.rows[1], tc.rows[2]};
                    flat.coeff = tc.coeff;
                    kept.push_back(std::move(flat));
                }
                col.push_back(std::move(kept));
            }
        }
        out.expansions[n] = std::move(col);
    }
    return out;
}

/* Multi-factor inclusion J_{i1+...+in+2-n} -> J_{i1} (x) ... (x) J_{in} for a
 * tuple of odd indices, n >= 3: include the source into the slot tower for
 * the even indices (i_l - 1), project onto tensor length n, and expand. */
template <class K>
IotaMap<K> iota_multi(const WordTable& wt, const JFamily<K>& j,
                      const std::vector<std::uint32_t>& idx) {
    if (idx.size() < 3)
        throw InternalError("multi inclusion: tuple must have at least three entries");
    std::uint32_t total = 0;
    for (auto i : idx) {
        if (i % 2 == 0) throw InternalError("multi inclusion: indices must be odd");
        total += i;
    }
    std::uint32_t n_len = static_cast<std::uint32_t>(idx.size());
    IotaMap<K> out;
    out.source = total + 2 - n_len;
    out.targets = idx;
    const GradedSubspace<K>& src = j.at(out.source);
    if (src.total_dim() == 0) return out;

    std::vector<std::uint32_t> evens;
    for (auto i : idx) evens.push_back(i - 1);
    SpecialDecomposition<K> sd = special_slot_decomposition(wt, j, evens, j.trunc());

    std::vector<const GradedSubspace<K>*> factors;
    for (auto i : idx) factors.push_back(&j.at(i));
    for (std::uint32_t n = 0; n <= j.trunc(); ++n) {
        std::uint32_t d = src.dim(n);
        if (d == 0) continue;
        std::optional<ProductSolver<K>> solver;
        std::vector<TensorExpansion<K>> col;
        for (const auto& row : src.at(n).rows()) {
            auto comps = sd.decompose(n, row);
            auto it = comps.find(n_len);
            if (it == comps.end()) {
                col.push_back({});
                continue;
            }
            if (!solver) solver.emplace(wt, n, factors);
            auto e = solver->solve(it->second);
            if (!e)
                throw InternalError("multi inclusion: projected component escapes the product");
            col.push_back(std::move(*e));
        }
        out.expansions[n] = std::move(col);
    }
    return out;
}

} // namespace mk
