#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mk/jspaces.hpp"
#include "mk/komplex.hpp"

namespace mk {

/* ---------------------------------------------------------------------------
 * Sign bookkeeping.
 *
 * All signs in the dual tables come from exactly two sources: the Koszul sign
 * of evaluating a tensor of functionals on a tensor of homogeneous elements,
 * and the sign of dualizing a map of nonzero homological degree.  Keeping them
 * in two named helpers makes every product sign auditable.
 * ------------------------------------------------------------------------ */

/* Evaluation sign exponent: a tensor f_1 (x) ... (x) f_n of functionals of
 * homological degrees idx[l], paired against elements of the same degrees,
 * picks up (-1)^(sum_{l<n} idx[l] * (idx[l+1] + ... + idx[n-1])). */
inline std::uint32_t c_sign_exp(const std::vector<std::uint32_t>& idx) {
    std::uint32_t acc = 0;
    std::uint32_t tail = 0;
    for (std::size_t l = idx.size(); l-- > 0;) {
        acc += idx[l] * tail;
        tail += idx[l];
    }
    return acc;
}

/* Total sign exponent of the dual of an n-factor inclusion on the block with
 * target degrees idx: the inclusion raises homological degree by n - 2, and
 * the dual of a degree-d map acting on an input of degree e costs (-1)^(d e);
 * the input degree here is the sum of the idx. */
inline std::uint32_t dual_iota_sign_exp(const std::vector<std::uint32_t>& idx) {
    if (idx.size() < 2) throw InternalError("sign exponent: need at least two factors");
    std::uint32_t sum = 0;
    for (auto i : idx) sum += i;
    std::uint32_t n = static_cast<std::uint32_t>(idx.size());
    return (n - 2) * sum + c_sign_exp(idx);
}

template <class K>
K parity_sign(std::uint32_t e) {
    return e % 2 == 0 ? K(1) : K(-1);
}

/* ---------------------------------------------------------------------------
 * Elements of the graded dual and formal tensors.
 * ------------------------------------------------------------------------ */

/* An element of the graded dual of the J family: homological degree i, Adams
 * degree n, coefficients over the basis dual to the stored basis of J_i. */
template <class K>
struct DualElt {
    std::uint32_t i = 0;
    std::uint32_t n = 0;
    SparseVec<K> coeffs;
};

template <class K>
DualElt<K> dual_unit_elt(std::uint32_t i, std::uint32_t n, std::uint32_t row) {
    return DualElt<K>{i, n, sv_unit<K>(row)};
}

template <class K>
bool dual_is_zero(const DualElt<K>& f) {
    return f.coeffs.empty();
}

template <class K>
bool dual_equal(const DualElt<K>& a, const DualElt<K>& b) {
    if (a.coeffs.empty() && b.coeffs.empty()) return true;
    if (a.i != b.i || a.n != b.n) return false;
    return a.coeffs == b.coeffs;
}

/* A formal sum of elementary tensors of J basis vectors.  Each letter is
 * (homological index, Adams degree, basis row). */
using TensorLetter = std::array<std::uint32_t, 3>;
using TensorWordKey = std::vector<TensorLetter>;
template <class K>
using TensorSum = std::map<TensorWordKey, K>;

template <class K>
void tensor_acc(TensorSum<K>& acc, const TensorWordKey& w, const K& c) {
    auto [it, fresh] = acc.emplace(w, c);
    if (!fresh) {
        K s = it->second + c;
        if (is_zero(s)) acc.erase(it);
        else it->second = s;
    }
}

inline std::string tensor_word_str(const TensorWordKey& w) {
    std::ostringstream os;
    for (std::size_t l = 0; l < w.size(); ++l) {
        if (l) os << " (x) ";
        os << "J" << w[l][0] << "[" << w[l][1] << "]#" << w[l][2];
    }
    return os.str();
}

/* ---------------------------------------------------------------------------
 * The binary product table.
 * ------------------------------------------------------------------------ */

/* Pair products on the dual family: for every (i1, i2) with i1 + i2 inside
 * the table, the inclusion J_{i1+i2} -> J_{i1} (x) J_{i2}, whose signed
 * transpose is the product on the dual.  The hypothesis flag records whether
 * the input algebra passed the Tor comparison; without it the tables are
 * formal and carry no homological meaning. */
template <class K>
struct ProductTable {
    std::uint32_t imax = 0;
    std::uint32_t trunc = 0;
    bool hypothesis = false;
    std::vector<std::vector<std::uint32_t>> jdims; /* [i][n] */
    std::map<std::pair<std::uint32_t, std::uint32_t>, IotaMap<K>> pairs;
};

template <class K>
ProductTable<K> yoneda_products(const WordTable& wt, const JFamily<K>& j, std::uint32_t imax,
                                bool hypothesis) {
    ProductTable<K> t;
    t.imax = std::min<std::uint32_t>(imax, j.hmax());
    t.trunc = j.trunc();
    t.hypothesis = hypothesis;
    t.jdims.assign(j.hmax() + 1, std::vector<std::uint32_t>(j.trunc() + 1, 0));
    for (std::uint32_t i = 0; i <= j.hmax(); ++i)
        for (std::uint32_t n = 0; n <= j.trunc(); ++n) t.jdims[i][n] = j.at(i).dim(n);
    for (std::uint32_t i1 = 0; i1 <= t.imax; ++i1)
        for (std::uint32_t i2 = 0; i1 + i2 <= t.imax; ++i2)
            t.pairs.emplace(std::make_pair(i1, i2), iota2(wt, j, i1, i2));
    return t;
}

namespace detail {

/* Shared core of the dual products: contract the expansion of each source
 * basis row against the given functionals and scale by the block sign. */
template <class K>
DualElt<K> iota_dual_apply(const IotaMap<K>& io, std::uint32_t trunc,
                           const std::vector<const DualElt<K>*>& fs) {
    DualElt<K> out;
    std::uint32_t adams = 0;
    for (const auto* f : fs) adams += f->n;
    std::uint32_t src = io.source;
    out.i = src;
    out.n = adams;
    if (adams > trunc) throw InternalError("dual product: Adams degree beyond the truncation");
    auto it = io.expansions.find(adams);
    if (it == io.expansions.end()) return out;
    K sign = parity_sign<K>(dual_iota_sign_exp(io.targets));
    for (std::uint32_t r = 0; r < it->second.size(); ++r) {
        K acc = K(0);
        for (const auto& tc : it->second[r]) {
            bool match = true;
            for (std::size_t l = 0; l < fs.size(); ++l)
                if (tc.degs[l] != fs[l]->n) {
                    match = false;
                    break;
                }
            if (!match) continue;
            K term = tc.coeff;
            for (std::size_t l = 0; l < fs.size(); ++l) {
                K c = sv_get(fs[l]->coeffs, tc.rows[l]);
                if (is_zero(c)) {
                    term = K(0);
                    break;
                }
                K t2 = term * c;
                term = t2;
            }
            if (is_zero(term)) continue;
            K a2 = acc + term;
            acc = a2;
        }
        if (is_zero(acc)) continue;
        K v = sign * acc;
        out.coeffs.emplace_back(r, v);
    }
    return out;
}

} // namespace detail

/* Product of two dual elements through the pair table. */
template <class K>
DualElt<K> m2_apply(const ProductTable<K>& t, const DualElt<K>& f, const DualElt<K>& g) {
    if (f.i + g.i > t.imax) throw InternalError("dual product: level beyond the computed table");
    const IotaMap<K>& io = t.pairs.at(std::make_pair(f.i, g.i));
    return detail::iota_dual_apply(io, t.trunc, {&f, &g});
}

/* ---------------------------------------------------------------------------
 * The full higher structure.
 * ------------------------------------------------------------------------ */

/* Higher coproducts on the J family and, by dualization, higher products on
 * the dual.  delta[m] holds every m-factor inclusion that contributes: for
 * m = 2 all pairs (l, i - l), for m >= 3 all tuples of odd indices whose
 * source lands inside the family.  Coproducts for m >= 3 vanish on odd
 * levels and only hit all-odd tensor blocks, which the tuple enumeration
 * encodes directly. */
template <class K>
struct AInfStructure {
    std::uint32_t hmax = 0;
    std::uint32_t trunc = 0;
    std::uint32_t nmax = 0;
    bool hypothesis = false;
    std::vector<std::vector<std::uint32_t>> jdims; /* [i][n] */
    std::map<std::uint32_t, std::vector<IotaMap<K>>> delta;
    std::map<std::uint32_t, std::map<std::vector<std::uint32_t>, std::size_t>> lookup;
};

namespace detail {

inline void odd_tuples_rec(std::uint32_t len, std::uint32_t total, std::vector<std::uint32_t>& cur,
                           std::vector<std::vector<std::uint32_t>>& out) {
    if (len == 1) {
        if (total % 2 == 1) {
            cur.push_back(total);
            out.push_back(cur);
            cur.pop_back();
        }
        return;
    }
    for (std::uint32_t v = 1; v + (len - 1) <= total; v += 2) {
        cur.push_back(v);
        odd_tuples_rec(len - 1, total - v, cur, out);
        cur.pop_back();
    }
}

/* All tuples of `len` odd positive integers summing to `total`. */
inline std::vector<std::vector<std::uint32_t>> odd_tuples(std::uint32_t len, std::uint32_t total) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
    if (len >= 1) odd_tuples_rec(len, total, cur, out);
    return out;
}

} // namespace detail

template <class K>
AInfStructure<K> ainf_coproducts(const WordTable& wt, const JFamily<K>& j, std::uint32_t nmax,
                                 bool hypothesis) {
    if (nmax < 2) throw InternalError("higher structure: need coproducts up to arity two");
    AInfStructure<K> s;
    s.hmax = j.hmax();
    s.trunc = j.trunc();
    s.nmax = nmax;
    s.hypothesis = hypothesis;
    s.jdims.assign(s.hmax + 1, std::vector<std::uint32_t>(s.trunc + 1, 0));
    for (std::uint32_t i = 0; i <= s.hmax; ++i)
        for (std::uint32_t n = 0; n <= s.trunc; ++n) s.jdims[i][n] = j.at(i).dim(n);

    auto put = [&](std::uint32_t m, IotaMap<K> io) {
        s.lookup[m].emplace(io.targets, s.delta[m].size());
        s.delta[m].push_back(std::move(io));
    };

    for (std::uint32_t i = 0; i <= s.hmax; ++i)
        for (std::uint32_t l = 0; l <= i; ++l) put(2, iota2(wt, j, l, i - l));

    for (std::uint32_t m = 3; m <= nmax; ++m)
        for (std::uint32_t src = 2; src <= s.hmax; src += 2) {
            if (j.at(src).total_dim() == 0) continue;
            for (const auto& tup : detail::odd_tuples(m, src + m - 2)) {
                std::uint32_t need = 0;
                for (auto il : tup) need += j.at(il).mindeg();
                if (need > s.trunc) continue; /* no Adams degree can carry it */
                put(m, iota_multi(wt, j, tup));
            }
        }
    return s;
}

/* Coproduct of arity m on the basis element (i, n, row), as a formal tensor
 * sum.  Arities without stored maps (in particular arity one) give zero. */
template <class K>
TensorSum<K> delta_apply(const AInfStructure<K>& s, std::uint32_t m, std::uint32_t i,
                         std::uint32_t n, std::uint32_t row) {
    TensorSum<K> out;
    auto dit = s.delta.find(m);
    if (dit == s.delta.end()) return out;
    for (const auto& io : dit->second) {
        if (io.source != i) continue;
        auto eit = io.expansions.find(n);
        if (eit == io.expansions.end()) continue;
        if (row >= eit->second.size()) throw InternalError("coproduct: basis row out of range");
        for (const auto& tc : eit->second[row]) {
            TensorWordKey w(m);
            for (std::uint32_t l = 0; l < m; ++l) w[l] = {io.targets[l], tc.degs[l], tc.rows[l]};
            tensor_acc(out, w, tc.coeff);
        }
    }
    return out;
}

/* Higher product of dual elements.  Arity two goes through the pair
 * inclusions; higher arities vanish whenever some input has even homological
 * degree, matching the all-odd support of the coproducts. */
template <class K>
DualElt<K> mn_apply(const AInfStructure<K>& s, const std::vector<DualElt<K>>& fs) {
    if (fs.size() < 2) throw InternalError("dual product: need at least two factors");
    std::uint32_t m = static_cast<std::uint32_t>(fs.size());
    std::uint32_t isum = 0, adams = 0;
    for (const auto& f : fs) {
        isum += f.i;
        adams += f.n;
    }
    DualElt<K> zero;
    zero.i = isum + 2 - m;
    zero.n = adams;
    if (m >= 3)
        for (const auto& f : fs)
            if (f.i % 2 == 0) return zero;
    auto lit = s.lookup.find(m);
    if (lit == s.lookup.end()) return zero;
    std::vector<std::uint32_t> key;
    key.reserve(m);
    for (const auto& f : fs) key.push_back(f.i);
    auto kit = lit->second.find(key);
    if (kit == lit->second.end()) return zero;
    std::vector<const DualElt<K>*> ptrs;
    ptrs.reserve(m);
    for (const auto& f : fs) ptrs.push_back(&f);
    return detail::iota_dual_apply(s.delta.at(m)[kit->second], s.trunc, ptrs);
}

/* ---------------------------------------------------------------------------
 * Identity suites.
 * ------------------------------------------------------------------------ */

struct StasheffViolation {
    std::uint32_t identity = 0;
    std::uint32_t source = 0; /* homological degree of the probe or output */
    std::uint32_t adams = 0;
    std::string detail;
};

struct StasheffReport {
    bool ok = true;
    std::uint64_t probes = 0;
    std::vector<StasheffViolation> violations;
};

namespace detail {

inline constexpr std::size_t kMaxViolations = 16;

inline void report_violation(StasheffReport& rep, std::uint32_t identity, std::uint32_t source,
                             std::uint32_t adams, const std::string& detail) {
    rep.ok = false;
    if (rep.violations.size() < kMaxViolations)
        rep.violations.push_back({identity, source, adams, detail});
}

} // namespace detail

/* Coassociativity-type identities on the coproduct side, checked on every
 * stored basis element.  For each identity index nid the sum over splittings
 * (r, s, t) with r + s + t = nid of
 *   (-1)^(r s + t) (id^r (x) delta_s (x) id^t) o delta_{r+1+t}
 * must vanish; applying the inner coproduct across the first r tensor factors
 * costs the usual interchange sign on their homological degrees.  Identities
 * up to nmax + 1 only involve stored arities, since arity-one coproducts are
 * zero. */
template <class K>
StasheffReport check_stasheff_coalgebra(const AInfStructure<K>& s, std::uint32_t nid_max) {
    StasheffReport rep;
    if (nid_max > s.nmax + 1)
        throw InternalError("identity check: arity beyond the stored coproducts");
    for (std::uint32_t i = 0; i <= s.hmax; ++i)
        for (std::uint32_t n = 0; n <= s.trunc; ++n)
            for (std::uint32_t row = 0; row < s.jdims[i][n]; ++row)
                for (std::uint32_t nid = 1; nid <= nid_max; ++nid) {
                    TensorSum<K> acc;
                    for (std::uint32_t ss = 2; ss <= s.nmax && ss + 1 <= nid + 1; ++ss) {
                        if (nid + 1 < ss + 2) continue;
                        std::uint32_t m_out = nid + 1 - ss;
                        if (m_out < 2 || m_out > s.nmax) continue;
                        TensorSum<K> outer = delta_apply(s, m_out, i, n, row);
                        for (const auto& [w, cw] : outer)
                            for (std::uint32_t rr = 0; rr < m_out; ++rr) {
                                std::uint32_t tt = m_out - 1 - rr;
                                std::uint32_t expo = rr * ss + tt;
                                for (std::uint32_t a = 0; a < rr; ++a) expo += ss * w[a][0];
                                TensorSum<K> inner =
                                    delta_apply(s, ss, w[rr][0], w[rr][1], w[rr][2]);
                                for (const auto& [w2, c2] : inner) {
                                    TensorWordKey spliced;
                                    spliced.reserve(m_out - 1 + ss);
                                    for (std::uint32_t a = 0; a < rr; ++a)
                                        spliced.push_back(w[a]);
                                    for (const auto& let : w2) spliced.push_back(let);
                                    for (std::uint32_t a = rr + 1; a < m_out; ++a)
                                        spliced.push_back(w[a]);
                                    K c3 = cw * c2;
                                    K c4 = parity_sign<K>(expo) * c3;
                                    tensor_acc(acc, spliced, c4);
                                }
                            }
                    }
                    ++rep.probes;
                    if (!acc.empty()) {
                        const auto& [w, c] = *acc.begin();
                        std::ostringstream os;
                        os << "row " << row << ": residual " << tensor_word_str(w);
                        detail::report_violation(rep, nid, i, n, os.str());
                    }
                }
    return rep;
}

/* Associativity-type identities on the dual product side: for each identity
 * index nid the sum over (r, s, t) with r + s + t = nid of
 *   (-1)^(r + s t) m_{r+1+t} o (id^r (x) m_s (x) id^t)
 * must vanish on every tuple of basis functionals.  Tuples whose intermediate
 * or final level would leave the stored table are skipped, as are tuples
 * whose total Adams degree exceeds the truncation. */
template <class K>
StasheffReport check_stasheff_algebra(const AInfStructure<K>& s, std::uint32_t nid_max) {
    StasheffReport rep;
    if (nid_max > s.nmax + 1)
        throw InternalError("identity check: arity beyond the stored products");
    std::vector<DualElt<K>> basis;
    for (std::uint32_t i = 0; i <= s.hmax; ++i)
        for (std::uint32_t n = 0; n <= s.trunc; ++n)
            for (std::uint32_t row = 0; row < s.jdims[i][n]; ++row)
                basis.push_back(dual_unit_elt<K>(i, n, row));
    if (basis.empty()) return rep;

    for (std::uint32_t nid = 2; nid <= nid_max; ++nid) {
        std::vector<std::size_t> pick(nid, 0);
        bool done = false;
        while (!done) {
            std::vector<const DualElt<K>*> fs;
            fs.reserve(nid);
            std::uint32_t isum = 0, adams = 0;
            for (auto p : pick) {
                fs.push_back(&basis[p]);
                isum += basis[p].i;
                adams += basis[p].n;
            }
            bool usable = adams <= s.trunc;
            if (usable && isum + 3 > nid + s.hmax) usable = false;
            if (usable) {
                /* every inner window must stay inside the table too */
                for (std::uint32_t ss = 2; usable && ss <= s.nmax; ++ss) {
                    if (nid + 1 < ss + 2) continue;
                    std::uint32_t m_out = nid + 1 - ss;
                    if (m_out < 2 || m_out > s.nmax) continue;
                    for (std::uint32_t rr = 0; rr + ss <= nid; ++rr) {
                        std::uint32_t win = 0;
                        for (std::uint32_t l = rr; l < rr + ss; ++l) win += fs[l]->i;
                        if (win + 2 > ss + s.hmax) {
                            usable = false;
                            break;
                        }
                    }
                }
            }
            if (usable) {
                std::map<std::uint32_t, K> acc; /* over rows of the output level */
                std::uint32_t out_i = isum + 3 >= nid ? isum + 3 - nid : 0;
                for (std::uint32_t ss = 2; ss <= s.nmax; ++ss) {
                    if (nid + 1 < ss + 2) continue;
                    std::uint32_t m_out = nid + 1 - ss;
                    if (m_out < 2 || m_out > s.nmax) continue;
                    for (std::uint32_t rr = 0; rr + ss <= nid; ++rr) {
                        std::uint32_t tt = nid - ss - rr;
                        std::vector<DualElt<K>> window;
                        window.reserve(ss);
                        for (std::uint32_t l = rr; l < rr + ss; ++l) window.push_back(*fs[l]);
                        DualElt<K> inner = mn_apply(s, window);
                        if (dual_is_zero(inner)) continue;
                        std::vector<DualElt<K>> args;
                        args.reserve(m_out);
                        for (std::uint32_t l = 0; l < rr; ++l) args.push_back(*fs[l]);
                        args.push_back(inner);
                        for (std::uint32_t l = rr + ss; l < nid; ++l) args.push_back(*fs[l]);
                        DualElt<K> outer = mn_apply(s, args);
                        if (dual_is_zero(outer)) continue;
                        std::uint32_t expo = rr + ss * tt;
                        for (std::uint32_t l = 0; l < rr; ++l) expo += ss * fs[l]->i;
                        K sg = parity_sign<K>(expo);
                        for (const auto& [r2, c2] : outer.coeffs) {
                            K add = sg * c2;
                            auto [it, fresh] = acc.emplace(r2, add);
                            if (!fresh) {
                                K s2 = it->second + add;
                                if (is_zero(s2)) acc.erase(it);
                                else it->second = s2;
                            }
                        }
                    }
                }
                ++rep.probes;
                if (!acc.empty()) {
                    std::ostringstream os;
                    os << "inputs";
                    for (const auto* f : fs)
                        os << " J" << f->i << "[" << f->n << "]#" << f->coeffs.front().first;
                    os << ": residual at row " << acc.begin()->first;
                    detail::report_violation(rep, nid, out_i, adams, os.str());
                }
            }
            /* odometer */
            std::size_t pos = 0;
            while (pos < nid) {
                if (++pick[pos] < basis.size()) break;
                pick[pos] = 0;
                ++pos;
            }
            if (pos == nid) done = true;
        }
    }
    return rep;
}

/* The condensed form of the identity of index m + 1 on levels where only the
 * extreme coproduct arities survive: for each stored basis element,
 *   sum_{r=0}^{m-1} (-1)^r (id^r (x) delta_2 (x) id^{m-r-1}) o delta_m
 * must equal
 *   (id (x) delta_m) o delta_2  -  (-1)^m (delta_m (x) id) o delta_2.
 * The interchange sign on the right uses the arity parity of delta_m. */
template <class K>
StasheffReport check_reduced_identity(const AInfStructure<K>& s, std::uint32_t m) {
    if (m < 3 || m > s.nmax) throw InternalError("condensed identity: arity out of range");
    StasheffReport rep;
    for (std::uint32_t i = 0; i <= s.hmax; ++i)
        for (std::uint32_t n = 0; n <= s.trunc; ++n)
            for (std::uint32_t row = 0; row < s.jdims[i][n]; ++row) {
                TensorSum<K> diff;
                TensorSum<K> big = delta_apply(s, m, i, n, row);
                for (const auto& [w, cw] : big)
                    for (std::uint32_t rr = 0; rr < m; ++rr) {
                        TensorSum<K> inner = delta_apply(s, 2, w[rr][0], w[rr][1], w[rr][2]);
                        for (const auto& [w2, c2] : inner) {
                            TensorWordKey spliced;
                            spliced.reserve(m + 1);
                            for (std::uint32_t a = 0; a < rr; ++a) spliced.push_back(w[a]);
                            spliced.push_back(w2[0]);
                            spliced.push_back(w2[1]);
                            for (std::uint32_t a = rr + 1; a < m; ++a) spliced.push_back(w[a]);
                            K c3 = cw * c2;
                            K c4 = parity_sign<K>(rr) * c3;
                            tensor_acc(diff, spliced, c4);
                        }
                    }
                TensorSum<K> two = delta_apply(s, 2, i, n, row);
                for (const auto& [w, cw] : two) {
                    TensorSum<K> right = delta_apply(s, m, w[1][0], w[1][1], w[1][2]);
                    for (const auto& [w2, c2] : right) {
                        TensorWordKey spliced;
                        spliced.push_back(w[0]);
                        for (const auto& let : w2) spliced.push_back(let);
                        K c3 = cw * c2;
                        K c4 = parity_sign<K>(m * w[0][0] + 1) * c3;
                        tensor_acc(diff, spliced, c4); /* minus the first right term */
                    }
                    TensorSum<K> left = delta_apply(s, m, w[0][0], w[0][1], w[0][2]);
                    for (const auto& [w2, c2] : left) {
                        TensorWordKey spliced;
                        for (const auto& let : w2) spliced.push_back(let);
                        spliced.push_back(w[1]);
                        K c3 = cw * c2;
                        K c4 = parity_sign<K>(m) * c3; /* plus (-1)^m times the second */
                        tensor_acc(diff, spliced, c4);
                    }
                }
                ++rep.probes;
                if (!diff.empty()) {
                    std::ostringstream os;
                    os << "row " << row << ": residual " << tensor_word_str(diff.begin()->first);
                    detail::report_violation(rep, m + 1, i, n, os.str());
                }
            }
    return rep;
}

/* Counit and coaugmentation axioms: contracting either leg of the pair
 * coproduct with the projection onto level zero gives the identity, the
 * scalar level reproduces its own square, and no higher coproduct touches
 * level zero. */
template <class K>
bool check_counit_axioms(const AInfStructure<K>& s) {
    for (std::uint32_t i = 0; i <= s.hmax; ++i)
        for (std::uint32_t n = 0; n <= s.trunc; ++n)
            for (std::uint32_t row = 0; row < s.jdims[i][n]; ++row) {
                TensorSum<K> two = delta_apply(s, 2, i, n, row);
                std::map<TensorLetter, K> left, right;
                for (const auto& [w, c] : two) {
                    if (w[0] == TensorLetter{0, 0, 0}) {
                        auto [it, fresh] = left.emplace(w[1], c);
                        if (!fresh) {
                            K s2 = it->second + c;
                            it->second = s2;
                        }
                    }
                    if (w[1] == TensorLetter{0, 0, 0}) {
                        auto [it, fresh] = right.emplace(w[0], c);
                        if (!fresh) {
                            K s2 = it->second + c;
                            it->second = s2;
                        }
                    }
                }
                TensorLetter self{i, n, row};
                if (left.size() != 1 || left.begin()->first != self) return false;
                if (!(left.begin()->second == K(1))) return false;
                if (right.size() != 1 || right.begin()->first != self) return false;
                if (!(right.begin()->second == K(1))) return false;
            }
    for (const auto& [m, maps] : s.delta) {
        if (m == 2) continue;
        for (const auto& io : maps)
            if (io.source == 0) return false;
    }
    return true;
}

/* Unit axioms on the dual side: the functional dual to the scalar level is a
 * two-sided identity for the pair product. */
template <class K>
bool check_unit_axioms(const ProductTable<K>& t) {
    DualElt<K> one = dual_unit_elt<K>(0, 0, 0);
    for (std::uint32_t i = 0; i <= t.imax; ++i)
        for (std::uint32_t n = 0; n <= t.trunc; ++n)
            for (std::uint32_t row = 0; row < t.jdims[i][n]; ++row) {
                DualElt<K> f = dual_unit_elt<K>(i, n, row);
                DualElt<K> a = m2_apply(t, one, f);
                DualElt<K> b = m2_apply(t, f, one);
                if (!dual_equal(a, f)) return false;
                if (!dual_equal(b, f)) return false;
            }
    return true;
}

/* ---------------------------------------------------------------------------
 * The twisted tensor product differential.
 * ------------------------------------------------------------------------ */

template <class K>
struct TwistedReport {
    bool equal = true;
    std::uint32_t levels = 0;
    std::uint64_t rows = 0;
    std::vector<std::string> mismatches;
};

/* Rebuild the differential of J (x) A from the coproduct data alone: one leg
 * of each coproduct stays in J, every other leg is sent through the
 * projection onto level one and multiplied into A.  The result must agree
 * entry for entry with the stored right-sided complex differential, which was
 * assembled by a completely different route (tensor factorization of the J
 * inclusions and module action). */
template <class K>
TwistedReport<K> twisted_complex_check(const TruncatedAlgebra<K>& A, const JFamily<K>& j,
                                       const AInfStructure<K>& s, const KoszulComplex<K>& right) {
    if (right.kind != ComplexKind::right)
        throw InternalError("twisted check: expected the right-sided complex");
    if (right.trunc != j.trunc() || right.trunc != A.trunc())
        throw InternalError("twisted check: truncation mismatch");
    if (right.hmax > j.hmax()) throw InternalError("twisted check: level range mismatch");
    const WordTable& wt = A.wt();
    std::uint32_t D = right.trunc;
    TwistedReport<K> rep;
    rep.levels = right.hmax;

    /* the projection onto level one, in algebra coordinates, per degree */
    std::vector<std::vector<SparseVec<K>>> tau(D + 1);
    for (std::uint32_t d = 0; d <= D; ++d)
        for (const auto& r : j.at(1).at(d).rows()) tau[d].push_back(A.pi(d, r));
    std::uint32_t tau_min = j.at(1).mindeg();

    auto find_stored = [&](const std::vector<std::uint32_t>& key) -> const IotaMap<K>* {
        auto lit = s.lookup.find(static_cast<std::uint32_t>(key.size()));
        if (lit == s.lookup.end()) return nullptr;
        auto kit = lit->second.find(key);
        if (kit == lit->second.end()) return nullptr;
        return &s.delta.at(static_cast<std::uint32_t>(key.size()))[kit->second];
    };

    for (std::uint32_t i = 1; i <= right.hmax; ++i) {
        std::uint32_t maxdeg = 0;
        bool level_alive = false;
        for (std::uint32_t n = 0; n <= D; ++n)
            if (j.at(i).dim(n) > 0) {
                maxdeg = n;
                level_alive = true;
            }
        if (!level_alive) continue;

        /* Coproduct terms surviving the level-one projection on all legs but
         * the first: always the pair term with second leg at level one, and
         * on even levels also the longer all-ones tails, up to the arity the
         * Adams degrees of the level can still carry. */
        std::vector<std::vector<std::uint32_t>> keys;
        keys.push_back({i - 1, 1});
        std::uint32_t jmin = j.at(i - 1).mindeg();
        if (i % 2 == 0)
            for (std::uint32_t m = 3; jmin <= maxdeg && jmin + (m - 1) * tau_min <= maxdeg;
                 ++m) {
                std::vector<std::uint32_t> key(1, i - 1);
                for (std::uint32_t l = 1; l < m; ++l) key.push_back(1);
                keys.push_back(std::move(key));
            }
        std::vector<IotaMap<K>> extra;
        std::vector<std::size_t> from_extra;
        for (const auto& key : keys)
            if (find_stored(key) == nullptr) {
                from_extra.push_back(extra.size());
                if (key.size() == 2) extra.push_back(iota2(wt, j, key[0], key[1]));
                else extra.push_back(iota_multi(wt, j, key));
            } else {
                from_extra.push_back(static_cast<std::size_t>(-1));
            }
        std::vector<const IotaMap<K>*> parts;
        for (std::size_t idx = 0; idx < keys.size(); ++idx)
            parts.push_back(from_extra[idx] == static_cast<std::size_t>(-1)
                                ? find_stored(keys[idx])
                                : &extra[from_extra[idx]]);

        for (std::uint32_t n = 0; n <= D; ++n) {
            const BlockBasis& src = right.levels[i][n];
            if (src.total() == 0) continue;
            const BlockBasis& dst = right.levels[i - 1][n];
            for (const auto& blk : src.blocks()) {
                std::uint32_t m_src = blk.degs[0];
                std::uint32_t q = blk.degs[1];
                for (std::uint32_t r = 0; r < blk.dims[0]; ++r)
                    for (std::uint32_t k = 0; k < blk.dims[1]; ++k) {
                        std::uint32_t flat = src.index({m_src, q}, {r, k});
                        std::map<std::uint32_t, K> acc;
                        for (const IotaMap<K>* io : parts) {
                            auto eit = io->expansions.find(m_src);
                            if (eit == io->expansions.end()) continue;
                            std::uint32_t m = static_cast<std::uint32_t>(io->targets.size());
                            for (const auto& tc : eit->second[r]) {
                                SparseVec<K> prod = tau[tc.degs[1]][tc.rows[1]];
                                std::uint32_t pdeg = tc.degs[1];
                                for (std::uint32_t l = 2; l < m; ++l) {
                                    prod = A.mult_vec(pdeg, prod, tc.degs[l],
                                                      tau[tc.degs[l]][tc.rows[l]]);
                                    pdeg += tc.degs[l];
                                }
                                prod = A.mult_vec(pdeg, prod, q, sv_unit<K>(k));
                                for (const auto& [k2, cc] : prod) {
                                    K add = tc.coeff * cc;
                                    std::uint32_t at = dst.index(
                                        {tc.degs[0], n - tc.degs[0]}, {tc.rows[0], k2});
                                    auto [it, fresh] = acc.emplace(at, add);
                                    if (!fresh) {
                                        K s2 = it->second + add;
                                        if (is_zero(s2)) acc.erase(it);
                                        else it->second = s2;
                                    }
                                }
                            }
                        }
                        SparseVec<K> mine;
                        for (const auto& [at, c] : acc) mine.emplace_back(at, c);
                        ++rep.rows;
                        if (mine != right.diff[i][n][flat]) {
                            rep.equal = false;
                            if (rep.mismatches.size() < 8) {
                                std::ostringstream os;
                                os << "level " << i << " degree " << n << " block " << m_src
                                   << " row " << r << " slot " << k;
                                rep.mismatches.push_back(os.str());
                            }
                        }
                    }
            }
        }
    }
    return rep;
}

/* ---------------------------------------------------------------------------
 * Generation in low cohomological degree.
 * ------------------------------------------------------------------------ */

struct K2Failure {
    std::uint32_t level = 0;
    std::uint32_t adams = 0;
    std::uint32_t defect = 0;
};

struct K2Report {
    bool ok = true;
    std::uint32_t imax = 0;
    std::vector<K2Failure> failures;
};

/* Whether the dual family is generated by its first two levels: level i is
 * covered by products out of levels one and two exactly when the combined
 * inclusion of J_i into J_1 (x) J_{i-1} direct-sum J_2 (x) J_{i-2} is
 * injective degreewise.  Levels zero through two generate themselves. */
template <class K>
K2Report k2_check(const WordTable& wt, const JFamily<K>& j, std::uint32_t imax) {
    K2Report rep;
    rep.imax = std::min<std::uint32_t>(imax, j.hmax());
    std::uint32_t D = j.trunc();
    std::vector<std::vector<std::uint32_t>> jd(j.hmax() + 1,
                                               std::vector<std::uint32_t>(D + 1, 0));
    for (std::uint32_t i = 0; i <= j.hmax(); ++i)
        for (std::uint32_t n = 0; n <= D; ++n) jd[i][n] = j.at(i).dim(n);
    for (std::uint32_t i = 3; i <= rep.imax; ++i) {
        IotaMap<K> ia = iota2(wt, j, 1, i - 1);
        IotaMap<K> ib = iota2(wt, j, 2, i - 2);
        for (std::uint32_t n = 0; n <= D; ++n) {
            std::uint32_t d = jd[i][n];
            if (d == 0) continue;
            BlockBasis ba({&jd[1], &jd[i - 1]}, n);
            BlockBasis bb({&jd[2], &jd[i - 2]}, n);
            Echelon<K> ech(ba.total() + bb.total());
            std::uint32_t rank = 0;
            for (std::uint32_t r = 0; r < d; ++r) {
                std::map<std::uint32_t, K> acc;
                auto ea = ia.expansions.find(n);
                if (ea != ia.expansions.end())
                    for (const auto& tc : ea->second[r]) {
                        std::uint32_t at = ba.index(tc.degs, tc.rows);
                        auto [it, fresh] = acc.emplace(at, tc.coeff);
                        if (!fresh) {
                            K s2 = it->second + tc.coeff;
                            it->second = s2;
                        }
                    }
                auto eb = ib.expansions.find(n);
                if (eb != ib.expansions.end())
                    for (const auto& tc : eb->second[r]) {
                        std::uint32_t at = ba.total() + bb.index(tc.degs, tc.rows);
                        auto [it, fresh] = acc.emplace(at, tc.coeff);
                        if (!fresh) {
                            K s2 = it->second + tc.coeff;
                            it->second = s2;
                        }
                    }
                SparseVec<K> v;
                for (const auto& [at, c] : acc)
                    if (!is_zero(c)) v.emplace_back(at, c);
                if (ech.add_row(std::move(v))) ++rank;
            }
            if (rank < d) {
                rep.ok = false;
                rep.failures.push_back({i, n, d - rank});
            }
        }
    }
    return rep;
}

} // namespace mk
