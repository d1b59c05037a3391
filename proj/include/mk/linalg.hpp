#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mk/errors.hpp"
#include "mk/field.hpp"

namespace mk {

/* Sparse vector: sorted (column, coefficient) pairs, no explicit zeros.
 * Columns index a fixed basis of the ambient space; the ambient dimension is
 * tracked by whoever owns the vector. */
template <class K>
using SparseVec = std::vector<std::pair<std::uint32_t, K>>;

template <class K>
SparseVec<K> sv_unit(std::uint32_t col) {
    return {{col, K(1)}};
}

template <class K>
SparseVec<K> sv_from_dense(const std::vector<K>& dense) {
    SparseVec<K> v;
    for (std::uint32_t j = 0; j < dense.size(); ++j)
        if (!is_zero(dense[j])) v.emplace_back(j, dense[j]);
    return v;
}

template <class K>
std::vector<K> sv_to_dense(const SparseVec<K>& v, std::uint32_t ambient) {
    std::vector<K> dense(ambient, K(0));
    for (const auto& [j, c] : v) dense[j] = c;
    return dense;
}

template <class K>
K sv_get(const SparseVec<K>& v, std::uint32_t col) {
    auto it = std::lower_bound(v.begin(), v.end(), col,
                               [](const auto& e, std::uint32_t c) { return e.first < c; });
    if (it != v.end() && it->first == col) return it->second;
    return K(0);
}

template <class K>
void sv_scale(SparseVec<K>& v, const K& c) {
    if (is_zero(c)) { v.clear(); return; }
    for (auto& e : v) {
        K t = e.second * c;
        e.second = t;
    }
}

/* a + c*b, merged in one pass. */
template <class K>
SparseVec<K> sv_add_scaled(const SparseVec<K>& a, const K& c, const SparseVec<K>& b) {
    if (is_zero(c)) return a;
    SparseVec<K> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            K t = c * b[j].second;
            if (!is_zero(t)) out.emplace_back(b[j].first, t);
            ++j;
        } else {
            K t = a[i].second + c * b[j].second;
            if (!is_zero(t)) out.emplace_back(a[i].first, t);
            ++i; ++j;
        }
    }
    return out;
}

template <class K>
SparseVec<K> sv_add(const SparseVec<K>& a, const SparseVec<K>& b) {
    return sv_add_scaled(a, K(1), b);
}

/* Shift every column index up by `offset` (block embedding). */
template <class K>
SparseVec<K> sv_shift(const SparseVec<K>& v, std::uint32_t offset) {
    SparseVec<K> out = v;
    for (auto& e : out) e.first += offset;
    return out;
}

/* Keep the columns in [from, to) and renumber them to start at zero. */
template <class K>
SparseVec<K> sv_window(const SparseVec<K>& v, std::uint32_t from, std::uint32_t to) {
    SparseVec<K> out;
    for (const auto& [j, c] : v)
        if (j >= from && j < to) out.emplace_back(j - from, c);
    return out;
}

/* Dense matrix with textbook reduced row echelon form.  This is the reference
 * implementation the sparse pipeline is checked against; the engine itself
 * works on SparseVec rows throughout. */
template <class K>
struct Matrix {
    std::uint32_t rows = 0, cols = 0;
    std::vector<K> a; // row-major

    Matrix() = default;
    Matrix(std::uint32_t r, std::uint32_t c) : rows(r), cols(c), a(std::size_t(r) * c, K(0)) {}

    K& at(std::uint32_t i, std::uint32_t j) { return a[std::size_t(i) * cols + j]; }
    const K& at(std::uint32_t i, std::uint32_t j) const { return a[std::size_t(i) * cols + j]; }
};

/* In-place RREF with first-nonzero pivoting: for each column in order, the
 * first unused row with a nonzero entry becomes the pivot row.  Returns the
 * pivot columns; zero rows are moved to the bottom and truncated away. */
template <class K>
std::vector<std::uint32_t> rref_in_place(Matrix<K>& m) {
    std::vector<std::uint32_t> pivots;
    std::uint32_t r = 0;
    for (std::uint32_t col = 0; col < m.cols && r < m.rows; ++col) {
        std::uint32_t sel = r;
        while (sel < m.rows && is_zero(m.at(sel, col))) ++sel;
        if (sel == m.rows) continue;
        for (std::uint32_t j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(sel, j));
        K inv = K(1) / m.at(r, col);
        for (std::uint32_t j = col; j < m.cols; ++j) {
            K t = m.at(r, j) * inv;
            m.at(r, j) = t;
        }
        for (std::uint32_t i = 0; i < m.rows; ++i) {
            if (i == r || is_zero(m.at(i, col))) continue;
            K f = m.at(i, col);
            for (std::uint32_t j = col; j < m.cols; ++j) {
                K t = m.at(i, j) - f * m.at(r, j);
                m.at(i, j) = t;
            }
        }
        pivots.push_back(col);
        ++r;
    }
    m.rows = r;
    m.a.resize(std::size_t(r) * m.cols);
    return pivots;
}

template <class K>
class Subspace;

/* Incremental row-echelon accumulator.  Rows are kept forward-reduced with
 * unit leading coefficients, keyed by pivot column; to_subspace() finishes the
 * back substitution and hands out the canonical basis. */
template <class K>
class Echelon {
public:
    explicit Echelon(std::uint32_t ambient) : ambient_(ambient) {}

    /* Returns true if the row enlarged the span. */
    bool add_row(SparseVec<K> v) {
        while (!v.empty()) {
            auto it = rows_.find(v.front().first);
            if (it == rows_.end()) {
                K inv = K(1) / v.front().second;
                sv_scale(v, inv);
                rows_.emplace(v.front().first, std::move(v));
                return true;
            }
            K c = -v.front().second;
            v = sv_add_scaled(v, c, it->second);
        }
        return false;
    }

    /* Residual of v after forward reduction against the current rows.  A hit
     * at position i cancels that column and only touches larger columns, so a
     * left-to-right scan with a stationary index is enough. */
    SparseVec<K> reduce(SparseVec<K> v) const {
        std::size_t i = 0;
        while (i < v.size()) {
            auto it = rows_.find(v[i].first);
            if (it == rows_.end()) { ++i; continue; }
            K c = -v[i].second;
            v = sv_add_scaled(v, c, it->second);
        }
        return v;
    }

    bool contains(const SparseVec<K>& v) const { return reduce(v).empty(); }

    std::size_t rank() const { return rows_.size(); }
    std::uint32_t ambient() const { return ambient_; }

    Subspace<K> to_subspace() const;

private:
    std::uint32_t ambient_;
    std::map<std::uint32_t, SparseVec<K>> rows_;
};

/* A linear subspace held by its canonical reduced-row-echelon basis.  Two
 * Subspace values over the same ambient space compare equal exactly when they
 * are the same subspace, so every dimension and basis this engine reports is
 * independent of the order work arrived in. */
template <class K>
class Subspace {
public:
    Subspace() = default;

    static Subspace zero(std::uint32_t ambient) {
        Subspace s;
        s.ambient_ = ambient;
        return s;
    }

    static Subspace span(std::uint32_t ambient, const std::vector<SparseVec<K>>& gens) {
        Echelon<K> acc(ambient);
        for (const auto& g : gens) acc.add_row(g);
        return acc.to_subspace();
    }

    static Subspace full(std::uint32_t ambient) {
        std::vector<SparseVec<K>> rows;
        std::vector<std::uint32_t> piv;
        rows.reserve(ambient);
        for (std::uint32_t j = 0; j < ambient; ++j) {
            rows.push_back(sv_unit<K>(j));
            piv.push_back(j);
        }
        return from_rref(ambient, std::move(rows), std::move(piv));
    }

    /* Trusted constructor for rows already in canonical RREF (unit-vector
     * spans, pivot-selected slices of an existing RREF). */
    static Subspace from_rref(std::uint32_t ambient, std::vector<SparseVec<K>> rows,
                              std::vector<std::uint32_t> pivots) {
        Subspace s;
        s.ambient_ = ambient;
        s.rows_ = std::move(rows);
        s.pivots_ = std::move(pivots);
        return s;
    }

    std::uint32_t ambient() const { return ambient_; }
    std::uint32_t dim() const { return static_cast<std::uint32_t>(rows_.size()); }
    const std::vector<SparseVec<K>>& rows() const { return rows_; }
    const std::vector<std::uint32_t>& pivots() const { return pivots_; }

    bool is_zero_space() const { return rows_.empty(); }

    bool contains(const SparseVec<K>& v) const {
        return reduce(v).empty();
    }

    /* Residual of v after subtracting its pivot-coordinate combination of
     * basis rows; zero exactly on members, and always supported away from the
     * pivot columns. */
    SparseVec<K> reduce(const SparseVec<K>& v) const {
        SparseVec<K> rest = v;
        std::size_t k = 0;
        while (k < rest.size()) {
            std::uint32_t col = rest[k].first;
            auto it = std::lower_bound(pivots_.begin(), pivots_.end(), col);
            if (it == pivots_.end() || *it != col) {
                ++k;
                continue;
            }
            // Basis rows are canonical, so subtracting clears this column and
            // touches non-pivot columns further right only.
            std::size_t r = static_cast<std::size_t>(it - pivots_.begin());
            K c = -rest[k].second;
            rest = sv_add_scaled(rest, c, rows_[r]);
        }
        return rest;
    }

    bool contains(const Subspace& other) const {
        for (const auto& r : other.rows_)
            if (!contains(r)) return false;
        return true;
    }

    /* Coefficients of v in the canonical basis, or nullopt if v lies outside.
     * Reading at pivot columns gives the only candidate; the residual check
     * makes membership exact. */
    std::optional<std::vector<K>> coordinates(const SparseVec<K>& v) const {
        std::vector<K> coeff(rows_.size(), K(0));
        SparseVec<K> rest = v;
        std::size_t k = 0;
        while (k < rest.size()) {
            std::uint32_t col = rest[k].first;
            auto it = std::lower_bound(pivots_.begin(), pivots_.end(), col);
            if (it == pivots_.end() || *it != col) {
                ++k;
                continue;
            }
            std::size_t r = static_cast<std::size_t>(it - pivots_.begin());
            K c = rest[k].second;
            coeff[r] = c;
            K neg = -c;
            rest = sv_add_scaled(rest, neg, rows_[r]);
        }
        if (!rest.empty()) return std::nullopt;
        return coeff;
    }

    bool operator==(const Subspace& other) const {
        return ambient_ == other.ambient_ && pivots_ == other.pivots_ && rows_ == other.rows_;
    }

private:
    std::uint32_t ambient_ = 0;
    std::vector<SparseVec<K>> rows_;
    std::vector<std::uint32_t> pivots_;
};

template <class K>
Subspace<K> Echelon<K>::to_subspace() const {
    std::vector<std::uint32_t> piv;
    std::vector<SparseVec<K>> rr;
    piv.reserve(rows_.size());
    rr.reserve(rows_.size());
    for (const auto& [p, row] : rows_) {
        piv.push_back(p);
        rr.push_back(row);
    }
    // Back substitution, last pivot first; later rows are already clean when
    // an earlier row is reduced against them.  The scan walks the entries of
    // the row being cleaned rather than the list of later rows, so the cost
    // follows the fill of the matrix instead of the square of the rank.
    for (std::size_t idx = rr.size(); idx-- > 0;) {
        SparseVec<K>& row = rr[idx];
        std::size_t k = 0;
        while (k < row.size()) {
            std::uint32_t col = row[k].first;
            auto it = std::lower_bound(piv.begin(), piv.end(), col);
            std::size_t later = static_cast<std::size_t>(it - piv.begin());
            if (it == piv.end() || *it != col || later <= idx) {
                ++k;
                continue;
            }
            // Cancelling this column brings in entries at larger columns only,
            // so k keeps pointing at the first entry not yet examined.
            K c = -row[k].second;
            row = sv_add_scaled(row, c, rr[later]);
        }
    }
    return Subspace<K>::from_rref(ambient_, std::move(rr), std::move(piv));
}

template <class K>
Subspace<K> sum(const Subspace<K>& a, const Subspace<K>& b) {
    if (a.ambient() != b.ambient()) throw InternalError("sum: ambient mismatch");
    Echelon<K> acc(a.ambient());
    for (const auto& r : a.rows()) acc.add_row(r);
    for (const auto& r : b.rows()) acc.add_row(r);
    return acc.to_subspace();
}

/* Zassenhaus intersection.  Rows [u | u] for u in A and [w | 0] for w in B are
 * echelonized over the doubled space; rows whose pivot falls in the right
 * block have left block zero and right block in A with (row - something in A
 * reaching it) in B, i.e. they span A ∩ B.  The surviving right-block rows of
 * the canonical doubled RREF are themselves a canonical RREF. */
template <class K>
Subspace<K> intersect(const Subspace<K>& a, const Subspace<K>& b) {
    if (a.ambient() != b.ambient()) throw InternalError("intersect: ambient mismatch");
    const std::uint32_t n = a.ambient();
    if (a.is_zero_space() || b.is_zero_space()) return Subspace<K>::zero(n);
    Echelon<K> acc(2 * n);
    for (const auto& u : a.rows()) {
        SparseVec<K> row = u;
        SparseVec<K> hi = sv_shift(u, n);
        row.insert(row.end(), hi.begin(), hi.end());
        acc.add_row(std::move(row));
    }
    for (const auto& w : b.rows()) acc.add_row(w);
    Subspace<K> big = acc.to_subspace();
    std::vector<SparseVec<K>> rows;
    std::vector<std::uint32_t> piv;
    for (std::size_t r = 0; r < big.rows().size(); ++r) {
        if (big.pivots()[r] < n) continue;
        rows.push_back(sv_window(big.rows()[r], n, 2 * n));
        piv.push_back(big.pivots()[r] - n);
    }
    return Subspace<K>::from_rref(n, std::move(rows), std::move(piv));
}

template <class K>
Subspace<K> intersect(std::vector<const Subspace<K>*> spaces) {
    if (spaces.empty()) throw InternalError("intersect: empty list");
    Subspace<K> acc = *spaces.front();
    for (std::size_t i = 1; i < spaces.size() && !acc.is_zero_space(); ++i)
        acc = intersect(acc, *spaces[i]);
    return acc;
}

/* Canonical complement of w_sub inside w: the rows of w's basis whose leading
 * coordinate is not a pivot of w_sub.  Requires w_sub ⊆ w; the pivot set of a
 * subspace is monotone under inclusion, so the selection always has the right
 * size. */
template <class K>
Subspace<K> complement_in(const Subspace<K>& w_sub, const Subspace<K>& w) {
    if (w_sub.ambient() != w.ambient()) throw InternalError("complement_in: ambient mismatch");
    if (!w.contains(w_sub)) throw InternalError("complement_in: not a subspace of the whole");
    std::vector<SparseVec<K>> rows;
    std::vector<std::uint32_t> piv;
    const auto& sp = w_sub.pivots();
    for (std::size_t r = 0; r < w.rows().size(); ++r) {
        std::uint32_t p = w.pivots()[r];
        if (std::binary_search(sp.begin(), sp.end(), p)) continue;
        rows.push_back(w.rows()[r]);
        piv.push_back(p);
    }
    if (rows.size() + w_sub.dim() != w.dim())
        throw InternalError("complement_in: pivot selection size mismatch");
    return Subspace<K>::from_rref(w.ambient(), std::move(rows), std::move(piv));
}

/* Kernel of the map sending source basis vector i to images[i] in a space of
 * dimension dst_ambient.  Augmented rows [image_i | e_i]; rows whose pivot
 * lands in the source block encode kernel elements, already in canonical
 * RREF. */
template <class K>
Subspace<K> kernel_of(const std::vector<SparseVec<K>>& images, std::uint32_t dst_ambient) {
    const std::uint32_t src = static_cast<std::uint32_t>(images.size());
    Echelon<K> acc(dst_ambient + src);
    for (std::uint32_t i = 0; i < src; ++i) {
        SparseVec<K> row = images[i];
        row.emplace_back(dst_ambient + i, K(1));
        acc.add_row(std::move(row));
    }
    Subspace<K> big = acc.to_subspace();
    std::vector<SparseVec<K>> rows;
    std::vector<std::uint32_t> piv;
    for (std::size_t r = 0; r < big.rows().size(); ++r) {
        if (big.pivots()[r] < dst_ambient) continue;
        rows.push_back(sv_window(big.rows()[r], dst_ambient, dst_ambient + src));
        piv.push_back(big.pivots()[r] - dst_ambient);
    }
    return Subspace<K>::from_rref(src, std::move(rows), std::move(piv));
}

template <class K>
std::uint32_t rank_of_rows(std::uint32_t ambient, const std::vector<SparseVec<K>>& rows) {
    Echelon<K> acc(ambient);
    for (const auto& r : rows) acc.add_row(r);
    return static_cast<std::uint32_t>(acc.rank());
}

/* Solve v = Σ x_i row_i for a fixed list of rows.  The rows are indexed by
 * caller-meaningful labels (tensor factor tuples, summand names); the solver
 * reports whether they were independent, which doubles as the faithfulness
 * check the callers rely on for uniqueness. */
template <class K>
class SpanSolver {
public:
    SpanSolver(std::uint32_t ambient, const std::vector<SparseVec<K>>& rows)
        : ambient_(ambient), n_(static_cast<std::uint32_t>(rows.size())), acc_(ambient + n_) {
        indep_ = true;
        for (std::uint32_t i = 0; i < n_; ++i) {
            SparseVec<K> row = rows[i];
            row.emplace_back(ambient_ + i, K(1));
            acc_.add_row(std::move(row));
        }
        // A dependent family shows up as a row whose pivot fell in the label
        // block: some combination of input rows vanished in the ambient part.
        Subspace<K> big = acc_.to_subspace();
        for (std::uint32_t p : big.pivots())
            if (p >= ambient_) { indep_ = false; break; }
        echelon_ = std::move(big);
    }

    bool independent() const { return indep_; }
    std::uint32_t num_rows() const { return n_; }

    std::optional<std::vector<K>> solve(const SparseVec<K>& v) const {
        if (!indep_) throw InternalError("SpanSolver: spanning rows are dependent");
        SparseVec<K> rest = v;
        for (std::size_t r = 0; r < echelon_.rows().size(); ++r) {
            K c = sv_get(rest, echelon_.pivots()[r]);
            if (is_zero(c)) continue;
            K neg = -c;
            rest = sv_add_scaled(rest, neg, echelon_.rows()[r]);
        }
        std::vector<K> coeff(n_, K(0));
        for (const auto& [j, c] : rest) {
            if (j < ambient_) return std::nullopt; // v not in the span
            K neg = -c;
            coeff[j - ambient_] = neg;
        }
        return coeff;
    }

private:
    std::uint32_t ambient_;
    std::uint32_t n_;
    Echelon<K> acc_;
    Subspace<K> echelon_;
    bool indep_ = true;
};

} // namespace mk
