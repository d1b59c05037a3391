#!/usr/bin/env python3
"""Independent Tor tables via the normalized bar complex.

For each shipped presentation this script builds the truncated quotient
algebra with Fraction row reduction, forms the normalized bar complex

    C_i = (A_+)^{tensor i},   d(a_1|...|a_i) =
        sum_{j=1}^{i-1} (-1)^(j-1) a_1|...|a_j a_{j+1}|...|a_i

degreewise in the Adams grading, and reports dim Tor_{i,n} computed as
dim C_{i,n} - rank d_{i,n} - rank d_{i+1,n}.  Small matrices are reduced over
Q; large ones modulo the prime 32003 (reported when it happens).  A d.d = 0
self-check runs on every block.  The output is frozen into the C++ test
expectations.
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
from _oracle_lib import Fraction, TruncAlg, parse_alg, rank_modp, rank_of

PRIME = 32003
DENSE_LIMIT = 150000


def bar_basis(alg, i, n):
    """basis of (A_+)^{tensor i} in Adams degree n: tuples of (deg, idx)"""
    if i == 0:
        return [()] if n == 0 else []
    out = []
    for first in range(1, n - i + 2):
        if alg.dim(first) == 0:
            continue
        for tail in bar_basis(alg, i - 1, n - first):
            for idx in range(alg.dim(first)):
                out.append(((first, idx),) + tail)
    return out


def differential_row(alg, elem, codomain_index):
    out = {}
    for j in range(len(elem) - 1):
        sign = 1 if j % 2 == 0 else -1
        (da, ia), (db, ib) = elem[j], elem[j + 1]
        prod = alg.mult(da, ia, db, ib)
        for m, coeff in prod.items():
            merged = elem[:j] + ((da + db, m),) + elem[j + 2:]
            col = codomain_index[merged]
            nv = out.get(col, Fraction(0)) + sign * coeff
            if nv == 0:
                out.pop(col, None)
            else:
                out[col] = nv
    return out


def tor_table(alg, imax, nmax):
    tor = {}
    used_modp = False
    for n in range(0, nmax + 1):
        bases = {}
        index = {}
        for i in range(0, imax + 2):
            bases[i] = bar_basis(alg, i, n)
            index[i] = {b: c for c, b in enumerate(bases[i])}
        rows = {}
        ranks = {1: 0}
        for i in range(2, imax + 2):
            rows[i] = [differential_row(alg, b, index[i - 1])
                       for b in bases[i]]
            size = len(bases[i]) * max(len(bases[i - 1]), 1)
            if size > DENSE_LIMIT:
                ranks[i] = rank_modp(rows[i], PRIME)
                used_modp = True
            else:
                ranks[i] = rank_of(rows[i])
        # d.d = 0 self-check
        for i in range(3, imax + 2):
            for r in rows[i]:
                acc = {}
                for col, val in r.items():
                    img = differential_row(alg, bases[i - 1][col],
                                           index[i - 2])
                    for c2, v2 in img.items():
                        nv = acc.get(c2, Fraction(0)) + val * v2
                        if nv == 0:
                            acc.pop(c2, None)
                        else:
                            acc[c2] = nv
                assert not acc, 'd.d != 0 at (i=%d, n=%d)' % (i, n)
        for i in range(0, imax + 1):
            h = len(bases[i]) - ranks.get(i, 0) - ranks.get(i + 1, 0)
            if h:
                tor.setdefault(i, {})[n] = h
    return tor, used_modp


def fmt(dims):
    if not dims:
        return '0'
    return ' '.join('%d:%d' % (n, d) for n, d in sorted(dims.items()))


def run(name, path, imax, nmax):
    field, gens, rels = parse_alg(path)
    alg = TruncAlg(gens, rels, nmax)
    tor, used_modp = tor_table(alg, imax, nmax)
    mode = 'mixed Q / F_%d' % PRIME if used_modp else 'Q'
    print('== %s  (i<=%d, n<=%d, mode %s)' % (name, imax, nmax, mode))
    print('A dims: %s' % ' '.join(str(d) for d in alg.dims()))
    for i in range(imax + 1):
        print('Tor[%d]: %s' % (i, fmt(tor.get(i, {}))))
    print()


def main():
    base = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..',
                        'corpus')
    jobs = {
        'trunc2': ('trunc2.alg', 6, 8),
        'trunc3': ('trunc3.alg', 6, 9),
        'trunc4': ('trunc4.alg', 6, 12),
        'poly2': ('poly2.alg', 4, 8),
        'free2': ('free2.alg', 4, 8),
        'sym_1_2': ('sym_1_2.alg', 4, 12),
    }
    names = sys.argv[1:] if len(sys.argv) > 1 else list(jobs)
    for name in names:
        fname, imax, nmax = jobs[name]
        run(name, os.path.join(base, fname), imax, nmax)


if __name__ == '__main__':
    main()
