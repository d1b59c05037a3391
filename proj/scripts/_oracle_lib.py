"""Shared helpers for the oracle scripts.

Everything here is deliberately written from scratch on top of the standard
library only (fractions.Fraction), with dense-ish dict-based rows, so that it
shares no code with the C++ implementation it is meant to check.

Conventions mirrored on purpose so that canonical objects coincide:
  * words of a fixed total degree are enumerated by first generator index
    ascending, then recursively on the tail (plain lexicographic order on
    generator-index sequences);
  * reduced row echelon forms use the smallest column index as the leading
    entry of each row, normalized to 1, with pivot columns eliminated from
    all other rows.
"""

from fractions import Fraction


# ---------------------------------------------------------------------------
# presentation files

def parse_alg(path):
    field = None
    gens = []          # list of (name, degree)
    rels = []          # list of dict {word(tuple of gen indices): Fraction}
    name_to_idx = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            if line.startswith('field'):
                field = line.split(None, 1)[1].strip()
            elif line.startswith('gens'):
                body = line.split(None, 1)[1]
                for part in body.split(','):
                    name, deg = part.strip().split(':')
                    name_to_idx[name.strip()] = len(gens)
                    gens.append((name.strip(), int(deg)))
            elif line.startswith('rel'):
                body = line.split(None, 1)[1]
                rels.append(_parse_poly(body, name_to_idx))
            else:
                raise ValueError('unknown line: ' + line)
    return field, gens, rels


def _parse_poly(text, name_to_idx):
    # split into signed terms
    terms = []
    buf = ''
    sign = 1
    first = True
    i = 0
    text = text.strip()
    while i < len(text):
        ch = text[i]
        if ch in '+-' and buf.strip():
            terms.append((sign, buf.strip()))
            sign = 1 if ch == '+' else -1
            buf = ''
        elif ch == '-' and first:
            sign = -sign
        else:
            buf += ch
        first = False
        i += 1
    if buf.strip():
        terms.append((sign, buf.strip()))
    poly = {}
    for sgn, term in terms:
        coeff = Fraction(sgn)
        word = []
        for factor in term.split('*'):
            factor = factor.strip()
            if not factor:
                continue
            if factor[0].isdigit():
                coeff *= Fraction(factor)
            else:
                if '^' in factor:
                    base, exp = factor.split('^')
                    word.extend([name_to_idx[base.strip()]] * int(exp))
                else:
                    word.append(name_to_idx[factor])
        w = tuple(word)
        poly[w] = poly.get(w, Fraction(0)) + coeff
        if poly[w] == 0:
            del poly[w]
    return poly


# ---------------------------------------------------------------------------
# sparse rows and echelon forms over Fraction

def row_addmul(a, c, b):
    """return a + c*b for dict rows"""
    out = dict(a)
    for col, val in b.items():
        nv = out.get(col, Fraction(0)) + c * val
        if nv == 0:
            out.pop(col, None)
        else:
            out[col] = nv
    return out


class Ech:
    """Canonical reduced row echelon form, rows as dicts col -> Fraction."""

    def __init__(self):
        self.piv = {}   # pivot col -> row (row[pivot] == 1)

    def _reduce(self, row):
        row = dict(row)
        while row:
            hit = None
            for c in sorted(row):
                if c in self.piv:
                    hit = c
                    break
            if hit is None:
                break
            row = row_addmul(row, -row[hit], self.piv[hit])
        return row

    def add(self, row):
        row = self._reduce(row)
        if not row:
            return False
        lead = min(row)
        inv = Fraction(1) / row[lead]
        row = {c: v * inv for c, v in row.items()}
        # eliminate the new pivot from existing rows
        for p, r in self.piv.items():
            if lead in r:
                self.piv[p] = row_addmul(r, -r[lead], row)
        self.piv[lead] = row
        return True

    def reduce(self, row):
        return self._reduce(row)

    def rows(self):
        return [self.piv[p] for p in sorted(self.piv)]

    def dim(self):
        return len(self.piv)

    def contains(self, row):
        return not self._reduce(row)

    def equals(self, other):
        if sorted(self.piv) != sorted(other.piv):
            return False
        for p in self.piv:
            if self.piv[p] != other.piv[p]:
                return False
        return True


def rank_of(rows):
    e = Ech()
    for r in rows:
        e.add(r)
    return e.dim()


def rank_modp(rows, p):
    """rank of dict-rows with Fraction entries, computed modulo a prime p"""
    piv = {}
    for row in rows:
        r = {}
        for c, v in row.items():
            num = v.numerator % p
            den = v.denominator % p
            if den == 0:
                raise ZeroDivisionError('denominator divisible by p')
            r[c] = (num * pow(den, p - 2, p)) % p
        r = {c: v for c, v in r.items() if v}
        while r:
            hit = None
            for c in sorted(r):
                if c in piv:
                    hit = c
                    break
            if hit is None:
                break
            prow = piv[hit]
            f = r[hit]
            for c, v in prow.items():
                nv = (r.get(c, 0) - f * v) % p
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        if r:
            lead = min(r)
            inv = pow(r[lead], p - 2, p)
            r = {c: (v * inv) % p for c, v in r.items()}
            piv[lead] = r
    return len(piv)


# ---------------------------------------------------------------------------
# words and the truncated algebra

def words_by_degree(degs, D):
    words = [[] for _ in range(D + 1)]
    words[0] = [()]
    for n in range(1, D + 1):
        out = []
        for g, dg in enumerate(degs):
            if dg <= n:
                for tail in words[n - dg]:
                    out.append((g,) + tail)
        words[n] = out
    return words


class TruncAlg:
    """Truncation of T(V)/<rels> to total degree <= D over Q."""

    def __init__(self, gens, rels, D):
        self.gens = gens
        self.degs = [d for _, d in gens]
        self.D = D
        self.words = words_by_degree(self.degs, D)
        self.windex = [ {w: i for i, w in enumerate(ws)} for ws in self.words ]
        rel_by_deg = {}
        for rel in rels:
            deg = None
            for w in rel:
                d = sum(self.degs[g] for g in w)
                if deg is None:
                    deg = d
                elif deg != d:
                    raise ValueError('inhomogeneous relation')
            rel_by_deg.setdefault(deg, []).append(rel)

        self.I = [Ech() for _ in range(D + 1)]
        self.Rrows = {}     # degree -> list of canonical complement rows
        for n in range(1, D + 1):
            ech = Ech()
            # two-sided ideal closure by generator shifts
            for g, dg in enumerate(self.degs):
                if dg >= n:
                    continue
                for row in self.I[n - dg].rows():
                    left = {}
                    right = {}
                    for col, val in row.items():
                        w = self.words[n - dg][col]
                        left[self.windex[n][(g,) + w]] = val
                        right[self.windex[n][w + (g,)]] = val
                    ech.add(left)
                    ech.add(right)
            decomp_piv = set(ech.piv)
            for rel in rel_by_deg.get(n, []):
                vec = {self.windex[n][w]: c for w, c in rel.items()}
                ech.add(vec)
            self.I[n] = ech
            self.Rrows[n] = [ech.piv[p] for p in sorted(ech.piv)
                             if p not in decomp_piv]

        self.normal = [[] for _ in range(D + 1)]
        self.normal_pos = [{} for _ in range(D + 1)]
        for n in range(D + 1):
            for c in range(len(self.words[n])):
                if c not in self.I[n].piv:
                    self.normal_pos[n][c] = len(self.normal[n])
                    self.normal[n].append(c)
        self._mult_cache = {}

    def dim(self, n):
        return len(self.normal[n])

    def dims(self):
        return [self.dim(n) for n in range(self.D + 1)]

    def nf_word(self, w):
        """normal form of a word as {normal position: Fraction} in its degree"""
        n = sum(self.degs[g] for g in w)
        vec = {self.windex[n][w]: Fraction(1)}
        red = self.I[n].reduce(vec)
        return {self.normal_pos[n][c]: v for c, v in red.items()}

    def mult(self, a, ia, b, ib):
        """product of normal word ia of degree a with normal word ib of degree b,
        as {normal position in degree a+b: Fraction}"""
        key = (a, ia, b, ib)
        if key not in self._mult_cache:
            wa = self.words[a][self.normal[a][ia]]
            wb = self.words[b][self.normal[b][ib]]
            self._mult_cache[key] = self.nf_word(wa + wb)
        return self._mult_cache[key]


# ---------------------------------------------------------------------------
# graded subspaces of the tensor algebra (dict degree -> Ech)

class GSub:
    def __init__(self, alg):
        self.alg = alg
        self.comp = {}

    def add(self, n, row):
        if n not in self.comp:
            self.comp[n] = Ech()
        return self.comp[n].add(row)

    def dims(self):
        return {n: e.dim() for n, e in sorted(self.comp.items()) if e.dim()}

    def degrees(self):
        return sorted(n for n, e in self.comp.items() if e.dim())

    def is_zero(self):
        return not self.degrees()

    def min_degree(self):
        ds = self.degrees()
        return ds[0] if ds else None

    def rows_at(self, n):
        if n in self.comp:
            return self.comp[n].rows()
        return []

    def equals(self, other):
        if self.degrees() != other.degrees():
            return False
        for n in self.degrees():
            if not self.comp[n].equals(other.comp[n]):
                return False
        return True


def gs_unit(alg):
    s = GSub(alg)
    s.add(0, {0: Fraction(1)})
    return s


def gs_generators(alg):
    s = GSub(alg)
    for g, dg in enumerate(alg.degs):
        s.add(dg, {alg.windex[dg][(g,)]: Fraction(1)})
    return s


def gs_relations(alg):
    s = GSub(alg)
    for n, rows in alg.Rrows.items():
        for r in rows:
            s.add(n, dict(r))
    return s


def concat_rows(alg, na, ra, nb, rb):
    n = na + nb
    out = {}
    for ca, va in ra.items():
        wa = alg.words[na][ca]
        for cb, vb in rb.items():
            wb = alg.words[nb][cb]
            col = alg.windex[n][wa + wb]
            nv = out.get(col, Fraction(0)) + va * vb
            if nv == 0:
                out.pop(col, None)
            else:
                out[col] = nv
    return out


def g_product(alg, A, B, D, targets=None):
    out = GSub(alg)
    for na in A.degrees():
        for nb in B.degrees():
            n = na + nb
            if n > D:
                continue
            if targets is not None and n not in targets:
                continue
            for ra in A.rows_at(na):
                for rb in B.rows_at(nb):
                    out.add(n, concat_rows(alg, na, ra, nb, rb))
    return out


def g_product_list(alg, factors, D, targets=None):
    if not factors:
        return gs_unit(alg)
    acc = factors[0]
    for k in range(1, len(factors)):
        rest_min = sum(f.min_degree() or 0 for f in factors[k + 1:])
        if targets is not None:
            tmax = max(targets) if targets else -1
            step_targets = set(range(0, max(tmax - rest_min, -1) + 1))
            if k == len(factors) - 1:
                step_targets = targets
        else:
            step_targets = None
        acc = g_product(alg, acc, factors[k], D, step_targets)
        if acc.is_zero():
            return acc
    return acc


def g_sum(alg, A, B):
    out = GSub(alg)
    for n in A.degrees():
        for r in A.rows_at(n):
            out.add(n, dict(r))
    for n in B.degrees():
        for r in B.rows_at(n):
            out.add(n, dict(r))
    return out


def _zassenhaus(dim, rows_a, rows_b):
    e = Ech()
    for r in rows_a:
        doubled = dict(r)
        for c, v in r.items():
            doubled[c + dim] = v
        e.add(doubled)
    for r in rows_b:
        e.add(dict(r))
    out = []
    for p in sorted(e.piv):
        if p >= dim:
            out.append({c - dim: v for c, v in e.piv[p].items()})
    return out


def g_intersect(alg, A, B):
    out = GSub(alg)
    for n in A.degrees():
        if n not in B.degrees():
            continue
        dim = len(alg.words[n])
        for r in _zassenhaus(dim, A.rows_at(n), B.rows_at(n)):
            out.add(n, r)
    return out


def g_intersect_list(alg, subs):
    if not subs:
        raise ValueError('empty intersection')
    acc = subs[0]
    for s in subs[1:]:
        acc = g_intersect(alg, acc, s)
        if acc.is_zero():
            break
    return acc


# ---------------------------------------------------------------------------
# compositions

def compositions(total, parts):
    """all tuples of `parts` nonnegative integers summing to `total`"""
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out
