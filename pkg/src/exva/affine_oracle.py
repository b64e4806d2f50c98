"""Brute-force affine sl(2) module oracle (independent of the VOA engine).

Graded dimensions of the irreducible level-k module L_k(n w1) are computed
from first principles: the generalized Verma module induced from the
(n+1)-dimensional top is realized on explicit PBW monomials, the
contravariant (Shapovalov) form is evaluated by commutator pushing, and
the irreducible quotient's dimensions are Gram-matrix ranks.  Everything
is exact over Q.

Conventions: [e,f] = h, [h,e] = 2e, [h,f] = -2f; invariant form
(e,f) = 1, (h,h) = 2; affine bracket [x(m), y(n)] = [x,y](m+n)
+ m (x,y) k delta_{m+n,0}.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

E, H, F = 0, 1, 2
_CHARGE = {E: 2, H: 0, F: -2}
_BRACKET = {  # [x, y] = sum coeff * gen
    (E, F): {H: Fraction(1)},
    (F, E): {H: Fraction(-1)},
    (H, E): {E: Fraction(2)},
    (E, H): {E: Fraction(-2)},
    (H, F): {F: Fraction(-2)},
    (F, H): {F: Fraction(2)},
}
_FORM = {(E, F): Fraction(1), (F, E): Fraction(1), (H, H): Fraction(2)}
_OMEGA = {E: F, H: H, F: E}  # Chevalley antiautomorphism


class AffineSl2Oracle:
    """Exact graded data of L_k(n w1) for sl(2)-hat at rational level k."""

    def __init__(self, level=Fraction(-3, 2)):
        self.k = Fraction(level)

    # -- module vectors: dict[(mono, s)] -> Fraction -------------------------
    # mono = tuple of (j, gen) sorted, meaning ... gen(-j) ... applied to v_s.

    def top_dim(self, n: int) -> int:
        return n + 1

    def top_weight(self, n: int) -> Fraction:
        """Sugawara conformal weight of the top: n(n+2)/(4(k+2))."""
        return Fraction(n * (n + 2), 1) / (4 * (self.k + 2))

    def _top_e(self, n, s):
        return {} if s == 0 else {s - 1: Fraction(s * (n - s + 1))}

    def _top_f(self, n, s):
        return {} if s == n else {s + 1: Fraction(1)}

    def _top_h(self, n, s):
        return {s: Fraction(n - 2 * s)}

    def _top_apply(self, gen, n, s):
        if gen == E:
            return self._top_e(n, s)
        if gen == F:
            return self._top_f(n, s)
        return self._top_h(n, s)

    def normal_order(self, mono, s, n, coeff, out):
        """Accumulate coeff * gen1(-j1)...v_s in the sorted PBW basis."""
        if all(mono[i] <= mono[i + 1] for i in range(len(mono) - 1)):
            key = (tuple(mono), s)
            out[key] = out.get(key, Fraction(0)) + coeff
            return
        # bubble one inversion and correct by the bracket
        for i in range(len(mono) - 1):
            if mono[i] > mono[i + 1]:
                a, b = mono[i], mono[i + 1]
                swapped = mono[:i] + (b, a) + mono[i + 2:]
                self.normal_order(swapped, s, n, coeff, out)
                (ja, ga), (jb, gb) = a, b
                br = _BRACKET.get((ga, gb), {})
                for g, c in br.items():
                    corr = mono[:i] + ((ja + jb, g),) + mono[i + 2:]
                    self.normal_order(corr, s, n, coeff * c, out)
                return

    def apply_mode(self, gen, m: int, vec, n):
        """gen(m) acting on a vector of the induced module."""
        out = {}
        for (mono, s), coeff in vec.items():
            if m < 0:
                self.normal_order(((-m, gen),) + mono, s, n, coeff, out)
            else:
                self._raise_through(gen, m, tuple(mono), 0, s, n, coeff, out)
        return {k: v for k, v in out.items() if v}

    def _raise_through(self, gen, m, mono, pos, s, n, coeff, out):
        """Push gen(m), m >= 0, rightward through mono[pos:] onto v_s."""
        if pos == len(mono):
            if m > 0:
                return
            for s2, c2 in self._top_apply(gen, n, s).items():
                self.normal_order(tuple(mono), s2, n, coeff * c2, out)
            return
        j, g2 = mono[pos]
        # commute past: gen(m) x(-j) = x(-j) gen(m) + [gen, x](m-j) + central
        self._raise_through(gen, m, mono, pos + 1, s, n, coeff, out)
        br = _BRACKET.get((gen, g2), {})
        rest = mono[:pos] + mono[pos + 1:]
        for g, c in br.items():
            mm = m - j
            if mm < 0:
                self._raise_through_after_insert(g, -mm, rest, pos, s, n,
                                                 coeff * c, out)
            else:
                self._raise_through(g, mm, rest, pos, s, n, coeff * c, out)
        if m == j:
            cen = _FORM.get((gen, g2))
            if cen:
                self.normal_order(tuple(rest), s, n,
                                  coeff * m * cen * self.k, out)

    def _raise_through_after_insert(self, g, j, mono, pos, s, n, coeff, out):
        # a lowering mode g(-j) produced in the middle: normal order the
        # whole word (prefix kept intact).
        word = mono[:pos] + ((j, g),) + mono[pos:]
        self.normal_order(word, s, n, coeff, out)

    # -- Shapovalov form ------------------------------------------------------

    @lru_cache(maxsize=None)
    def _top_norms(self, n: int):
        norms = [Fraction(1)]
        for s in range(1, n + 1):
            norms.append(norms[-1] * s * (n - s + 1))
        return norms

    def pairing(self, left_key, vec, n):
        """< X v_s , vec > = coefficient extraction after applying omega(X)."""
        mono, s = left_key
        cur = vec
        for j, g in reversed(mono):
            cur = self.apply_mode(_OMEGA[g], j, cur, n)
            if not cur:
                return Fraction(0)
        norms = self._top_norms(n)
        return cur.get(((), s), Fraction(0)) * norms[s]

    # -- graded blocks --------------------------------------------------------

    @lru_cache(maxsize=None)
    def block_basis(self, n: int, depth: int, hweight: int):
        """PBW monomial basis of the induced module at given depth/h-weight."""
        monos = self._monomials(depth)
        out = []
        for mono in monos:
            ch = sum(_CHARGE[g] for _, g in mono)
            for s in range(n + 1):
                if ch + n - 2 * s == hweight:
                    out.append((mono, s))
        return tuple(out)

    @lru_cache(maxsize=None)
    def _monomials(self, depth: int):
        if depth == 0:
            return ((),)
        slots = []
        for j in range(1, depth + 1):
            for g in (E, H, F):
                slots.append((j, g))
        out = set()

        def rec(idx, prefix, rem):
            if rem == 0:
                out.add(tuple(sorted(prefix)))
                return
            for i in range(idx, len(slots)):
                j, g = slots[i]
                if j <= rem:
                    prefix.append((j, g))
                    rec(i, prefix, rem - j)  # repeats allowed
                    prefix.pop()

        rec(0, [], depth)
        return tuple(sorted(out))

    @lru_cache(maxsize=None)
    def gram(self, n: int, depth: int, hweight: int):
        basis = self.block_basis(n, depth, hweight)
        g = []
        for bi in basis:
            row = []
            for bj in basis:
                row.append(self.pairing(bi, {bj: Fraction(1)}, n))
            g.append(tuple(row))
        return tuple(g)

    def irreducible_dim(self, n: int, depth: int, hweight: int) -> int:
        g = self.gram(n, depth, hweight)
        return _frac_rank([list(r) for r in g])

    def graded_dims(self, n: int, max_depth: int):
        """dict (depth, h-weight) -> dim of L_k(n w1)."""
        out = {}
        for d in range(max_depth + 1):
            weights = sorted({sum(_CHARGE[g] for _, g in mono) + n - 2 * s
                              for mono in self._monomials(d)
                              for s in range(n + 1)})
            for w in weights:
                dim = self.irreducible_dim(n, d, w)
                if dim:
                    out[(d, w)] = dim
        return out

    # -- parafermion (Heisenberg commutant) dimensions ------------------------

    @lru_cache(maxsize=None)
    def radical_coords(self, n: int, depth: int, hweight: int):
        g = self.gram(n, depth, hweight)
        return tuple(tuple(v) for v in _frac_nullspace([list(r) for r in g]))

    def parafermion_dim(self, n: int, depth: int) -> int:
        """dim of {v in L : h(j) v = 0 for all j >= 0} at charge 0, depth."""
        basis = self.block_basis(n, depth, 0)
        if not basis:
            return 0
        rows = []
        for j in range(1, depth + 1):
            tgt = self.block_basis(n, depth - j, 0)
            tidx = {b: i for i, b in enumerate(tgt)}
            gram_t = self.gram(n, depth - j, 0)
            for gr in gram_t:
                row = []
                for b in basis:
                    img = self.apply_mode(H, j, {b: Fraction(1)}, n)
                    acc = Fraction(0)
                    for key, c in img.items():
                        ti = tidx.get(key)
                        if ti is not None:
                            acc += gr[ti] * c
                    row.append(acc)
                rows.append(row)
        if rows:
            kern = len(_frac_nullspace(rows)) if rows else len(basis)
        else:
            kern = len(basis)
        rad = len(self.radical_coords(n, depth, 0))
        return kern - rad


# -- tiny exact linear algebra over Fraction (kept separate on purpose) ------


def _frac_rref(rows):
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def _frac_rank(rows) -> int:
    return len(_frac_rref(rows)[1])


def _frac_nullspace(rows):
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = _frac_rref(rows)
    pivset = set(pivots)
    out = []
    for fc in range(ncols):
        if fc in pivset:
            continue
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        out.append(vec)
    return out
