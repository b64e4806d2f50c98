"""The vertex-operator mode engine.

``ModeEngine.action(v, n, w)`` computes the coefficient of z^(-n-1) of
Y(v, z) w exactly (mathematical indexing v_(n); n may be rational on
momentum cosets whose pairings are fractional).

Algorithm: a monomial of v is peeled front to back.

  * a fermionic or Heisenberg generator mode a_(-k) comes off through the
    normally-ordered iterate formula

        (a_(-k) b)_(n) w = sum_{m <= -1} C(-m-1, k-1) a_(m) (b_(n-m-k) w)
              + (-1)^{|a||b|} sum_{m >= 0} C(-m-1, k-1) b_(n-m-k) (a_(m) w),

    both sums finite: the annihilation depth of a on w is bounded, and
    b_(q) w = 0 once q exceeds the degree-conservation bound;

  * the remaining lattice atom e^mu acts by the product formula
    E-(mu,z) E+(mu,z) e_mu z^<mu,.> eps(mu,.), expanded coefficient-wise:
    E+ contracts against the bosonic slots of w (each slot (d,-a) either
    stays or is replaced by -<mu,d> z^-a), E- contributes the degree-P
    exponential polynomial S_P(mu).

Every single mode application is exactly finite, so no truncation
parameter exists here; weight cutoffs belong to enumeration and to
iterated constructions (see screening, omega).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

from .fock import Mono, State, add_boson_mode, apply_fermion_mode, momentum_mono
from .lattice import GridError, LatticeSpace, mom_add
from .scalars import ONE, Scalar, scalar, QQ

_F0 = QQ(0)
_F1 = QQ(1)
_HALF = QQ(1, 2)


def binomial(n: int, k: int) -> Fraction:
    """C(n, k) for integer n of any sign, k >= 0."""
    if k < 0:
        return _F0
    num = 1
    den = 1
    for i in range(k):
        num *= n - i
        den *= i + 1
    return QQ(num, den)


class CutoffError(RuntimeError):
    """An iterated construction exceeded its configured bound."""


class ModeEngine:
    """Exact mode calculus on one ambient lattice (all its sectors)."""

    def __init__(self, lattice: LatticeSpace):
        self.lattice = lattice
        self._cache = {}
        self._schur_cache = {}
        self._elem_cache = {}
        self._ndeg_cache = {}

    # -- public API ---------------------------------------------------------

    def action(self, v: State, n, w: State) -> State:
        """v_(n) w, bilinear in both arguments."""
        n = QQ(n)
        out = State()
        for vm, cv in v.items():
            for wm, cw in w.items():
                res = self._mono(vm, n, wm)
                if res:
                    c = cv * cw
                    for m2, c2 in res.items():
                        out.add_term(m2, c * c2)
        return out

    def element_action(self, key, element: State, n, w: State) -> State:
        """Like ``action`` with a per-element cache keyed by ``key``.

        Use for named elements applied over and over (generator images,
        Virasoro vectors); the full image of each target monomial is
        cached, so repeated window sweeps only merge dictionaries.
        """
        n = QQ(n)
        out = State()
        cache = self._elem_cache
        for wm, cw in w.items():
            k = (key, n, wm)
            res = cache.get(k)
            if res is None:
                res = State()
                for vm, cv in element.items():
                    r = self._mono(vm, n, wm)
                    if r:
                        for m2, c2 in r.items():
                            res.add_term(m2, cv * c2)
                cache[k] = res
            if res:
                for m2, c2 in res.items():
                    out.add_term(m2, cw * c2)
        return out

    def nth_product(self, v: State, n, w: State) -> State:
        """The n-th product of vacuum-sector elements (same as action)."""
        return self.action(v, QQ(n), w)

    def derivation(self, v: State) -> State:
        """The canonical derivation D (translation operator) on elements."""
        out = State()
        for m, c in v.items():
            for m2, c2 in self._derive_mono(m).items():
                out.add_term(m2, c * c2)
        return out

    def parity_of(self, v: State) -> int:
        """Z2 parity of a homogeneous element (fermion count + charge norm)."""
        parities = set()
        for m, _ in v.items():
            parities.add((m.fermion_count() + self.lattice.parity(m.momentum)) % 2)
        if len(parities) != 1:
            raise ValueError("element is not Z2-homogeneous")
        return parities.pop()

    def naive_degree(self, m: Mono) -> Fraction:
        cached = self._ndeg_cache.get(m)
        if cached is None:
            cached = m.degree() + self.lattice.norm(m.momentum) / 2
            self._ndeg_cache[m] = cached
        return cached

    # -- monomial recursion ---------------------------------------------------

    def _mono(self, vm: Mono, n: Fraction, wm: Mono) -> State:
        key = (vm, n, wm)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if vm.fermions:
            res = self._peel_fermion(vm, n, wm)
        elif vm.bosons:
            res = self._peel_boson(vm, n, wm)
        else:
            res = self._lattice_atom(vm.momentum, n, wm)
        self._cache[key] = res
        return res

    def _qmax(self, b: Mono, wm: Mono) -> Fraction:
        lam = mom_add(b.momentum, wm.momentum)
        return (self.naive_degree(b) + self.naive_degree(wm)
                - self.lattice.norm(lam) / 2 - 1)

    def _peel_fermion(self, vm: Mono, n: Fraction, wm: Mono) -> State:
        (r0, l0), rest = vm.fermions[0], vm.fermions[1:]
        b = Mono(vm.bosons, vm.momentum, rest)
        k = int(_HALF - r0)  # math mode of Phi(r0) is -k
        out = State()
        # creation side: a_(m), m <= -1, applied after b
        qmax = self._qmax(b, wm)
        m = -k
        while n - m - k <= qmax:
            coef = binomial(-m - 1, k - 1)
            if coef:
                inner = self._mono(b, n - m - k, wm)
                if inner:
                    r_phys = m + _HALF
                    for m2, c2 in apply_fermion_mode(inner, r_phys, l0).items():
                        out.add_term(m2, c2 * coef)
            m -= 1
        # annihilation side
        sign = -ONE if (len(rest) + self.lattice.parity(vm.momentum)) % 2 else ONE
        m_top = max((int(-r - _HALF) for r, _ in wm.fermions), default=-1)
        for m in range(0, m_top + 1):
            coef = binomial(-m - 1, k - 1)
            if not coef:
                continue
            hit = apply_fermion_mode(wm, m + _HALF, l0)
            for wm2, cw in hit.items():
                inner = self._mono(b, n - m - k, wm2)
                for m2, c2 in inner.items():
                    out.add_term(m2, c2 * cw * (sign * scalar(coef)))
        return out

    def _peel_boson(self, vm: Mono, n: Fraction, wm: Mono) -> State:
        (d0, neg), rest = vm.bosons[0], vm.bosons[1:]
        b = Mono(rest, vm.momentum, ())
        k = -neg
        out = State()
        # creation side
        qmax = self._qmax(b, wm)
        m = -k
        while n - m - k <= qmax:
            coef = binomial(-m - 1, k - 1)
            if coef:
                inner = self._mono(b, n - m - k, wm)
                for m2, c2 in inner.items():
                    out.add_term(add_boson_mode(m2, d0, m), c2 * scalar(coef))
            m -= 1
        # annihilation side (Heisenberg is even: no Koszul sign)
        m_top = max((-mm for _, mm in wm.bosons), default=0)
        for m in range(0, m_top + 1):
            coef = binomial(-m - 1, k - 1)
            if not coef:
                continue
            for wm2, cw in self._heis_annihilate(wm, d0, m):
                inner = self._mono(b, n - m - k, wm2)
                for m2, c2 in inner.items():
                    out.add_term(m2, c2 * (cw * coef))
        return out

    def _heis_annihilate(self, wm: Mono, d: int, m: int):
        """h_d(m) wm for m >= 0 as [(monomial, Fraction coeff)]."""
        if m == 0:
            ev = self.lattice.pair(self.lattice.basis_vector(d), wm.momentum)
            return [(wm, ev)] if ev else []
        out = []
        bs = wm.bosons
        for i, (d2, mm) in enumerate(bs):
            if mm == -m:
                g = self.lattice.gram[d][d2]
                if g:
                    out.append((Mono(bs[:i] + bs[i + 1:], wm.momentum, wm.fermions),
                                m * g))
        return out

    def _schur(self, mu: tuple, p: int):
        """Degree-p part of exp(sum_k mu(-k) z^k / k) as [(bosons, coeff)]."""
        key = (mu, p)
        hit = self._schur_cache.get(key)
        if hit is not None:
            return hit
        if p == 0:
            res = {(): _F1}
        else:
            acc = {}
            for k in range(1, p + 1):
                for bos, c in self._schur(mu, p - k):
                    for d, cd in enumerate(mu):
                        if cd:
                            m2 = add_boson_mode(Mono(bos, (), ()), d, -k)
                            key2 = m2.bosons
                            acc[key2] = acc.get(key2, _F0) + c * cd
            res = {b: c / p for b, c in acc.items() if c}
        res = list(res.items())
        self._schur_cache[key] = res
        return res

    def _lattice_atom(self, mu: tuple, n: Fraction, wm: Mono) -> State:
        lat = self.lattice
        lam = wm.momentum
        h = lat.pair(mu, lam)
        base = -n - 1 - h
        if base.denominator != 1:
            return State()  # off-grid mode: coefficient is zero
        out = State()
        # Koszul sign for the field passing the fermionic slots of w
        sign0 = _F1
        if wm.fermions and any(c != 0 for c in mu):
            if lat.parity(mu) and len(wm.fermions) % 2:
                sign0 = -_F1
        eps = lat.epsilon(mu, lam)
        new_mom = mom_add(lam, mu)
        bs = wm.bosons
        nb = len(bs)
        contr = [-lat.pair(mu, lat.basis_vector(d)) for d, _ in bs]
        for mask in range(1 << nb):
            factor = sign0
            shift = 0
            kept = []
            for i in range(nb):
                if mask & (1 << i):
                    if not contr[i]:
                        factor = _F0
                        break
                    factor *= contr[i]
                    shift += -bs[i][1]
                else:
                    kept.append(bs[i])
            if not factor:
                continue
            p = base + shift
            if p < 0:
                continue
            for sb, sc in self._schur(mu, int(p)):
                merged = tuple(sorted(tuple(kept) + sb))
                out.add_term(Mono(merged, new_mom, wm.fermions),
                             eps * scalar(factor * sc))
        return out

    # -- derivation -------------------------------------------------------

    def _derive_mono(self, m: Mono) -> State:
        out = State()
        # momentum part: D e^lam = lam(-1) e^lam
        for d, cd in enumerate(m.momentum):
            if cd:
                out.add_term(add_boson_mode(m, d, -1), scalar(cd))
        # boson slots
        for i, (d, mm) in enumerate(m.bosons):
            lifted = list(m.bosons)
            lifted[i] = (d, mm - 1)
            out.add_term(Mono(tuple(sorted(lifted)), m.momentum, m.fermions),
                         scalar(-mm))
        # fermion slots: [D, Phi(r)] = -(r - 1/2) Phi(r-1)
        for i, (r, l) in enumerate(m.fermions):
            slot = (r - 1, l)
            if slot in m.fermions:
                continue
            rest = m.fermions[:i] + m.fermions[i + 1:]
            pos = 0
            while pos < len(rest) and rest[pos] < slot:
                pos += 1
            sign = 1 if (pos + i) % 2 == 0 else -1
            coeff = -(r - _HALF) * sign
            out.add_term(Mono(m.bosons, m.momentum,
                              rest[:pos] + (slot,) + rest[pos:]),
                         scalar(coeff))
        return out


class VAElement:
    """A vacuum-sector element together with its engine."""

    __slots__ = ("state", "engine")

    def __init__(self, state: State, engine: ModeEngine):
        self.state = state
        self.engine = engine

    def mode(self, n, w: State) -> State:
        return self.engine.action(self.state, QQ(n), w)

    def nth(self, n, other: "VAElement") -> "VAElement":
        return VAElement(self.engine.action(self.state, QQ(n), other.state),
                         self.engine)

    def derivative(self) -> "VAElement":
        return VAElement(self.engine.derivation(self.state), self.engine)

    def parity(self) -> int:
        return self.engine.parity_of(self.state)

    def __add__(self, other):
        return VAElement(self.state + other.state, self.engine)

    def __sub__(self, other):
        return VAElement(self.state - other.state, self.engine)

    def scaled(self, c):
        return VAElement(self.state.scaled(c), self.engine)


class ModeOp:
    """A single extracted mode v_(n) as a reusable operator on states."""

    __slots__ = ("element", "n", "engine", "label", "_parity")

    def __init__(self, element: State, n, engine: ModeEngine, label="",
                 parity: Optional[int] = None):
        self.element = element
        self.n = QQ(n)
        self.engine = engine
        self.label = label or f"mode({self.n})"
        self._parity = parity

    def __call__(self, w: State) -> State:
        return self.engine.action(self.element, self.n, w)

    @property
    def parity(self) -> int:
        if self._parity is None:
            self._parity = self.engine.parity_of(self.element)
        return self._parity

    def __repr__(self):
        return f"ModeOp({self.label})"


def super_commutator(a, b, w: State, parity_a: int = None,
                     parity_b: int = None) -> State:
    """[a, b]_{+/-} w with the sign fixed by parities (odd-odd gives +)."""
    pa = a.parity if parity_a is None else parity_a
    pb = b.parity if parity_b is None else parity_b
    ab = a(b(w))
    ba = b(a(w))
    return ab + ba if (pa and pb) else ab - ba


def commutator_defect(engine: ModeEngine, a: ModeOp, b: ModeOp, w: State) -> State:
    """Defect of the Borcherds commutator formula on w:

        [a_(m), b_(n)]_{super} w - sum_{j>=0} C(m, j) (a_(j) b)_(m+n-j) w
    """
    lhs = super_commutator(a, b, w)
    m, n = a.n, b.n
    if m.denominator != 1:
        raise GridError("commutator formula needs an integer first mode here")
    rhs = State()
    bound = engine.naive_degree_bound(a.element, b.element)
    j = 0
    while j <= bound:
        prod = engine.action(a.element, j, b.element)
        if prod:
            coef = binomial(m.numerator, j)
            if coef:
                term = engine.action(prod, m + n - j, w)
                for mm, cc in term.items():
                    rhs.add_term(mm, cc * scalar(coef))
        j += 1
    return lhs - rhs


def _naive_degree_bound(self, a: State, b: State) -> Fraction:
    """Largest q for which a_(q) b can be nonzero (degree conservation)."""
    top = QQ(-1)
    for am in a.terms:
        for bm in b.terms:
            q = self._qmax(am, bm)
            if q > top:
                top = q
    return top


ModeEngine.naive_degree_bound = _naive_degree_bound
