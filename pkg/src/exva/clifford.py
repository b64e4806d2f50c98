"""Charged fermion pair Phi_1, Phi_2, its bosonization, and the kernel
subalgebras cut out by the two fermionic screenings.

Everything is parametrized by an ambient lattice and the index of its
norm-1 direction, so the same operators act both on the standalone
rank-1 ambient and on the rank-3 realization ambient (where the c, d
directions ride along untouched).

Conventions (physics-style half-integer labels):
    Phi_i(r)   has mathematical mode index r - 1/2;
    Psi+-      = (Phi_1 +- i Phi_2)/sqrt2  <->  e^{+-a} under bosonization;
    G          = Phi_2(1/2)        cuts out the non-conformal subalgebra;
    Psi^-(1/2) cuts out the symplectic-fermion subalgebra;
    Q          = (e^{2a})_(0).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .fock import (Mono, Sector, State, apply_fermion_mode, fermion_fillings,
                   momentum_mono, vacuum_mono)
from .lattice import LatticeSpace, fermion_lattice, mom_scale
from .modes import ModeEngine
from .scalars import I_UNIT, INV_SQRT2, INV_SQRT_M2, ONE, SQRT2, Scalar, scalar, QQ

_H = QQ(1, 2)


class CliffordSystem:
    """Fermion pair + bosonization on one norm-1 lattice direction."""

    def __init__(self, lattice: LatticeSpace = None, alpha_dir: int = 0,
                 engine: ModeEngine = None):
        self.lattice = lattice if lattice is not None else fermion_lattice()
        self.engine = engine if engine is not None else ModeEngine(self.lattice)
        self.dir = alpha_dir
        self.alpha = self.lattice.basis_vector(alpha_dir)
        if self.lattice.norm(self.alpha) != 1:
            raise ValueError("bosonization direction must have norm 1")

    # -- atoms ---------------------------------------------------------------

    def vac(self) -> State:
        return State.of(vacuum_mono(self.lattice.rank))

    def e(self, m) -> State:
        """The momentum state e^{m a}."""
        return State.of(momentum_mono(mom_scale(QQ(m), self.alpha)))

    def phi_element_f(self, label: int) -> State:
        """Phi_label as a fermionic-picture element (weight-1/2 slot)."""
        return State.of(Mono((), self.lattice.zero(), ((-_H, label),)))

    def phi_element_b(self, label: int) -> State:
        if label == 1:
            return (self.e(1) + self.e(-1)).scaled(INV_SQRT2)
        if label == 2:
            return (self.e(1) - self.e(-1)).scaled(INV_SQRT_M2)
        raise ValueError("fermion label must be 1 or 2")

    # -- single fermion modes -------------------------------------------------

    def phi_f(self, label: int, r, w: State) -> State:
        """Phi_label(r) in the fermionic picture (untwisted grid)."""
        return apply_fermion_mode(w, QQ(r), label)

    def psi_b(self, sign: int, r, w: State) -> State:
        """Psi^{sign}(r) bosonized: the mode (e^{sign a})_(r - 1/2)."""
        return self.engine.action(self.e(sign), QQ(r) - _H, w)

    def psi_f(self, sign: int, r, w: State) -> State:
        p1 = self.phi_f(1, r, w)
        p2 = self.phi_f(2, r, w)
        if sign > 0:
            return (p1 + p2.scaled(I_UNIT)).scaled(INV_SQRT2)
        return (p1 - p2.scaled(I_UNIT)).scaled(INV_SQRT2)

    def phi_b(self, label: int, r, w: State) -> State:
        """Phi_label(r) bosonized; also serves twisted cosets (integer r)."""
        plus = self.psi_b(1, r, w)
        minus = self.psi_b(-1, r, w)
        if label == 1:
            return (plus + minus).scaled(INV_SQRT2)
        return (plus - minus).scaled(INV_SQRT_M2)

    def phi(self, label: int, r, w: State, picture: str) -> State:
        if picture == "fermionic":
            return self.phi_f(label, r, w)
        if picture == "bosonic":
            return self.phi_b(label, r, w)
        raise ValueError(f"unknown picture {picture!r}")

    def psi(self, sign: int, r, w: State, picture: str) -> State:
        if picture == "fermionic":
            return self.psi_f(sign, r, w)
        return self.psi_b(sign, r, w)

    # -- the dressed weight-one pair -----------------------------------------

    def phi_plus(self, n, w: State, picture: str) -> State:
        """phi^+(n) = -(2n+1) Psi^+(n+1/2) + Psi^-(n+1/2)."""
        n = QQ(n)
        return (self.psi(1, n + _H, w, picture).scaled(-(2 * n + 1))
                + self.psi(-1, n + _H, w, picture))

    def phi_plus_phi_form(self, n, w: State, picture: str) -> State:
        """The equivalent display -sqrt2 (n Phi_1(n+1/2) + i(n+1) Phi_2(n+1/2))."""
        n = QQ(n)
        t1 = self.phi(1, n + _H, w, picture).scaled(n)
        t2 = self.phi(2, n + _H, w, picture).scaled(I_UNIT * scalar(n + 1))
        return (t1 + t2).scaled(-SQRT2)

    def phi_minus(self, n, w: State, picture: str) -> State:
        """phi^-(n) = -(n/sqrt2)(Phi_1(n-1/2) + i Phi_2(n-1/2))."""
        n = QQ(n)
        t = (self.phi(1, n - _H, w, picture)
             + self.phi(2, n - _H, w, picture).scaled(I_UNIT))
        return t.scaled(-scalar(n) * INV_SQRT2)

    def a_plus(self, n, w: State, picture: str = "bosonic") -> State:
        """Symplectic-fermion mode a^+(n) = Psi^-(n+1/2)."""
        return self.psi(-1, QQ(n) + _H, w, picture)

    def a_minus(self, n, w: State, picture: str = "bosonic") -> State:
        """a^-(n) = -n Psi^+(n-1/2)."""
        n = QQ(n)
        return self.psi(1, n - _H, w, picture).scaled(-n)

    # -- screenings and the commuting derivation ------------------------------

    def G(self, w: State, picture: str) -> State:
        return self.phi(2, _H, w, picture)

    def sf_screen(self, w: State, picture: str) -> State:
        return self.psi(-1, _H, w, picture)

    def e2a_element(self, picture: str) -> State:
        """The commutative weight-one current e^{2a} (= D Psi^+ Psi^+)."""
        if picture == "bosonic":
            return self.e(2)
        f = self.phi_f
        v = self.vac()
        half = QQ(1, 2)
        t11 = f(1, QQ(-3, 2), f(1, -half, v))
        t22 = f(2, QQ(-3, 2), f(2, -half, v))
        t21 = f(2, QQ(-3, 2), f(1, -half, v))
        t12 = f(1, QQ(-3, 2), f(2, -half, v))
        return (t11 - t22).scaled(QQ(1, 2)) + \
               (t21 + t12).scaled(I_UNIT * scalar(QQ(1, 2)))

    def Q(self, w: State, picture: str = "bosonic") -> State:
        return self.engine.action(self.e2a_element(picture), 0, w)

    # -- Virasoro elements -----------------------------------------------------

    def omega_sf_element(self, picture: str) -> State:
        if picture == "bosonic":
            d = self.dir
            quad = State.of(Mono(((d, -1), (d, -1)), self.lattice.zero(), ()))
            lin = State.of(Mono(((d, -2),), self.lattice.zero(), ()))
            return (quad + lin).scaled(QQ(1, 2))
        f = self.phi_f
        v = self.vac()
        h, h3 = -_H, QQ(-3, 2)
        sym = f(1, h3, f(1, h, v)) + f(2, h3, f(2, h, v))
        mix = f(2, h3, f(1, h, v)) - f(1, h3, f(2, h, v))
        return sym.scaled(QQ(1, 2)) + mix.scaled(I_UNIT * scalar(QQ(1, 2)))

    def omega_element(self, picture: str) -> State:
        """The non-translation-compatible Virasoro vector (c = -2)."""
        return self.omega_sf_element(picture) + self.e2a_element(picture)

    # -- boson-fermion bridge ---------------------------------------------------

    def to_boson(self, w: State) -> State:
        """Replace each fermionic slot by its bosonized mode action."""
        out = State()
        for m, c in w.items():
            base = State.of(Mono(m.bosons, m.momentum, ()))
            for r, l in reversed(m.fermions):
                base = self.phi_b(l, r, base)
            for m2, c2 in base.items():
                out.add_term(m2, c * c2)
        return out

    # -- basis menus -------------------------------------------------------------

    @staticmethod
    def full_menu(label: int, r: Fraction) -> bool:
        return True

    @staticmethod
    def fbar_menu(label: int, r: Fraction) -> bool:
        """Slots of Ker G: Phi_1 from -1/2 down, Phi_2 from -3/2 down."""
        return label == 1 or r <= QQ(-3, 2)

    def sf_basis_states(self, max_ndeg: Fraction, picture: str = "bosonic"):
        """PBW basis of the symplectic-fermion subalgebra up to naive degree.

        Products a^-(-m_1)...a^-(-m_r) a^+(-n_1)...a^+(-n_s) vac with
        strictly decreasing positive labels; a^{+-}(-n) adds naive degree n.
        """
        out = []
        for fill in _two_color_distinct(QQ(max_ndeg)):
            minus, plus = fill
            st = self.vac()
            for n in sorted(plus):
                st = self.a_plus(-n, st, picture)
            for n in sorted(minus):
                st = self.a_minus(-n, st, picture)
            out.append(((tuple(sorted(minus)), tuple(sorted(plus))), st))
        return out


def _two_color_distinct(budget: Fraction):
    """Pairs of strictly-decreasing positive-integer tuples with total <= budget."""
    if budget < 0:
        return []
    top = int(budget)

    def distinct_sets(limit):
        sets = [()]
        for n in range(1, limit + 1):
            sets = sets + [s + (n,) for s in sets if sum(s) + n <= limit]
        return sets

    out = []
    for minus in distinct_sets(top):
        rem = top - sum(minus)
        for plus in distinct_sets(rem):
            out.append((minus, plus))
    return out


def fermionic_monomials(system: CliffordSystem, max_ndeg,
                        menu: Callable[[int, Fraction], bool],
                        momentum=None):
    """All fermionic-picture monomials with slot menu and naive degree <= max."""
    momentum = momentum if momentum is not None else system.lattice.zero()
    out = []
    d = QQ(0)
    while d <= QQ(max_ndeg):
        for f in fermion_fillings(d, menu):
            out.append(Mono((), tuple(momentum), f))
        d += _H
    return out
