"""Rational lattices, Gram pairings, parity, and vertex-operator cocycles.

A momentum is a tuple of Fractions: coordinates in the basis of an ambient
``LatticeSpace``.  Module sectors are momentum cosets of the same ambient
space; twisted sectors differ only in their coset offset, never in the
lattice data itself.

The two-cocycle is bimultiplicative, of the separable form

    epsilon(lam, mu) = (-1)^(f(lam) * g(mu))

for a pair of Q-linear functionals ``f, g`` fixed per ambient space.  This
is the classic triangular construction (+1 on ordered basis pairs, the
commutator identity forcing the rest) applied to an ordered *integral basis
of the operator-charge lattice*; on rank-1 ambients both functionals vanish
and the cocycle is trivial.  Values land in {+1, -1, +i, -i}, inside the
scalar field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .scalars import Scalar, i_power, scalar, QQ

Momentum = tuple  # tuple[Fraction, ...]


def mom(*coords) -> Momentum:
    return tuple(QQ(c) for c in coords)


def mom_add(a: Momentum, b: Momentum) -> Momentum:
    return tuple(x + y for x, y in zip(a, b))


def mom_sub(a: Momentum, b: Momentum) -> Momentum:
    return tuple(x - y for x, y in zip(a, b))


def mom_neg(a: Momentum) -> Momentum:
    return tuple(-x for x in a)


def mom_scale(q, a: Momentum) -> Momentum:
    q = QQ(q)
    return tuple(q * x for x in a)


def is_zero_mom(a: Momentum) -> bool:
    return all(x == 0 for x in a)


class GridError(ValueError):
    """A momentum or mode index fell off the admissible rational grid."""


@dataclass(frozen=True)
class LatticeSpace:
    """Ambient rational lattice with a symmetric Gram matrix.

    ``cocycle_f`` / ``cocycle_g`` are coordinate vectors of the two linear
    functionals defining the vertex-operator cocycle (zero means trivial).
    ``momentum_denominator``: if set, every registered momentum must have
    coordinate denominators dividing it.
    """

    name: str
    basis_names: tuple
    gram: tuple  # tuple of tuples of Fraction, symmetric
    cocycle_f: tuple = None
    cocycle_g: tuple = None
    momentum_denominator: Optional[int] = None

    def __post_init__(self):
        n = len(self.basis_names)
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise ValueError("gram matrix shape does not match basis")
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("gram matrix must be symmetric")
        if self.cocycle_f is None:
            object.__setattr__(self, "cocycle_f", tuple(QQ(0) for _ in range(n)))
        if self.cocycle_g is None:
            object.__setattr__(self, "cocycle_g", tuple(QQ(0) for _ in range(n)))

    @property
    def rank(self) -> int:
        return len(self.basis_names)

    def zero(self) -> Momentum:
        return tuple(QQ(0) for _ in range(self.rank))

    def basis_vector(self, i: int) -> Momentum:
        return tuple(QQ(1 if j == i else 0) for j in range(self.rank))

    def momentum(self, *coords) -> Momentum:
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates")
        m = mom(*coords)
        self.check_momentum(m)
        return m

    def check_momentum(self, m: Momentum):
        if len(m) != self.rank:
            raise GridError(f"momentum {m} has wrong rank for {self.name}")
        if self.momentum_denominator is not None:
            for c in m:
                if (c * self.momentum_denominator).denominator != 1:
                    raise GridError(
                        f"momentum {m} off the 1/{self.momentum_denominator} grid")

    # -- bilinear form -----------------------------------------------------

    def pair(self, a: Momentum, b: Momentum) -> Fraction:
        total = QQ(0)
        for i, x in enumerate(a):
            if x == 0:
                continue
            row = self.gram[i]
            for j, y in enumerate(b):
                if y:
                    total += x * y * row[j]
        return total

    def norm(self, a: Momentum) -> Fraction:
        return self.pair(a, a)

    def parity(self, a: Momentum) -> int:
        """0 for even, 1 for odd; defined only for integral norm."""
        n = self.norm(a)
        if n.denominator != 1:
            raise GridError(
                f"momentum {a} has non-integral norm {n}; parity is sector "
                "data, not a Z2 grade")
        return n.numerator % 2

    def try_parity(self, a: Momentum) -> Optional[int]:
        n = self.norm(a)
        if n.denominator != 1:
            return None
        return n.numerator % 2

    # -- cocycle -----------------------------------------------------------

    def _f(self, a: Momentum) -> Fraction:
        return sum((c * x for c, x in zip(self.cocycle_f, a)), QQ(0))

    def _g(self, a: Momentum) -> Fraction:
        return sum((c * x for c, x in zip(self.cocycle_g, a)), QQ(0))

    def epsilon(self, a: Momentum, b: Momentum) -> Scalar:
        """Cocycle value epsilon(a, b) = (-1)^(f(a) g(b)) in {1,-1,i,-i}."""
        from .scalars import ONE
        if not any(self.cocycle_f):
            return ONE
        fa = self._f(a)
        if not fa:
            return ONE
        e = 2 * fa * self._g(b)
        if e.denominator != 1:
            raise GridError(
                f"cocycle undefined on pair {a}, {b}: exponent {e}/2")
        return i_power(e.numerator)

    def commutation_factor(self, a: Momentum, b: Momentum) -> Scalar:
        """epsilon(a,b)/epsilon(b,a); for integral data this must equal
        (-1)^(<a,b> + <a,a><b,b>)."""
        return self.epsilon(a, b) / self.epsilon(b, a)


# -- ambient presets --------------------------------------------------------

F2 = QQ(1, 2)


def fermion_lattice() -> LatticeSpace:
    """Rank-1 odd lattice Z a with <a,a> = 1 (charged-fermion bosonization)."""
    return LatticeSpace(
        name="F",
        basis_names=("a",),
        gram=((QQ(1),),),
    )


def pi_half_lattice(cc=0, cd=2, dd=0) -> LatticeSpace:
    """The {c, d} half-lattice plane; Gram values fixed by calibration."""
    cc, cd, dd = QQ(cc), QQ(cd), QQ(dd)
    return LatticeSpace(
        name="Pi-half",
        basis_names=("c", "d"),
        gram=((cc, cd), (cd, dd)),
    )


def osp_ambient(cc=0, cd=2, dd=0) -> LatticeSpace:
    """Rank-3 ambient (a, c, d) for the affine-superalgebra realization.

    Cocycle functionals come from the triangular rule on the ordered
    integral operator-charge basis (c, a + c/2, a/2 + nu):
        f(lam) = 2 d_lam,   g(mu) = c_mu - a_mu/2 - d_mu/4.
    """
    cc, cd, dd = QQ(cc), QQ(cd), QQ(dd)
    one = QQ(1)
    zero = QQ(0)
    return LatticeSpace(
        name="osp",
        basis_names=("a", "c", "d"),
        gram=((one, zero, zero), (zero, cc, cd), (zero, cd, dd)),
        cocycle_f=(zero, zero, QQ(2)),
        cocycle_g=(QQ(-1, 2), one, QQ(-1, 4)),
    )


def doublet_lattice(p: int) -> LatticeSpace:
    """Rank-1 lattice Z g/2 with <g,g> = 2p (doublet-algebra ambient)."""
    if p < 2:
        raise ValueError("p must be >= 2")
    return LatticeSpace(
        name=f"doublet-{p}",
        basis_names=("g",),
        gram=((QQ(2 * p),),),
    )


def vp_ambient(p: int) -> LatticeSpace:
    """Rank-3 ambient (g, c, d) for the level -2+1/p sl(2) realization.

    Same triangular cocycle as ``osp_ambient`` transported through the
    p = 2 dictionary g = 2a: f(lam) = 2 d_lam, g(mu) = c_mu - g_mu - d_mu/4.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    one = QQ(1)
    zero = QQ(0)
    two = QQ(2)
    return LatticeSpace(
        name=f"vp-{p}",
        basis_names=("g", "c", "d"),
        gram=((QQ(2 * p), zero, zero), (zero, zero, two), (zero, two, zero)),
        cocycle_f=(zero, zero, two),
        cocycle_g=(QQ(-1), one, QQ(-1, 4)),
    )


def preset(name: str, p: int = 2) -> LatticeSpace:
    """Lattice presets addressable by name: F, Pi-half, doublet-p, osp, vp."""
    if name == "F":
        return fermion_lattice()
    if name == "Pi-half":
        return pi_half_lattice()
    if name == "doublet-p":
        return doublet_lattice(p)
    if name == "osp":
        return osp_ambient()
    if name == "vp":
        return vp_ambient(p)
    raise ValueError(f"unknown lattice preset {name!r}")
