"""Screening operators: distinguished modes of intertwining vertex operators.

A screening is the grading-preserving mode of its current, which for every
current used here is the mathematical zero mode v_(0) (the residue of
Y(v, z); on states whose pairing with the current's charge is fractional
the z^{-1} coefficient vanishes identically and the screening acts by 0,
which is part of the kernel structure, not an error).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .fock import GradedSubspace, Sector, State, kernel_of_operators
from .modes import ModeEngine, super_commutator
from .scalars import Scalar, QQ


@dataclass
class Screening:
    current: State
    engine: ModeEngine
    name: str = ""
    n: Fraction = QQ(0)
    source: Optional[Sector] = None
    target: Optional[Sector] = None
    parity: Optional[int] = None

    def __post_init__(self):
        if self.parity is None:
            try:
                self.parity = self.engine.parity_of(self.current)
            except ValueError:
                self.parity = None

    def __call__(self, w: State) -> State:
        return self.engine.action(self.current, self.n, w)

    def __repr__(self):
        return f"Screening({self.name or 'anonymous'})"


def kernel_at_grade(screens: Sequence[Callable[[State], State]],
                    cell_basis: Sequence[State], weight=None,
                    charges=()) -> GradedSubspace:
    """Exact joint kernel of the screenings on the span of the cell."""
    basis = kernel_of_operators(list(screens), cell_basis)
    return GradedSubspace(QQ(weight) if weight is not None else QQ(0),
                          tuple(charges), basis, grading="kernel")


def commutes_with(s: Screening, ops, states: Sequence[State],
                  op_parities=None):
    """Exact super-commutator defects [S, op]_{+/-} on each state.

    Returns a list of (op index, state index, defect State) for every
    nonzero defect; empty means the screening (super)commutes on the
    window.
    """
    defects = []
    for j, op in enumerate(ops):
        p_op = op_parities[j] if op_parities is not None else op.parity
        for i, w in enumerate(states):
            lhs = s(op(w))
            rhs = op(s(w))
            d = lhs + rhs if (s.parity and p_op) else lhs - rhs
            if d:
                defects.append((j, i, d))
    return defects


def preset(name: str, p: int = 2) -> Screening:
    """Standard screenings by name.

    G, SF, Q act on the rank-1 fermion ambient (bosonic picture);
    Qtilde(p), QtildeNew(p) on the doublet ambient; Sosp and SN4 share one
    current on the realization ambient; Sp(p) lives on the rank-3 ambient
    of the level -2+1/p realization.
    """
    from .clifford import CliffordSystem
    from .lattice import doublet_lattice
    from .modes import ModeEngine

    base = name.split("(")[0]
    if base in ("G", "SF", "Q"):
        cs = CliffordSystem()
        if base == "G":
            return Screening(cs.phi_element_b(2), cs.engine, name="G")
        if base == "SF":
            return Screening(cs.e(-1), cs.engine, name="SF")
        return Screening(cs.e(2), cs.engine, name="Q")
    if base in ("Qtilde", "QtildeNew"):
        lat = doublet_lattice(p)
        eng = ModeEngine(lat)
        from .omega import doublet_context
        ctx = doublet_context(p, eng)
        return ctx.qtilde_new if base == "QtildeNew" else ctx.qtilde
    if base == "Sosp" or base == "SN4":
        from .osp import OspRealization
        real = OspRealization()
        s = real.screening()
        s.name = base
        return s
    if base == "Sp":
        from .omega import vp_context
        return vp_context(p).screening
    raise ValueError(f"unknown screening preset {name!r}")
