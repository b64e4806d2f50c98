"""Virasoro vectors, their mode algebras, singular vectors, characters.

The engine's L(0) operators are triangular with respect to a charge
filtration (the charge-raising dressing terms move strictly up), so the
diagonal value of L(0) on a basis monomial is an honest generalized
eigenvalue and graded traces can be read off monomial counts.  Where the
spec demands genuine semisimplicity (the kernel subalgebra), eigenbases
are computed exactly and completeness is asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .clifford import CliffordSystem
from .fock import (GradedSubspace, Mono, State, kernel_of_operators,
                   matrix_rank, mono_sort_key, nullspace, operator_matrix,
                   states_rank)
from .modes import ModeEngine, ModeOp
from .scalars import ONE, Scalar, scalar, QQ


@dataclass
class VirasoroVector:
    element: State
    engine: ModeEngine
    central_charge: Fraction
    name: str = "omega"

    def L(self, n, w: State) -> State:
        return self.engine.element_action(("Vir", self.name, id(self.element)),
                                          self.element, QQ(n) + 1, w)

    def diag_weight(self, m: Mono) -> Fraction:
        """Diagonal L(0)-value on a monomial (exact generalized eigenvalue)."""
        img = self.L(0, State.of(m))
        c = img.coefficient(m)
        if not c.is_rational():
            raise ValueError("non-rational diagonal weight")
        return c.rational_value()

    def mom_weight(self) -> Callable:
        from .fock import momentum_mono

        def wt(momentum):
            return self.diag_weight(momentum_mono(tuple(momentum)))

        return wt


def virasoro_defect(v: VirasoroVector, m: int, n: int, w: State) -> State:
    """[L(m), L(n)] w - (m-n) L(m+n) w - c/12 (m^3-m) delta_{m+n,0} w."""
    lhs = v.L(m, v.L(n, w)) - v.L(n, v.L(m, w))
    rhs = v.L(m + n, w).scaled(QQ(m - n))
    if m + n == 0:
        rhs = rhs + w.scaled(QQ(m ** 3 - m, 12) * QQ(v.central_charge))
    return lhs - rhs


def check_virasoro(v: VirasoroVector, max_mode: int, states: Sequence[State]):
    """All bracket defects on the given states; empty list means pass."""
    failures = []
    for m in range(-max_mode, max_mode + 1):
        for n in range(m, max_mode + 1):
            for idx, w in enumerate(states):
                d = virasoro_defect(v, m, n, w)
                if d:
                    failures.append((m, n, idx, d))
    return failures


def build_w_chain(cs: CliffordSystem, n: int, j: int,
                  picture: str = "fermionic") -> State:
    """The singular chain Q^j phi^+(-n) ... phi^+(-1) vac, 0 <= j <= n."""
    if not (0 <= j <= n):
        raise ValueError("need 0 <= j <= n")
    st = cs.vac()
    for k in range(1, n + 1):
        st = cs.phi_plus(-k, st, picture)
    for _ in range(j):
        st = cs.Q(st, picture)
    return st


def phi_minus_chain(cs: CliffordSystem, n: int, picture: str = "fermionic") -> State:
    st = cs.vac()
    for k in range(1, n + 1):
        st = cs.phi_minus(-k, st, picture)
    return st


def singular_vectors_at(v: VirasoroVector, weight, cell_basis: Sequence[State],
                        extra_annihilators: Sequence = ()) -> GradedSubspace:
    """Kernel of {L(1), L(2)} (+ extras) inside the L(0)-eigenspace at weight.

    L(1), L(2) generate the positive part, so this is the singular-vector
    space of the cell.
    """
    weight = QQ(weight)
    ops = [lambda w: v.L(1, w), lambda w: v.L(2, w),
           lambda w: v.L(0, w) - w.scaled(weight)]
    ops += [op for op in extra_annihilators]
    basis = kernel_of_operators(ops, cell_basis)
    return GradedSubspace(weight, (), basis, grading=f"{v.name}-singular")


# ---------------------------------------------------------------------------
# Graded characters
# ---------------------------------------------------------------------------


class CharacterSeries:
    """Truncated bivariate series: map (q-exponent, z-exponent) -> integer."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms) if terms else {}

    @staticmethod
    def one() -> "CharacterSeries":
        return CharacterSeries({(QQ(0), QQ(0)): 1})

    def add_term(self, q, z, c: int):
        key = (QQ(q), QQ(z))
        v = self.terms.get(key, 0) + c
        if v:
            self.terms[key] = v
        elif key in self.terms:
            del self.terms[key]

    def coeff(self, q, z) -> int:
        return self.terms.get((QQ(q), QQ(z)), 0)

    def __add__(self, other):
        out = CharacterSeries(self.terms)
        for (q, z), c in other.terms.items():
            out.add_term(q, z, c)
        return out

    def shifted(self, dq, dz) -> "CharacterSeries":
        dq, dz = QQ(dq), QQ(dz)
        return CharacterSeries({(q + dq, z + dz): c
                                for (q, z), c in self.terms.items()})

    def mul(self, other: "CharacterSeries", qmax, zmax=None) -> "CharacterSeries":
        qmax = QQ(qmax)
        out = CharacterSeries()
        for (q1, z1), c1 in self.terms.items():
            for (q2, z2), c2 in other.terms.items():
                q, z = q1 + q2, z1 + z2
                if q > qmax:
                    continue
                if zmax is not None and abs(z) > zmax:
                    continue
                out.add_term(q, z, c1 * c2)
        return out

    def clip(self, qmax, zmax=None) -> "CharacterSeries":
        qmax = QQ(qmax)
        out = CharacterSeries()
        for (q, z), c in self.terms.items():
            if q <= qmax and (zmax is None or abs(z) <= zmax):
                out.add_term(q, z, c)
        return out

    def min_q(self) -> Optional[Fraction]:
        return min((q for q, _ in self.terms), default=None)

    def serialize(self) -> str:
        lines = [f"({q}, {z}): {c}"
                 for (q, z), c in sorted(self.terms.items())]
        return "\n".join(lines)

    def __eq__(self, other):
        return isinstance(other, CharacterSeries) and self.terms == other.terms

    def __repr__(self):
        return f"CharacterSeries<{len(self.terms)} terms>"


def fermionic_factor(q_exp, z_exp) -> CharacterSeries:
    """1 + q^a z^b."""
    s = CharacterSeries.one()
    s.add_term(q_exp, z_exp, 1)
    return s


def geometric_factor(n, qmax) -> CharacterSeries:
    """1/(1 - q^n) truncated at q-degree qmax."""
    s = CharacterSeries()
    k = 0
    while QQ(n) * k <= QQ(qmax):
        s.add_term(QQ(n) * k, 0, 1)
        k += 1
    return s


def graded_character(monomials: Iterable[Mono], weight_fn, charge_fn) -> CharacterSeries:
    """Exact bigraded monomial count: sum q^weight z^charge."""
    s = CharacterSeries()
    for m in monomials:
        s.add_term(weight_fn(m), charge_fn(m), 1)
    return s


# ---------------------------------------------------------------------------
# Exact spectral helpers (triangular operators)
# ---------------------------------------------------------------------------


def generalized_weight_dims(mat, candidates):
    """dim of the generalized lambda-eigenspace for each candidate lambda."""
    n = len(mat)
    out = {}
    for lam in candidates:
        lam_s = scalar(lam)
        shifted = [[mat[i][j] - (lam_s if i == j else Scalar())
                    for j in range(n)] for i in range(n)]
        power = _mat_pow(shifted, n)
        d = n - matrix_rank(power)
        if d:
            out[QQ(lam)] = d
    return out


def strict_eigen_dims(mat, candidates):
    """dim ker(M - lambda); equals the generalized dim iff semisimple there."""
    n = len(mat)
    out = {}
    for lam in candidates:
        lam_s = scalar(lam)
        shifted = [[mat[i][j] - (lam_s if i == j else Scalar())
                    for j in range(n)] for i in range(n)]
        d = len(nullspace(shifted, n))
        if d:
            out[QQ(lam)] = d
    return out


def _mat_pow(m, k):
    n = len(m)
    out = [[ONE if i == j else Scalar() for j in range(n)] for i in range(n)]
    base = [row[:] for row in m]
    while k:
        if k & 1:
            out = _mat_mul(out, base)
        k >>= 1
        if k:
            base = _mat_mul(base, base)
    return out


def _mat_mul(a, b):
    n = len(a)
    out = [[Scalar() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for k in range(n):
            c = ai[k]
            if c:
                bk = b[k]
                row = out[i]
                for j in range(n):
                    if bk[j]:
                        row[j] = row[j] + c * bk[j]
    return out


def eigen_refine_cell(v: VirasoroVector, cell_monos: Sequence[Mono]):
    """Split a triangular-invariant cell into exact L(0)-eigenvectors.

    Returns (dict weight -> list of eigenstates, complete flag).  The
    ``complete`` flag is the semisimplicity certificate for the cell.
    """
    basis = [State.of(m) for m in cell_monos]
    mat = operator_matrix(lambda w: v.L(0, w), basis)
    candidates = sorted({v.diag_weight(m) for m in cell_monos})
    n = len(basis)
    out = {}
    total = 0
    for lam in candidates:
        lam_s = scalar(lam)
        shifted = [[mat[i][j] - (lam_s if i == j else Scalar())
                    for j in range(n)] for i in range(n)]
        vecs = nullspace(shifted, n)
        if vecs:
            states = []
            for vec in vecs:
                s = State()
                for j, c in enumerate(vec):
                    if c:
                        for mm, cc in basis[j].items():
                            s.add_term(mm, c * cc)
                states.append(s)
            out[lam] = states
            total += len(vecs)
    return out, total == n
