"""Graded Fock-space states and exact linear algebra over Q(zeta8).

A basis monomial is

    Phi_{l1}(r1) ... Phi_{lq}(rq) . h_{d1}(-a1) ... h_{dk}(-ak) . e^lam

with the fermionic slots strictly increasing in (mode, label) (square-zero
is enforced by the ordering), bosonic modes a sorted multiset, and ``lam``
a momentum of the ambient lattice.  States are finite Scalar-linear
combinations of monomials; zero coefficients are never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

from .lattice import LatticeSpace, Momentum, mom_add
from .scalars import ONE, Scalar, scalar, QQ


class Mono:
    """Immutable basis monomial with a cached hash (Fraction hashing is
    expensive and monomials are dictionary keys everywhere)."""

    __slots__ = ("bosons", "momentum", "fermions", "_hash")

    def __init__(self, bosons: tuple, momentum: tuple, fermions: tuple):
        self.bosons = bosons      # ((dir, mode<0), ...) sorted, with repetition
        self.momentum = momentum  # momentum coordinates
        self.fermions = fermions  # ((mode<0, label), ...) strictly increasing
        self._hash = hash((bosons, momentum, fermions))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Mono):
            return NotImplemented
        return (self._hash == other._hash and self.bosons == other.bosons
                and self.momentum == other.momentum
                and self.fermions == other.fermions)

    def __repr__(self):
        return f"Mono({self.bosons}, {self.momentum}, {self.fermions})"

    def degree(self) -> Fraction:
        """Mode-sum part of the naive grading (momentum part excluded)."""
        d = QQ(0)
        for _, m in self.bosons:
            d -= m
        for r, _ in self.fermions:
            d -= r
        return d

    def fermion_count(self) -> int:
        return len(self.fermions)


def vacuum_mono(rank: int) -> Mono:
    return Mono((), tuple(QQ(0) for _ in range(rank)), ())


def momentum_mono(momentum: Momentum) -> Mono:
    return Mono((), tuple(momentum), ())


def mono_sort_key(m: Mono):
    return (m.momentum, m.bosons, m.fermions)


def mono_str(m: Mono, names: Sequence[str] = None) -> str:
    parts = []
    for r, l in m.fermions:
        parts.append(f"Phi{l}({r})")
    for d, k in m.bosons:
        nm = names[d] if names else f"h{d}"
        parts.append(f"{nm}({k})")
    if any(c != 0 for c in m.momentum):
        parts.append("e^(" + ",".join(str(c) for c in m.momentum) + ")")
    return ".".join(parts) if parts else "vac"


class State:
    """Finite linear combination of monomials with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms) if terms else {}

    @staticmethod
    def of(mono: Mono, coeff=ONE) -> "State":
        c = coeff if isinstance(coeff, Scalar) else scalar(coeff)
        return State({mono: c}) if c else State()

    def copy(self) -> "State":
        return State(self.terms)

    def coefficient(self, mono: Mono) -> Scalar:
        return self.terms.get(mono, Scalar())

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def add_term(self, mono: Mono, coeff: Scalar):
        """In-place accumulate; drops the entry when it cancels."""
        cur = self.terms.get(mono)
        new = coeff if cur is None else cur + coeff
        if new:
            self.terms[mono] = new
        elif cur is not None:
            del self.terms[mono]

    def __add__(self, other: "State") -> "State":
        out = State(self.terms)
        for m, c in other.terms.items():
            out.add_term(m, c)
        return out

    def __sub__(self, other: "State") -> "State":
        out = State(self.terms)
        for m, c in other.terms.items():
            out.add_term(m, -c)
        return out

    def __neg__(self) -> "State":
        return State({m: -c for m, c in self.terms.items()})

    def scaled(self, coeff) -> "State":
        c = coeff if isinstance(coeff, Scalar) else scalar(coeff)
        if not c:
            return State()
        return State({m: c * v for m, v in self.terms.items()})

    def __rmul__(self, coeff):
        return self.scaled(coeff)

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def render(self, names: Sequence[str] = None) -> str:
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, key=mono_sort_key):
            bits.append(f"({self.terms[m]}) {mono_str(m, names)}")
        return " + ".join(bits)

    def __repr__(self):
        return f"State<{self.render()}>"


def apply_fermion_mode(w, r: Fraction, label: int):
    """Left action of Phi_label(r) with Koszul signs; r < 0 creates.

    CAR: {Phi_i(r), Phi_j(s)} = delta_{r+s,0} delta_{ij}.
    """
    r = QQ(r)
    if isinstance(w, State):
        out = State()
        for m, c in w.items():
            res = apply_fermion_mode(m, r, label)
            for m2, c2 in res.items():
                out.add_term(m2, c * c2)
        return out
    m: Mono = w
    fs = m.fermions
    if r < 0:
        slot = (r, label)
        if slot in fs:
            return State()
        pos = 0
        while pos < len(fs) and fs[pos] < slot:
            pos += 1
        sign = ONE if pos % 2 == 0 else -ONE
        return State.of(Mono(m.bosons, m.momentum, fs[:pos] + (slot,) + fs[pos:]), sign)
    # annihilation (r > 0, or a twisted zero mode would be r == 0: not on
    # this grid; twisted sectors are bosonic)
    target = (-r, label)
    for pos, slot in enumerate(fs):
        if slot == target:
            sign = ONE if pos % 2 == 0 else -ONE
            return State.of(Mono(m.bosons, m.momentum, fs[:pos] + fs[pos + 1:]), sign)
    return State()


def add_boson_mode(m: Mono, direction: int, mode: int) -> Mono:
    """Insert a creation mode h_direction(mode), mode < 0 (bosons commute)."""
    entry = (direction, mode)
    bs = list(m.bosons)
    pos = 0
    while pos < len(bs) and bs[pos] < entry:
        pos += 1
    bs.insert(pos, entry)
    return Mono(tuple(bs), m.momentum, m.fermions)


def shift_momentum(m: Mono, by: Momentum) -> Mono:
    return Mono(m.bosons, tuple(a + b for a, b in zip(m.momentum, by)), m.fermions)


def apply_heisenberg_creation(w, vec: Sequence, mode: int) -> "State":
    """Left action of the creation mode (sum_d vec_d h_d)(mode), mode < 0."""
    if mode >= 0:
        raise ValueError("creation mode must be negative")
    if isinstance(w, Mono):
        w = State.of(w)
    out = State()
    for m, c in w.items():
        for d, cd in enumerate(vec):
            if cd:
                out.add_term(add_boson_mode(m, d, mode), c * scalar(cd))
    return out


# ---------------------------------------------------------------------------
# Sectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sector:
    """A momentum coset (offset + Z-span of gens) with an optional fermionic
    tensor factor on the untwisted half-integer grid."""

    lattice: LatticeSpace
    offset: tuple
    gens: tuple         # tuple of momenta
    fermionic: bool = False
    name: str = ""

    def __post_init__(self):
        self.lattice.check_momentum(self.offset)
        for g in self.gens:
            self.lattice.check_momentum(g)
        if self.fermionic:
            # Koszul bookkeeping across the tensor factor needs every
            # admissible lattice charge to be even.
            for g in self.gens:
                if self.lattice.try_parity(g) != 0:
                    raise ValueError(
                        "fermionic sectors require even momentum generators")

    def momentum_at(self, coeffs: Sequence[int]) -> Momentum:
        m = self.offset
        for k, g in zip(coeffs, self.gens):
            if k:
                m = mom_add(m, tuple(QQ(k) * c for c in g))
        return m

    def vacuum(self) -> State:
        return State.of(momentum_mono(self.offset))


def vacuum_sector(lattice: LatticeSpace, gens, fermionic=False, name="") -> Sector:
    return Sector(lattice, lattice.zero(), tuple(gens), fermionic, name)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def boson_fillings(rank: int, budget: int):
    """All bosonic mode multisets over `rank` directions with mode-sum = budget."""
    out = []

    def rec(prefix, remaining, min_entry):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for d in range(rank):
            for a in range(1, remaining + 1):
                entry = (d, -a)
                if entry < min_entry:
                    continue
                prefix.append(entry)
                rec(prefix, remaining - a, entry)
                prefix.pop()

    rec([], budget, (-1, -budget - 1))
    return out


def fermion_fillings(budget: Fraction, mode_menu: Callable[[int, Fraction], bool],
                     labels=(1, 2)):
    """All strictly-increasing fermionic slot tuples with mode-sum = budget.

    ``mode_menu(label, r)`` says whether the slot Phi_label(r) is allowed
    (r < 0 on the half-integer grid).
    """
    budget = QQ(budget)
    if budget == 0:
        return [()]
    if budget < 0 or (2 * budget).denominator != 1:
        return []
    slots = []
    r = QQ(-1, 2)
    while -r <= budget:
        for l in labels:
            if mode_menu(l, r):
                slots.append((r, l))
        r -= 1
    slots.sort()
    out = []

    def rec(idx, prefix, remaining):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for i in range(idx, len(slots)):
            r, l = slots[i]
            if -r > remaining:
                continue
            prefix.append((r, l))
            rec(i + 1, prefix, remaining + r)
            prefix.pop()

    rec(0, [], budget)
    return [tuple(sorted(t)) for t in out]


def enumerate_monomials(sector: Sector, mom_weight: Callable[[Momentum], Fraction],
                        max_weight: Fraction, gen_windows: Sequence,
                        min_weight=None,
                        fermion_menu: Callable[[int, Fraction], bool] = None):
    """All sector monomials with diagonal weight in [min_weight, max_weight].

    ``gen_windows`` bounds the integer coefficient of each coset generator
    (the lattice direction may be weight-unbounded below, so the caller
    must supply charge windows).  The diagonal weight of a monomial is
    mom_weight(momentum) + mode-sum.
    """
    max_weight = QQ(max_weight)
    rank = sector.lattice.rank
    if fermion_menu is None:
        fermion_menu = lambda l, r: True
    coeff_lists = [range(lo, hi + 1) for lo, hi in gen_windows]

    def coeff_vectors(idx):
        if idx == len(coeff_lists):
            yield []
            return
        for k in coeff_lists[idx]:
            for rest in coeff_vectors(idx + 1):
                yield [k] + rest

    out = []
    for coeffs in coeff_vectors(0):
        lam = sector.momentum_at(coeffs)
        base = mom_weight(lam)
        budget_max = max_weight - base
        if budget_max < 0:
            continue
        # split the mode budget between bosonic (integer) and fermionic
        # (half-integer) fillings
        fb = QQ(0)
        while fb <= budget_max:
            ferms = fermion_fillings(fb, fermion_menu) if sector.fermionic else ([()] if fb == 0 else [])
            if ferms:
                rem = budget_max - fb
                for bb in range(0, int(rem) + 1):
                    for bos in boson_fillings(rank, bb):
                        w = base + fb + bb
                        if min_weight is not None and w < min_weight:
                            continue
                        for f in ferms:
                            out.append(Mono(tuple(bos), tuple(lam), f))
            fb += QQ(1, 2)
    out.sort(key=mono_sort_key)
    return out


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------


def coordinatize(states: Sequence[State]):
    """Joint monomial coordinates: returns (monomial list, rows)."""
    monos = sorted({m for s in states for m in s.terms}, key=mono_sort_key)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for s in states:
        row = [Scalar() for _ in monos]
        for m, c in s.items():
            row[index[m]] = c
        rows.append(row)
    return monos, rows


def rref(rows):
    """Reduced row echelon form (over Q(zeta8)); returns (rows, pivot cols)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def matrix_rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int):
    """Basis of {x : M x = 0} for M given as a list of length-ncols rows."""
    red, pivots = rref(rows)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        vec = [Scalar() for _ in range(ncols)]
        vec[fc] = ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def states_rank(states: Sequence[State]) -> int:
    if not states:
        return 0
    _, rows = coordinatize(states)
    return matrix_rank(rows)


def independent_subset(states: Sequence[State]):
    """Greedy maximal linearly independent sublist (deterministic order)."""
    kept = []
    kept_rows = []
    monos = sorted({m for s in states for m in s.terms}, key=mono_sort_key)
    index = {m: i for i, m in enumerate(monos)}
    for s in states:
        if not s:
            continue
        row = [Scalar() for _ in monos]
        for m, c in s.items():
            row[index[m]] = c
        if matrix_rank(kept_rows + [row]) > len(kept):
            kept.append(s)
            kept_rows.append(row)
    return kept


def kernel_of_operators(ops: Sequence[Callable[[State], State]],
                        domain_basis: Sequence[State]):
    """Exact joint kernel of linear maps restricted to span(domain_basis)."""
    n = len(domain_basis)
    if n == 0:
        return []
    images = []   # images[j] = list of op(v_j) stacked over ops
    for v in domain_basis:
        images.append([op(v) for op in ops])
    # joint coordinates of all images
    all_states = [s for col in images for s in col]
    monos = sorted({m for s in all_states for m in s.terms}, key=mono_sort_key)
    index = {m: i for i, m in enumerate(monos)}
    nrows = len(monos) * len(ops)
    cols = []
    for j in range(n):
        col = [Scalar() for _ in range(nrows)]
        for k, s in enumerate(images[j]):
            off = k * len(monos)
            for m, c in s.items():
                col[off + index[m]] = c
        cols.append(col)
    rows = [[cols[j][i] for j in range(n)] for i in range(nrows)]
    coords = nullspace(rows, n)
    out = []
    for vec in coords:
        s = State()
        for j, c in enumerate(vec):
            if c:
                for m, cc in domain_basis[j].items():
                    s.add_term(m, c * cc)
        out.append(s)
    return out


def operator_matrix(op: Callable[[State], State], basis: Sequence[State]):
    """Matrix of op on span(basis); raises if the span is not preserved."""
    images = [op(v) for v in basis]
    monos = sorted({m for s in list(basis) + images for m in s.terms},
                   key=mono_sort_key)
    index = {m: i for i, m in enumerate(monos)}

    def coords(s):
        row = [Scalar() for _ in monos]
        for m, c in s.items():
            row[index[m]] = c
        return row

    brows = [coords(v) for v in basis]
    red, pivots = rref(brows)
    mat = [[Scalar() for _ in basis] for _ in basis]
    for j, img in enumerate(images):
        vec = coords(img)
        # express vec in the basis via the rref factorization
        coeffs = [Scalar() for _ in basis]
        residual = list(vec)
        # solve brows^T x = vec by elimination against original basis rows
        aug = [list(r) + [residual[i]] for i, r in
               enumerate([[brows[k][i] for k in range(len(basis))]
                          for i in range(len(monos))])]
        sol = _solve_exact(aug, len(basis))
        if sol is None:
            raise ValueError("operator does not preserve the span")
        for i, c in enumerate(sol):
            mat[i][j] = c
    return mat


def _solve_exact(aug_rows, nvars):
    """Solve the (possibly overdetermined) system given as augmented rows;
    returns None if inconsistent."""
    red, pivots = rref(aug_rows)
    if nvars in pivots:
        return None
    sol = [Scalar() for _ in range(nvars)]
    for r, pc in enumerate(pivots):
        sol[pc] = red[r][nvars]
        for c in range(nvars):
            if c != pc and red[r][c]:
                # free variables set to zero: consistency needs exactness,
                # which holds when the basis rows are independent
                pass
    # verify
    for row in aug_rows:
        acc = Scalar()
        for c in range(nvars):
            if row[c]:
                acc = acc + row[c] * sol[c]
        if acc != row[nvars]:
            return None
    return sol


def express_in_basis(state: State, basis: Sequence[State]):
    """Coordinates of state in span(basis), or None."""
    monos = sorted({m for s in list(basis) + [state] for m in s.terms},
                   key=mono_sort_key)
    index = {m: i for i, m in enumerate(monos)}
    aug = []
    for i in range(len(monos)):
        row = [b.terms.get(monos[i], Scalar()) for b in basis]
        row.append(state.terms.get(monos[i], Scalar()))
        aug.append(row)
    return _solve_exact(aug, len(basis))


def eigenspaces(mat, candidates):
    """Exact eigenspaces of a square matrix for the candidate eigenvalues.

    Returns (dict eigenvalue -> list of coordinate vectors, complete) where
    ``complete`` is True iff the eigenvectors span the whole space (the
    operator is semisimple with spectrum inside ``candidates``).
    """
    n = len(mat)
    out = {}
    total = 0
    for lam in candidates:
        lam_s = lam if isinstance(lam, Scalar) else scalar(lam)
        shifted = [[mat[i][j] - (lam_s if i == j else Scalar())
                    for j in range(n)] for i in range(n)]
        vecs = nullspace(shifted, n)
        if vecs:
            out[lam] = vecs
            total += len(vecs)
    return out, total == n


@dataclass
class GradedSubspace:
    """A graded piece: exact basis plus its grading key."""

    weight: Fraction
    charges: tuple
    basis: list
    grading: str = ""

    @property
    def dim(self) -> int:
        return len(self.basis)

    def verify_independent(self) -> bool:
        return states_rank(self.basis) == len(self.basis)
