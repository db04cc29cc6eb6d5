"""Band-structured operators on sequence lattices, with exact application.

An operator is a finite set of bands; a band is an integer offset together
with an index-dependent weight.  The operator acts on a finitely supported
vector by ``(T u)(k + offset) += weight(k) * u(k)``, summed over bands, with
contributions that land outside the lattice discarded.  On half-space
lattices this discarding is exactly the boundary convention of unilateral
shifts and translations (nothing is mapped below index 0).

Adjoints and compositions are computed symbolically on a small weight
algebra (sums of products of shifted family atoms, coordinate selectors and
lattice masks), so applying any derived operator to a vector is still exact.
Where a product of conjugate weight factors has a closed form (for example
the squared modulus of a Bergman weight), it is merged analytically; this
keeps Gram operators of weighted shifts exactly diagonal with rational
entries.

The inverse Gram factor needed by the canonical left inverse
``(T* T)^{-1} T*`` is never formed as an operator: the inverse of a band
operator is not band.  It is applied per vector by guarded finite-section
solves whose residual is always re-measured with the exact band arithmetic;
the window is enlarged (guard doubling) until the requested tolerance is
certified or a hard size cap is reached.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .seqspace import FinVec, RankMismatch

_BIG = 10 ** 9  # sentinel distance for axes without a truncation edge


class LatticeMismatch(ValueError):
    """A vector or operator was used on a lattice it does not live on."""


class NoConvergence(RuntimeError):
    """A guarded Gram solve hit its window cap before certifying the residual."""

    def __init__(self, message: str, residual: float = math.inf, window: int = 0):
        super().__init__(message)
        self.residual = residual
        self.window = window


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

def _tadd(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _tneg(a: tuple) -> tuple:
    return tuple(-x for x in a)


class Lattice:
    """Product lattice over integer axes.

    Each axis is ``'nat'`` (coordinates >= 0), ``'int'`` (all integers) or a
    positive int ``m`` denoting the finite range ``0..m-1``.  Indices with a
    coordinate outside an axis domain are not part of the lattice; amplitudes
    there are identically zero.
    """

    __slots__ = ("axes",)

    def __init__(self, axes: Sequence):
        axes = tuple(axes)
        for a in axes:
            if a in ("nat", "int"):
                continue
            if isinstance(a, int) and a > 0:
                continue
            raise ValueError(f"bad axis spec {a!r}: expected 'nat', 'int' or a positive int")
        if not axes:
            raise ValueError("lattice needs at least one axis")
        self.axes = axes

    @classmethod
    def nat(cls, rank: int = 1) -> "Lattice":
        return cls(("nat",) * rank)

    @classmethod
    def integers(cls, rank: int = 1) -> "Lattice":
        return cls(("int",) * rank)

    @property
    def rank(self) -> int:
        return len(self.axes)

    def contains(self, ix: tuple) -> bool:
        if len(ix) != len(self.axes):
            return False
        for c, a in zip(ix, self.axes):
            if a == "nat":
                if c < 0:
                    return False
            elif a == "int":
                continue
            else:
                if not (0 <= c < a):
                    return False
        return True

    def _axis_window(self, a, extent: int) -> range:
        if a == "nat":
            return range(0, extent + 1)
        if a == "int":
            return range(-extent, extent + 1)
        return range(0, a)

    def window(self, extent: int) -> list[tuple]:
        """All lattice indices with coordinates within ``extent``; graded order.

        Per axis: ``0..extent`` for 'nat', ``-extent..extent`` for 'int', the
        full range for finite axes.  Sorted by sum of absolute coordinates,
        then lexicographically.
        """
        pts = itertools.product(*(self._axis_window(a, extent) for a in self.axes))
        return sorted(pts, key=lambda ix: (sum(abs(c) for c in ix), ix))

    def _axis_pad(self, a, guard: int) -> range:
        if a == "nat" or a == "int":
            return range(-guard, guard + 1)
        return range(-(a - 1), a)

    def ball(self, center: tuple, guard: int) -> Iterable[tuple]:
        """In-lattice indices within sup-distance ``guard`` of ``center``.

        Finite axes are always padded over their whole range.
        """
        for off in itertools.product(*(self._axis_pad(a, guard) for a in self.axes)):
            ix = _tadd(center, off)
            if self.contains(ix):
                yield ix

    def always_contains_shift(self, off: tuple) -> bool:
        """True when ``k in lattice`` implies ``k + off in lattice`` for all k."""
        for o, a in zip(off, self.axes):
            if a == "int":
                continue
            if a == "nat":
                if o < 0:
                    return False
            else:
                if o != 0:
                    return False
        return True

    def edge_margin(self, ix: tuple, extent: int) -> int:
        """Distance from ``ix`` to the truncation edge of ``window(extent)``.

        Lattice boundaries that exist in the infinite operator (the 0 end of a
        'nat' axis, finite axes) are not truncation edges and do not count.
        """
        m = _BIG
        for c, a in zip(ix, self.axes):
            if a == "nat":
                m = min(m, extent - c)
            elif a == "int":
                m = min(m, extent - abs(c))
        return m

    def describe(self) -> dict:
        return {"kind": "grid", "axes": list(self.axes)}

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.axes == other.axes

    def __hash__(self) -> int:
        return hash(("grid", self.axes))

    def __repr__(self) -> str:
        return f"Lattice({self.axes!r})"


class UnionLattice:
    """Tagged disjoint union of two equal-rank lattices.

    Indices are ``(tag, *coords)`` with tag 0 for the left component and 1
    for the right.  Offsets of operators on a union lattice never move the
    tag coordinate.
    """

    __slots__ = ("left", "right")

    def __init__(self, left, right):
        if left.rank != right.rank:
            raise RankMismatch(f"summand ranks differ: {left.rank} vs {right.rank}")
        self.left = left
        self.right = right

    @property
    def parts(self) -> tuple:
        return (self.left, self.right)

    @property
    def rank(self) -> int:
        return self.left.rank + 1

    def contains(self, ix: tuple) -> bool:
        if len(ix) != self.rank or ix[0] not in (0, 1):
            return False
        return self.parts[ix[0]].contains(ix[1:])

    def window(self, extent: int) -> list[tuple]:
        pts = [(0,) + ix for ix in self.left.window(extent)]
        pts += [(1,) + ix for ix in self.right.window(extent)]
        return sorted(pts, key=lambda ix: (sum(abs(c) for c in ix), ix))

    def ball(self, center: tuple, guard: int) -> Iterable[tuple]:
        tag = center[0]
        for ix in self.parts[tag].ball(center[1:], guard):
            yield (tag,) + ix

    def always_contains_shift(self, off: tuple) -> bool:
        if off[0] != 0:
            return False
        return (self.left.always_contains_shift(off[1:])
                and self.right.always_contains_shift(off[1:]))

    def edge_margin(self, ix: tuple, extent: int) -> int:
        return self.parts[ix[0]].edge_margin(ix[1:], extent)

    def describe(self) -> dict:
        return {"kind": "union", "left": self.left.describe(), "right": self.right.describe()}

    def __eq__(self, other) -> bool:
        return (isinstance(other, UnionLattice)
                and self.left == other.left and self.right == other.right)

    def __hash__(self) -> int:
        return hash(("union", self.left, self.right))

    def __repr__(self) -> str:
        return f"UnionLattice({self.left!r}, {self.right!r})"


def union(left, right) -> UnionLattice:
    return UnionLattice(left, right)


# ---------------------------------------------------------------------------
# weight algebra
# ---------------------------------------------------------------------------
#
# A weight is a sum of terms; a term is a complex coefficient times a product
# of atoms (single-axis weight families with a folded-in integer shift and a
# conjugation flag), coordinate selectors (k[axis] == value) and lattice
# masks (k + offset must be in the lattice).  Everything is normalized at
# construction: selector conflicts kill a term, conjugate atom pairs merge to
# an analytic squared-modulus atom, identical terms merge coefficients.

class Atom(NamedTuple):
    kind: str        # 'bergman' | 'dirichlet' | 'table' | 'powratio' | 'abs2'
    axis: int
    shift: int
    conj: bool
    params: tuple


class Select(NamedTuple):
    axis: int
    value: int


class Term(NamedTuple):
    coeff: complex
    atoms: tuple
    selects: tuple
    masks: tuple


_REAL_ATOM_KINDS = frozenset({"bergman", "dirichlet", "powratio", "abs2"})


def _atom_is_real(a: Atom) -> bool:
    if a.kind in _REAL_ATOM_KINDS:
        return True
    if a.kind == "table":
        values, default = a.params
        return all(v.imag == 0 for v in values) and default.imag == 0
    return False


def _atom_sort_key(a: Atom):
    return (a.kind, a.axis, a.shift, repr(a.params), a.conj)


def _eval_plain(kind: str, params: tuple, m: int, conj: bool) -> complex:
    if kind == "bergman":
        if m < 0:
            raise ValueError(f"Bergman weight evaluated at negative index {m}")
        return math.sqrt((m + 1) / (m + 2))
    if kind == "dirichlet":
        if m < 0:
            raise ValueError(f"Dirichlet weight evaluated at negative index {m}")
        return math.sqrt((m + 2) / (m + 1))
    if kind == "table":
        values, default = params
        v = values[m] if 0 <= m < len(values) else default
        return v.conjugate() if conj else v
    if kind == "powratio":
        beta, h, steps = params
        if m < 0:
            raise ValueError(f"translation weight evaluated at negative grid site {m}")
        base = (1.0 + (m + steps) * h) / (1.0 + m * h)
        return base ** beta
    raise ValueError(f"unknown atom kind {kind!r}")


def _eval_atom(a: Atom, ix: tuple) -> complex:
    m = ix[a.axis] + a.shift
    if a.kind == "abs2":
        inner_kind, inner_params = a.params
        if inner_kind == "bergman":
            if m < 0:
                raise ValueError(f"Bergman weight evaluated at negative index {m}")
            return (m + 1) / (m + 2)
        if inner_kind == "dirichlet":
            if m < 0:
                raise ValueError(f"Dirichlet weight evaluated at negative index {m}")
            return (m + 2) / (m + 1)
        if inner_kind == "powratio":
            beta, h, steps = inner_params
            if m < 0:
                raise ValueError(f"translation weight evaluated at negative grid site {m}")
            base = (1.0 + (m + steps) * h) / (1.0 + m * h)
            return base ** (2.0 * beta)
        if inner_kind == "table":
            values, default = inner_params
            v = values[m] if 0 <= m < len(values) else default
            return v.real * v.real + v.imag * v.imag
        raise ValueError(f"unknown abs2 inner kind {inner_kind!r}")
    return _eval_plain(a.kind, a.params, m, a.conj)


def _merge_abs2(atoms: list[Atom]) -> list[Atom]:
    """Replace conjugate pairs of identical atoms by a squared-modulus atom."""
    changed = True
    while changed:
        changed = False
        n = len(atoms)
        for i in range(n):
            for j in range(i + 1, n):
                a, b = atoms[i], atoms[j]
                if a.kind == "abs2" or b.kind == "abs2":
                    continue
                if (a.kind, a.axis, a.shift, a.params) != (b.kind, b.axis, b.shift, b.params):
                    continue
                if a.conj != b.conj or _atom_is_real(a):
                    merged = Atom("abs2", a.axis, a.shift, False, (a.kind, a.params))
                    atoms = atoms[:i] + atoms[i + 1:j] + atoms[j + 1:] + [merged]
                    changed = True
                    break
            if changed:
                break
    return atoms


def _make_term(coeff: complex, atoms, selects, masks) -> Term | None:
    coeff = complex(coeff)
    if coeff == 0:
        return None
    sel: dict[int, int] = {}
    for s in selects:
        if s.axis in sel and sel[s.axis] != s.value:
            return None
        sel[s.axis] = s.value
    atoms = _merge_abs2(list(atoms))
    return Term(
        coeff,
        tuple(sorted(atoms, key=_atom_sort_key)),
        tuple(Select(ax, v) for ax, v in sorted(sel.items())),
        tuple(sorted(set(masks))),
    )


def _normalize_terms(terms: Iterable[Term]) -> tuple:
    merged: dict[tuple, complex] = {}
    for t in terms:
        if t is None:
            continue
        key = (t.atoms, t.selects, t.masks)
        merged[key] = merged.get(key, 0j) + t.coeff
    out = [Term(c, *key) for key, c in merged.items() if c != 0]
    out.sort(key=lambda t: (tuple(map(_atom_sort_key, t.atoms)), t.selects, t.masks, repr(t.coeff)))
    return tuple(out)


class Weight:
    """Index-dependent band weight in sum-of-products normal form."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Term] = ()):
        self.terms = _normalize_terms(terms)

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "Weight":
        t = _make_term(complex(c), (), (), ())
        return cls(() if t is None else (t,))

    @classmethod
    def atom(cls, kind: str, params: tuple = (), axis: int = 0,
             shift: int = 0, conj: bool = False) -> "Weight":
        return cls((_make_term(1.0, (Atom(kind, axis, shift, conj, params),), (), ()),))

    @classmethod
    def select(cls, axis: int, value: int) -> "Weight":
        return cls((_make_term(1.0, (), (Select(axis, value),), ()),))

    @classmethod
    def mask(cls, offset: tuple) -> "Weight":
        return cls((_make_term(1.0, (), (), (tuple(offset),)),))

    # -- algebra ------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def conjugated(self) -> "Weight":
        out = []
        for t in self.terms:
            atoms = tuple(a if _atom_is_real(a) else a._replace(conj=not a.conj)
                          for a in t.atoms)
            out.append(_make_term(t.coeff.conjugate(), atoms, t.selects, t.masks))
        return Weight(out)

    def shifted(self, off: tuple) -> "Weight":
        """Weight evaluating the original at ``k + off``."""
        out = []
        for t in self.terms:
            atoms = tuple(a._replace(shift=a.shift + off[a.axis]) for a in t.atoms)
            selects = tuple(Select(s.axis, s.value - off[s.axis]) for s in t.selects)
            masks = tuple(_tadd(m, off) for m in t.masks)
            out.append(_make_term(t.coeff, atoms, selects, masks))
        return Weight(out)

    def embedded(self) -> "Weight":
        """Re-home the weight one axis to the right (a tag axis is prepended)."""
        out = []
        for t in self.terms:
            atoms = tuple(a._replace(axis=a.axis + 1) for a in t.atoms)
            selects = tuple(Select(s.axis + 1, s.value) for s in t.selects)
            masks = tuple((0,) + m for m in t.masks)
            out.append(_make_term(t.coeff, atoms, selects, masks))
        return Weight(out)

    def __mul__(self, other: "Weight") -> "Weight":
        if not isinstance(other, Weight):
            return NotImplemented
        out = []
        for ta in self.terms:
            for tb in other.terms:
                out.append(_make_term(ta.coeff * tb.coeff,
                                      ta.atoms + tb.atoms,
                                      ta.selects + tb.selects,
                                      ta.masks + tb.masks))
        return Weight(out)

    def __add__(self, other: "Weight") -> "Weight":
        if not isinstance(other, Weight):
            return NotImplemented
        return Weight(self.terms + other.terms)

    def scaled(self, c) -> "Weight":
        c = complex(c)
        return Weight(tuple(_make_term(c * t.coeff, t.atoms, t.selects, t.masks)
                            for t in self.terms))

    def __eq__(self, other) -> bool:
        return isinstance(other, Weight) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        return f"Weight({len(self.terms)} terms)"

    # -- evaluation ---------------------------------------------------------
    def evaluate(self, ix: tuple, lattice) -> complex:
        total = 0j
        for t in self.terms:
            skip = False
            for s in t.selects:
                if ix[s.axis] != s.value:
                    skip = True
                    break
            if skip:
                continue
            for m in t.masks:
                if not lattice.contains(_tadd(ix, m)):
                    skip = True
                    break
            if skip:
                continue
            val = t.coeff
            for a in t.atoms:
                val = val * _eval_atom(a, ix)
            total += val
        return total


# convenience weight-family constructors -------------------------------------

def constant(c) -> Weight:
    return Weight.const(c)


def bergman(axis: int = 0) -> Weight:
    """sqrt((k+1)/(k+2)) on the given axis."""
    return Weight.atom("bergman", (), axis=axis)


def dirichlet(axis: int = 0) -> Weight:
    """sqrt((k+2)/(k+1)) on the given axis."""
    return Weight.atom("dirichlet", (), axis=axis)


def table(values: Sequence, default, axis: int = 0) -> Weight:
    """Tabulated weight; out-of-range lookups return the explicit default."""
    vals = tuple(complex(v) for v in values)
    return Weight.atom("table", (vals, complex(default)), axis=axis)


def power_ratio(beta: float, h: float, steps: int, axis: int = 0) -> Weight:
    """((1+(k+steps)h)/(1+kh))**beta: translation weight of a power envelope."""
    return Weight.atom("powratio", (float(beta), float(h), int(steps)), axis=axis)


# ---------------------------------------------------------------------------
# band operators
# ---------------------------------------------------------------------------

class BandOp:
    """Operator given by finitely many (offset, weight) bands on a lattice."""

    __slots__ = ("lattice", "bands")

    def __init__(self, lattice, bands: Iterable[tuple]):
        merged: dict[tuple, Weight] = {}
        for off, w in bands:
            off = tuple(int(c) for c in off)
            if len(off) != lattice.rank:
                raise RankMismatch(f"offset {off} has rank {len(off)}, lattice rank {lattice.rank}")
            if off in merged:
                merged[off] = merged[off] + w
            else:
                merged[off] = w
        self.lattice = lattice
        self.bands = tuple((off, w) for off, w in sorted(merged.items(), key=lambda kv: kv[0])
                           if not w.is_zero)

    @property
    def rank(self) -> int:
        return self.lattice.rank

    @property
    def offsets(self) -> tuple:
        return tuple(off for off, _ in self.bands)

    def weight_at(self, off) -> Weight:
        off = tuple(int(c) for c in off)
        for o, w in self.bands:
            if o == off:
                return w
        return Weight(())

    def max_band_reach(self) -> int:
        reach = 0
        for off, _ in self.bands:
            reach = max(reach, max((abs(c) for c in off), default=0))
        return reach

    def is_diagonal(self) -> bool:
        zero = (0,) * self.rank
        return all(off == zero for off, _ in self.bands)

    # -- action -------------------------------------------------------------
    def apply(self, u: FinVec) -> FinVec:
        if u.rank != self.rank:
            raise RankMismatch(f"vector rank {u.rank}, operator rank {self.rank}")
        items = u.items()
        for ix, _ in items:
            if not self.lattice.contains(ix):
                raise LatticeMismatch(f"vector entry at {ix} lies outside {self.lattice!r}")
        acc: dict[tuple, complex] = {}
        for off, w in self.bands:
            for ix, amp in items:
                tgt = _tadd(ix, off)
                if not self.lattice.contains(tgt):
                    continue
                val = w.evaluate(ix, self.lattice)
                if val != 0:
                    acc[tgt] = acc.get(tgt, 0j) + val * amp
        return FinVec(acc, rank=self.rank)

    def __call__(self, u: FinVec) -> FinVec:
        return self.apply(u)

    # -- algebra ------------------------------------------------------------
    def adjoint(self) -> "BandOp":
        out = []
        for off, w in self.bands:
            noff = _tneg(off)
            out.append((noff, w.conjugated().shifted(noff)))
        return BandOp(self.lattice, out)

    @property
    def H(self) -> "BandOp":
        return self.adjoint()

    def compose(self, other: "BandOp") -> "BandOp":
        """self after other: (self @ other)(u) = self(other(u)), exactly.

        A mask records that the intermediate index ``k + other_offset`` must
        lie in the lattice; it is omitted when that holds automatically.
        """
        if not isinstance(other, BandOp):
            raise TypeError("compose expects a BandOp")
        if self.lattice != other.lattice:
            raise LatticeMismatch(f"lattices differ: {self.lattice!r} vs {other.lattice!r}")
        out = []
        for aoff, aw in self.bands:
            for boff, bw in other.bands:
                w = aw.shifted(boff) * bw
                if not self.lattice.always_contains_shift(boff):
                    w = w * Weight.mask(boff)
                out.append((_tadd(aoff, boff), w))
        return BandOp(self.lattice, out)

    def __matmul__(self, other: "BandOp") -> "BandOp":
        return self.compose(other)

    def gram(self) -> "BandOp":
        """The operator ``T* T``; Hermitian, exactly diagonal for weighted shifts."""
        return self.adjoint().compose(self)

    def __pow__(self, n: int) -> "BandOp":
        if not isinstance(n, int) or n < 0:
            raise ValueError("power must be a nonnegative integer")
        if n == 0:
            return identity(self.lattice)
        acc = self
        for _ in range(n - 1):
            acc = acc.compose(self)
        return acc

    def __add__(self, other: "BandOp") -> "BandOp":
        if not isinstance(other, BandOp):
            return NotImplemented
        if self.lattice != other.lattice:
            raise LatticeMismatch("cannot add operators on different lattices")
        return BandOp(self.lattice, self.bands + other.bands)

    def __sub__(self, other: "BandOp") -> "BandOp":
        return self + (-1) * other

    def __mul__(self, c) -> "BandOp":
        return BandOp(self.lattice, tuple((off, w.scaled(c)) for off, w in self.bands))

    def __rmul__(self, c) -> "BandOp":
        return self * c

    def __neg__(self) -> "BandOp":
        return self * (-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BandOp):
            return NotImplemented
        return self.lattice == other.lattice and self.bands == other.bands

    def __repr__(self) -> str:
        return f"BandOp({self.lattice!r}, offsets={list(self.offsets)!r})"


def identity(lattice) -> BandOp:
    return BandOp(lattice, (((0,) * lattice.rank, Weight.const(1.0)),))


# ---------------------------------------------------------------------------
# guarded Gram solves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GramSolveParams:
    """Controls for the per-vector application of (T*T)^{-1}.

    ``guard`` is the initial window padding around the right-hand side
    support (``None`` derives 16x the band reach of the operator), ``tol``
    the certified relative residual, ``max_window`` the hard cap on window
    ordinals before giving up.
    """

    guard: int | None = None
    tol: float = 1e-12
    max_window: int = 2 ** 16

    def __post_init__(self):
        if self.guard is not None and self.guard < 0:
            raise ValueError("guard must be nonnegative")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_window <= 0:
            raise ValueError("max_window must be positive")

    def effective_guard(self, T: BandOp) -> int:
        if self.guard is not None:
            return self.guard
        return 16 * max(1, T.max_band_reach())

    def tightened(self, factor: float = 10.0) -> "GramSolveParams":
        return GramSolveParams(self.guard, self.tol / factor, self.max_window)


def _padded_window(lattice, support: Iterable[tuple], guard: int) -> list[tuple]:
    pts: set[tuple] = set()
    for s in support:
        pts.update(lattice.ball(s, guard))
    return sorted(pts)


def _gram_residual(G: BandOp, x: FinVec, v: FinVec) -> float:
    return (G.apply(x) - v).norm()


def _hermitian_section(G: BandOp, window: Sequence[tuple]) -> np.ndarray:
    pos = {ix: i for i, ix in enumerate(window)}
    n = len(window)
    M = np.zeros((n, n), dtype=complex)
    for j, jx in enumerate(window):
        for off, w in G.bands:
            tix = _tadd(jx, off)
            i = pos.get(tix)
            if i is None:
                continue
            val = w.evaluate(jx, G.lattice)
            if val != 0:
                M[i, j] += val
    return M


def solve_gram(T: BandOp, v: FinVec, params: GramSolveParams | None = None) -> FinVec:
    """Solve ``(T* T) x = v`` with a certified residual.

    The residual of the returned ``x`` is re-measured with the exact band
    Gram operator (never trusted from the dense solver) and satisfies
    ``|| T*T x - v || <= tol * ||v||``.  Raises :class:`NoConvergence` when
    the solve window would exceed ``max_window`` ordinals.
    """
    p = params or GramSolveParams()
    if v.rank != T.rank:
        raise RankMismatch(f"vector rank {v.rank}, operator rank {T.rank}")
    if v.is_zero:
        return v
    G = T.gram()
    vn = v.norm()

    if G.is_diagonal():
        # exactly diagonal (every weighted shift lands here): divide entrywise
        if not G.bands:
            raise NoConvergence("Gram operator is identically zero", residual=vn, window=0)
        w = G.bands[0][1]
        entries = {}
        ok = True
        for ix, amp in v.items():
            g = w.evaluate(ix, G.lattice)
            if not (g.real > 0.0) or abs(g.imag) > 1e-14 * g.real:
                ok = False
                break
            entries[ix] = complex(amp.real / g.real, amp.imag / g.real)
        if ok:
            x = FinVec(entries, rank=v.rank)
            r = _gram_residual(G, x, v)
            if r <= p.tol * vn:
                return x
        # fall through to the windowed solve on pathological diagonals

    guard = p.effective_guard(T)
    last_residual = math.inf
    while True:
        window = _padded_window(G.lattice, v.support(), guard)
        if len(window) > p.max_window:
            raise NoConvergence(
                f"window of {len(window)} ordinals exceeds cap {p.max_window} "
                f"with residual {last_residual:.3e}",
                residual=last_residual, window=len(window))
        M = _hermitian_section(G, window)
        rhs = np.zeros(len(window), dtype=complex)
        pos = {ix: i for i, ix in enumerate(window)}
        for ix, amp in v.items():
            rhs[pos[ix]] = amp
        try:
            cf = scipy.linalg.cho_factor(M)
            sol = scipy.linalg.cho_solve(cf, rhs)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
            raise NoConvergence(
                "Gram section is not positive definite (operator near-singular?)",
                residual=last_residual, window=len(window)) from None
        x = FinVec({ix: sol[i] for ix, i in pos.items()}, rank=v.rank)
        last_residual = _gram_residual(G, x, v)
        if last_residual <= p.tol * vn:
            return x
        guard = max(1, guard) * 2


def left_inverse_apply(T: BandOp, v: FinVec, params: GramSolveParams | None = None) -> FinVec:
    """Apply the canonical left inverse ``(T*T)^{-1} T*`` to ``v``."""
    w = T.adjoint().apply(v)
    if w.is_zero:
        return w
    return solve_gram(T, w, params)


def lower_bound_estimate(T: BandOp, window: int) -> float:
    """Smallest singular value of T restricted to the window span.

    The section keeps every image row (columns are never truncated), so the
    value is exactly ``min ||T h|| / ||h||`` over vectors supported in the
    window: an upper bound for the global bound-below constant, monotone
    nonincreasing in the window size.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    cols = T.lattice.window(window)
    if not cols or not T.bands:
        return 0.0
    rows: set[tuple] = set()
    for c in cols:
        for off, _ in T.bands:
            tgt = _tadd(c, off)
            if T.lattice.contains(tgt):
                rows.add(tgt)
    rows = sorted(rows)
    rpos = {ix: i for i, ix in enumerate(rows)}
    M = np.zeros((len(rows), len(cols)), dtype=complex)
    for j, c in enumerate(cols):
        for off, w in T.bands:
            tgt = _tadd(c, off)
            i = rpos.get(tgt)
            if i is None:
                continue
            val = w.evaluate(c, T.lattice)
            if val != 0:
                M[i, j] += val
    if M.shape[0] < M.shape[1]:
        return 0.0
    sv = np.linalg.svd(M, compute_uv=False)
    return float(sv[-1])


# thin functional aliases matching the operation names used elsewhere --------

def apply(T: BandOp, u: FinVec) -> FinVec:
    return T.apply(u)


def adjoint(T: BandOp) -> BandOp:
    return T.adjoint()


def compose(A: BandOp, B: BandOp) -> BandOp:
    return A.compose(B)


def gram(T: BandOp) -> BandOp:
    return T.gram()
