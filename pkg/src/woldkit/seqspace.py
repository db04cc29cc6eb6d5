"""Exact arithmetic on finitely supported complex vectors over integer lattices.

A vector is a finite map from integer multi-indices (rank 1 or 2 in practice,
any positive rank in principle) to complex double-precision amplitudes.  All
operations are exact up to floating-point rounding of the amplitudes; nothing
is ever truncated implicitly.  Entries that are exactly zero are pruned at
construction, which does not change the vector.

The inner product is linear in the first argument and conjugate-linear in
the second: ``inner(u, v) = sum_k u[k] * conj(v[k])``.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping


class RankMismatch(ValueError):
    """Two values with different index ranks were combined."""


def as_index(ix) -> tuple:
    """Normalize an index to a tuple of ints; a bare int becomes rank 1."""
    if isinstance(ix, int):
        return (ix,)
    return tuple(int(c) for c in ix)


class FinVec:
    """Finitely supported vector: an immutable map index -> complex amplitude."""

    __slots__ = ("_entries", "_rank")

    def __init__(self, entries=(), rank: int | None = None):
        if isinstance(entries, Mapping):
            items: Iterable = entries.items()
        else:
            items = entries
        data: dict[tuple, complex] = {}
        r = None
        for ix, amp in items:
            ix = as_index(ix)
            if r is None:
                r = len(ix)
            elif len(ix) != r:
                raise RankMismatch(f"index {ix} has rank {len(ix)}, expected {r}")
            amp = complex(amp)
            if ix in data:
                data[ix] += amp
            elif amp != 0:
                data[ix] = amp
        # accumulated duplicates may have cancelled
        data = {ix: a for ix, a in data.items() if a != 0}
        if r is None:
            if rank is None:
                raise ValueError("rank is required to build an empty vector")
            r = rank
        elif rank is not None and rank != r:
            raise RankMismatch(f"entries have rank {r}, expected {rank}")
        self._entries = data
        self._rank = int(r)

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def is_zero(self) -> bool:
        return not self._entries

    def support(self) -> tuple:
        """Sorted tuple of indices carrying nonzero amplitude."""
        return tuple(sorted(self._entries))

    def items(self) -> list[tuple[tuple, complex]]:
        """Entries as a list sorted by index (deterministic iteration order)."""
        return sorted(self._entries.items())

    def get(self, ix, default: complex = 0j) -> complex:
        return self._entries.get(as_index(ix), default)

    def __getitem__(self, ix) -> complex:
        return self._entries.get(as_index(ix), 0j)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[tuple]:
        return iter(sorted(self._entries))

    def __add__(self, other: "FinVec") -> "FinVec":
        if not isinstance(other, FinVec):
            return NotImplemented
        if other._rank != self._rank:
            raise RankMismatch(f"rank {self._rank} vs {other._rank}")
        data = dict(self._entries)
        for ix, a in other._entries.items():
            data[ix] = data.get(ix, 0j) + a
        return FinVec(data, rank=self._rank)

    def __sub__(self, other: "FinVec") -> "FinVec":
        if not isinstance(other, FinVec):
            return NotImplemented
        if other._rank != self._rank:
            raise RankMismatch(f"rank {self._rank} vs {other._rank}")
        data = dict(self._entries)
        for ix, a in other._entries.items():
            data[ix] = data.get(ix, 0j) - a
        return FinVec(data, rank=self._rank)

    def __mul__(self, alpha) -> "FinVec":
        alpha = complex(alpha)
        return FinVec({ix: alpha * a for ix, a in self._entries.items()}, rank=self._rank)

    __rmul__ = __mul__

    def __truediv__(self, alpha) -> "FinVec":
        return self * (1.0 / complex(alpha))

    def __neg__(self) -> "FinVec":
        return FinVec({ix: -a for ix, a in self._entries.items()}, rank=self._rank)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinVec):
            return NotImplemented
        return self._rank == other._rank and self._entries == other._entries

    def __repr__(self) -> str:
        parts = [f"{ix}: {a}" for ix, a in self.items()[:6]]
        if len(self._entries) > 6:
            parts.append("...")
        return f"FinVec(rank={self._rank}, {{{', '.join(parts)}}})"

    def inner(self, other: "FinVec") -> complex:
        """<self, other>, linear in self and conjugate-linear in other."""
        if other._rank != self._rank:
            raise RankMismatch(f"rank {self._rank} vs {other._rank}")
        if len(self._entries) <= len(other._entries):
            small, big, swap = self._entries, other._entries, False
        else:
            small, big, swap = other._entries, self._entries, True
        acc = 0j
        for ix in sorted(small):
            b = big.get(ix)
            if b is not None:
                a = small[ix]
                acc += (a * b.conjugate()) if not swap else (b * a.conjugate())
        return acc

    def norm_sq(self) -> float:
        """Squared norm, accumulated in real arithmetic (no imaginary residue)."""
        return math.fsum(a.real * a.real + a.imag * a.imag for a in self._entries.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def prune(self, eps: float) -> "FinVec":
        """Drop entries with magnitude <= eps.  Optional; never applied implicitly."""
        return FinVec({ix: a for ix, a in self._entries.items() if abs(a) > eps},
                      rank=self._rank)


def unit(ix, rank: int | None = None) -> FinVec:
    """Basis vector with amplitude 1 at the given index."""
    ix = as_index(ix)
    if rank is not None and len(ix) != rank:
        raise RankMismatch(f"index {ix} has rank {len(ix)}, expected {rank}")
    return FinVec({ix: 1.0 + 0j})


def zero(rank: int) -> FinVec:
    return FinVec((), rank=rank)


def inner(u: FinVec, v: FinVec) -> complex:
    """Inner product, linear in ``u`` and conjugate-linear in ``v``."""
    return u.inner(v)


def norm(u: FinVec) -> float:
    return u.norm()


def orthonormalize(vs: Iterable[FinVec], tol: float = 1e-10) -> list[FinVec]:
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Returns an orthonormal list spanning the same subspace.  Vectors whose
    residual after projection is below ``tol`` times the largest input norm
    are dropped as linearly dependent.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    vs = list(vs)
    if not vs:
        return []
    scale = max(v.norm() for v in vs)
    if scale == 0.0:
        return []
    basis: list[FinVec] = []
    for v in vs:
        w = v
        for q in basis:
            w = w - w.inner(q) * q
        for q in basis:
            w = w - w.inner(q) * q
        nw = w.norm()
        if nw >= tol * scale:
            basis.append((1.0 / nw) * w)
    return basis
