"""Sparse exact linear algebra over a field.

Vectors are dicts ``{column: nonzero raw value}``.  A :class:`Subspace` keeps
its basis in reduced row echelon form, so two subspaces are equal exactly when
their stored bases are equal, and the basis is independent of the order in
which vectors were inserted.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence

from .scalars import Raw, RingError, RingSpec

SparseVec = Dict[int, Raw]


def require_field(ring: RingSpec, what: str = "linear solver") -> None:
    if not ring.is_field:
        raise RingError(f"{what} requires a field")


def dense_to_sparse(values: Sequence[Raw]) -> SparseVec:
    return {i: v for i, v in enumerate(values) if v != 0}


def sparse_to_dense(vec: SparseVec, n: int, ring: RingSpec) -> List[Raw]:
    out = [ring.zero] * n
    for i, v in vec.items():
        out[i] = v
    return out


def axpy(ring: RingSpec, y: SparseVec, a: Raw, x: SparseVec) -> None:
    """In place ``y += a*x``."""
    for k, xv in x.items():
        v = ring.add(y.get(k, ring.zero), ring.mul(a, xv))
        if v == 0:
            y.pop(k, None)
        else:
            y[k] = v


class Subspace:
    """A subspace of ``ring**n`` with a reduced echelon basis."""

    def __init__(self, ring: RingSpec, n: int, vectors: Iterable[SparseVec] = ()):
        require_field(ring)
        self.ring = ring
        self.n = n
        self._rows: Dict[int, SparseVec] = {}  # pivot column -> row, pivot entry 1
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self._rows)

    def basis(self) -> List[SparseVec]:
        return [dict(sorted(self._rows[p].items())) for p in self.pivots]

    def reduce(self, vec: SparseVec) -> SparseVec:
        """Remainder of ``vec`` after clearing every pivot column."""
        r = {k: v for k, v in vec.items() if v != 0}
        ring = self.ring
        for p in [c for c in r if c in self._rows]:
            a = r.get(p)
            if a:
                axpy(ring, r, ring.neg(a), self._rows[p])
        return r

    def contains(self, vec: SparseVec) -> bool:
        return not self.reduce(vec)

    __contains__ = contains

    def add(self, vec: SparseVec) -> bool:
        """Insert ``vec``; return True when the dimension grew."""
        r = self.reduce(vec)
        if not r:
            return False
        ring = self.ring
        p = min(r)
        scale = ring.inv(r[p])
        r = {k: ring.mul(scale, v) for k, v in r.items()}
        for row in self._rows.values():
            a = row.get(p)
            if a:
                axpy(ring, row, ring.neg(a), r)
        self._rows[p] = r
        return True

    def copy(self) -> Subspace:
        other = Subspace(self.ring, self.n)
        other._rows = {p: dict(r) for p, r in self._rows.items()}
        return other

    def __add__(self, other: Subspace) -> Subspace:
        out = self.copy()
        for v in other._rows.values():
            out.add(v)
        return out

    def issubspace(self, other: Subspace) -> bool:
        return all(other.contains(v) for v in self._rows.values())

    def witness_outside(self, other: Subspace) -> Optional[SparseVec]:
        """A basis vector of ``self`` not lying in ``other``, if any."""
        for p in self.pivots:
            if not other.contains(self._rows[p]):
                return dict(sorted(self._rows[p].items()))
        return None

    def intersection_dim(self, other: Subspace) -> int:
        return self.dim + other.dim - (self + other).dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ring, self.n) == (other.ring, other.n) and self.basis() == other.basis()

    def __repr__(self):
        return f"Subspace(dim={self.dim}, n={self.n}, ring={self.ring})"


def nullspace(ring: RingSpec, rows: Iterable[SparseVec], n: int) -> Subspace:
    """Solution space of the homogeneous system given by ``rows`` in ``n`` unknowns."""
    eqs = Subspace(ring, n, rows)
    kernel = Subspace(ring, n)
    pivots = eqs._rows
    for free in range(n):
        if free in pivots:
            continue
        v = {free: ring.one}
        for p, row in pivots.items():
            a = row.get(free)
            if a:
                v[p] = ring.neg(a)
        kernel.add(v)
    return kernel


def solve(ring: RingSpec, columns: Sequence[SparseVec], target: SparseVec) -> Optional[List[Raw]]:
    """Find coefficients ``c`` with ``sum c[j]*columns[j] == target``, or None.

    Free variables are set to zero, so the answer is deterministic.
    """
    require_field(ring)
    k = len(columns)
    # one equation per coordinate; unknowns 0..k-1, right-hand side at column k
    coords = sorted(set(target).union(*[c.keys() for c in columns]))
    system = Subspace(ring, k + 1)
    for coord in coords:
        eq = {j: c[coord] for j, c in enumerate(columns) if coord in c}
        t = target.get(coord)
        if t:
            eq[k] = ring.neg(t)
        if eq:
            system.add(eq)
    if k in system._rows:
        return None
    sol = [ring.zero] * k
    for p, row in system._rows.items():
        t = row.get(k)
        if t:
            sol[p] = ring.neg(t)
    return sol
