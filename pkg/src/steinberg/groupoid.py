"""Finite discrete groupoids and their convolution (Steinberg) algebras.

A finite groupoid with the discrete topology is ample: every singleton is a
compact open bisection, the isotropy equals its own interior and every subset
of units is clopen.  An algebra element is therefore just a coefficient per
morphism, and products are computed from the composition table.

Convention: ``compose(g1, g2)`` is defined iff ``range(g2) == source(g1)``;
``g2`` acts first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import linalg
from .linalg import Subspace
from .scalars import Raw, RingError, RingSpec, Scalar


class GroupoidError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroupoid:
    names: Tuple[str, ...]
    units: frozenset
    source: Tuple[int, ...]
    range: Tuple[int, ...]
    inverse: Tuple[int, ...]
    table: Dict[Tuple[int, int], int] = field(hash=False, compare=False)

    def __post_init__(self):
        m = len(self.names)
        ok = (
            len(self.source) == len(self.range) == len(self.inverse) == m
            and all(0 <= u < m for u in self.units)
            and all(0 <= i < m for i in (*self.source, *self.range, *self.inverse))
            and all(0 <= i < m for key in self.table for i in (*key, self.table[key]))
        )
        if not ok:
            raise GroupoidError("malformed table")
        if len(set(self.names)) != m:
            raise GroupoidError("malformed table: duplicate morphism names")

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (self.names, self.units, self.source, self.range, self.inverse, self.table) == (
            other.names, other.units, other.source, other.range, other.inverse, other.table)

    def __hash__(self):
        return hash((self.names, self.source, self.range))

    @cached_property
    def index(self) -> Dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    @cached_property
    def sorted_units(self) -> List[int]:
        return sorted(self.units)

    def compose(self, g1: int, g2: int) -> Optional[int]:
        return self.table.get((g1, g2))

    @cached_property
    def triples(self) -> List[Tuple[int, int, int]]:
        """All ``(g1, g2, g1 g2)``, sorted."""
        return sorted((a, b, c) for (a, b), c in self.table.items())

    @cached_property
    def _left(self) -> Dict[int, List[Tuple[int, int]]]:
        # g1 -> [(g2, g1 g2)]
        out: Dict[int, List[Tuple[int, int]]] = {g: [] for g in range(len(self))}
        for a, b, c in self.triples:
            out[a].append((b, c))
        return out

    @cached_property
    def _right(self) -> Dict[int, List[Tuple[int, int]]]:
        # g2 -> [(g1, g1 g2)]
        out: Dict[int, List[Tuple[int, int]]] = {g: [] for g in range(len(self))}
        for a, b, c in self.triples:
            out[b].append((a, c))
        return out

    # -- I/O --------------------------------------------------------------

    @classmethod
    def from_tables(cls, names: Sequence[str], units: Iterable[int], source, range_, inverse,
                    table: Dict[Tuple[int, int], int]) -> FiniteGroupoid:
        return cls(tuple(names), frozenset(units), tuple(source), tuple(range_), tuple(inverse),
                   dict(table))

    @classmethod
    def from_json(cls, data: dict) -> FiniteGroupoid:
        """Build from the groupoid file schema.

        Units are implicit morphisms with src = dst = inv = self.  The unit
        laws ``r(g) g = g = g s(g)`` are filled in when the file omits them.
        """
        try:
            unit_names = list(data["units"])
            morph = list(data.get("morphisms", []))
            names = unit_names + [m["name"] for m in morph]
            index = {n: i for i, n in enumerate(names)}
            if len(index) != len(names):
                raise GroupoidError("malformed table: duplicate morphism names")
            m = len(names)
            source = list(range(len(unit_names))) + [None] * len(morph)
            range_ = list(range(len(unit_names))) + [None] * len(morph)
            inverse = list(range(len(unit_names))) + [None] * len(morph)
            for k, entry in enumerate(morph):
                i = len(unit_names) + k
                source[i] = index[entry["src"]]
                range_[i] = index[entry["dst"]]
                inverse[i] = index[entry["inv"]]
            table = {}
            for left, right, result in data.get("compose", []):
                table[(index[left], index[right])] = index[result]
        except KeyError as exc:
            raise GroupoidError(f"malformed table: unknown or missing name {exc}") from None
        except (TypeError, ValueError) as exc:
            raise GroupoidError(f"malformed table: {exc}") from None
        for g in range(m):
            table.setdefault((range_[g], g), g)
            table.setdefault((g, source[g]), g)
        return cls.from_tables(names, range(len(unit_names)), source, range_, inverse, table)

    def to_json(self) -> dict:
        units = self.sorted_units
        return {
            "units": [self.names[u] for u in units],
            "morphisms": [
                {"name": self.names[g], "src": self.names[self.source[g]],
                 "dst": self.names[self.range[g]], "inv": self.names[self.inverse[g]]}
                for g in range(len(self)) if g not in self.units
            ],
            "compose": [[self.names[a], self.names[b], self.names[c]] for a, b, c in self.triples
                        if a not in self.units and b not in self.units],
        }

    @classmethod
    def load(cls, path) -> FiniteGroupoid:
        with open(path) as fh:
            return cls.from_json(json.load(fh))


# -- validation ----------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    axiom: str = ""
    witness: Tuple[int, ...] = ()

    def to_json(self, g: Optional[FiniteGroupoid] = None) -> dict:
        w = [g.names[i] for i in self.witness] if g is not None else list(self.witness)
        out = {"valid": self.ok}
        if not self.ok:
            out.update(axiom=self.axiom, witness=w)
        return out


def validate_groupoid(g: FiniteGroupoid) -> ValidationReport:
    """Check the groupoid axioms; report the first violation with a witness."""
    m = len(g)
    s, r, inv = g.source, g.range, g.inverse
    for u in g.sorted_units:
        if not (s[u] == r[u] == inv[u] == u):
            return ValidationReport(False, "unit is its own source, range and inverse", (u,))
    for x in range(m):
        if s[x] not in g.units or r[x] not in g.units:
            return ValidationReport(False, "source and range are units", (x,))
    for (a, b), c in sorted(g.table.items()):
        if r[b] != s[a]:
            return ValidationReport(False, "composition defined only when r(g2) = s(g1)", (a, b))
        if s[c] != s[b] or r[c] != r[a]:
            return ValidationReport(False, "s(g1 g2) = s(g2) and r(g1 g2) = r(g1)", (a, b))
    for a in range(m):
        for b in range(m):
            if r[b] == s[a] and (a, b) not in g.table:
                return ValidationReport(False, "composition defined when r(g2) = s(g1)", (a, b))
    for x in range(m):
        if g.compose(r[x], x) != x or g.compose(x, s[x]) != x:
            return ValidationReport(False, "units are identities", (x,))
    for x in range(m):
        y = inv[x]
        if inv[y] != x:
            return ValidationReport(False, "inverse is an involution", (x,))
        if g.compose(y, x) != s[x] or g.compose(x, y) != r[x]:
            return ValidationReport(False, "s(g) = g^-1 g and r(g) = g g^-1", (x,))
    for a, b, ab in g.triples:
        for c, bc in g._left[b]:
            if g.compose(ab, c) != g.compose(a, bc):
                return ValidationReport(False, "associativity", (a, b, c))
    return ValidationReport(True)


# -- structure -------------------------------------------------------------


def isotropy(g: FiniteGroupoid) -> List[int]:
    """Morphisms with equal source and range (all of Iso(G), which is open here)."""
    return [x for x in range(len(g)) if g.source[x] == g.range[x]]


def isotropy_group(g: FiniteGroupoid, u: int) -> List[int]:
    return [x for x in range(len(g)) if g.source[x] == g.range[x] == u]


def check_iso_abelian(g: FiniteGroupoid) -> bool:
    for u in g.sorted_units:
        group = isotropy_group(g, u)
        for a in group:
            for b in group:
                if g.compose(a, b) != g.compose(b, a):
                    return False
    return True


def is_invariant(g: FiniteGroupoid, subset: Iterable[int]) -> bool:
    u = set(subset)
    return all((g.source[x] in u) == (g.range[x] in u) for x in range(len(g)))


def orbits(g: FiniteGroupoid) -> List[List[int]]:
    """Units grouped into orbits (connected components), ordered by least member."""
    parent = {u: u for u in g.units}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for x in range(len(g)):
        a, b = find(g.source[x]), find(g.range[x])
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: Dict[int, List[int]] = {}
    for u in g.sorted_units:
        groups.setdefault(find(u), []).append(u)
    return [groups[k] for k in sorted(groups)]


def invariant_subsets(g: FiniteGroupoid) -> List[frozenset]:
    """Every invariant unit subset, i.e. every union of orbits."""
    orbs = orbits(g)
    out = []
    for mask in range(1 << len(orbs)):
        out.append(frozenset(u for i, o in enumerate(orbs) if mask >> i & 1 for u in o))
    return out


def _check_subset(g: FiniteGroupoid, subset: Iterable[int]) -> frozenset:
    u = frozenset(subset)
    if not u <= g.units:
        raise GroupoidError("unit subset contains non-units")
    return u


def complement_morphisms(g: FiniteGroupoid, subset: Iterable[int]) -> List[int]:
    u = _check_subset(g, subset)
    return [x for x in range(len(g)) if g.source[x] not in u]


def restrict_to_complement(g: FiniteGroupoid, subset: Iterable[int]) -> FiniteGroupoid:
    """The full subgroupoid on the units outside an invariant subset."""
    u = _check_subset(g, subset)
    if not is_invariant(g, u):
        raise GroupoidError("subset not invariant")
    keep = complement_morphisms(g, u)
    new = {old: i for i, old in enumerate(keep)}
    table = {(new[a], new[b]): new[c] for (a, b), c in g.table.items() if a in new and b in new}
    return FiniteGroupoid.from_tables(
        [g.names[x] for x in keep],
        [new[x] for x in keep if x in g.units],
        [new[g.source[x]] for x in keep],
        [new[g.range[x]] for x in keep],
        [new[g.inverse[x]] for x in keep],
        table,
    )


def set_product(g: FiniteGroupoid, a: Iterable[int], b: Iterable[int]) -> frozenset:
    """The product set ``AB = {a b : r(b) = s(a)}``."""
    bs = set(b)
    return frozenset(c for x in a for y, c in g._left[x] if y in bs)


# -- the convolution algebra ----------------------------------------------


class AlgebraElement:
    """A function from morphisms to the ring, i.e. ``sum r_g 1_{g}``."""

    __slots__ = ("groupoid", "ring", "coeffs")

    def __init__(self, groupoid: FiniteGroupoid, ring: RingSpec, coeffs: Sequence):
        if len(coeffs) != len(groupoid):
            raise GroupoidError("coefficient vector has the wrong length")
        self.groupoid = groupoid
        self.ring = ring
        self.coeffs: Tuple[Raw, ...] = tuple(ring.coerce(c) for c in coeffs)

    @classmethod
    def zero(cls, g: FiniteGroupoid, ring: RingSpec) -> AlgebraElement:
        return cls(g, ring, [ring.zero] * len(g))

    @classmethod
    def indicator(cls, g: FiniteGroupoid, ring: RingSpec, support: Iterable[int]) -> AlgebraElement:
        c = [ring.zero] * len(g)
        for x in support:
            c[x] = ring.one
        return cls(g, ring, c)

    @classmethod
    def identity(cls, g: FiniteGroupoid, ring: RingSpec) -> AlgebraElement:
        return cls.indicator(g, ring, g.units)

    @classmethod
    def from_sparse(cls, g: FiniteGroupoid, ring: RingSpec, vec: Dict[int, Raw]) -> AlgebraElement:
        return cls(g, ring, linalg.sparse_to_dense(vec, len(g), ring))

    def sparse(self) -> Dict[int, Raw]:
        return linalg.dense_to_sparse(self.coeffs)

    def support(self) -> List[int]:
        return [i for i, c in enumerate(self.coeffs) if c != 0]

    def coefficient(self, x: int) -> Scalar:
        return Scalar(self.ring, self.coeffs[x])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _same(self, other: AlgebraElement):
        if self.ring != other.ring:
            raise RingError("ring mismatch")
        if self.groupoid is not other.groupoid and self.groupoid != other.groupoid:
            raise GroupoidError("groupoid mismatch")

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._same(other)
        add = self.ring.add
        return AlgebraElement(self.groupoid, self.ring,
                              [add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        self._same(other)
        sub = self.ring.sub
        return AlgebraElement(self.groupoid, self.ring,
                              [sub(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.groupoid, self.ring, [self.ring.neg(a) for a in self.coeffs])

    def scale(self, r) -> AlgebraElement:
        r = self.ring.coerce(r)
        return AlgebraElement(self.groupoid, self.ring, [self.ring.mul(r, a) for a in self.coeffs])

    def __mul__(self, other: AlgebraElement) -> AlgebraElement:
        return convolve(self, other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (self.ring == other.ring and self.coeffs == other.coeffs
                and (self.groupoid is other.groupoid or self.groupoid == other.groupoid))

    __hash__ = None

    def __repr__(self):
        names = self.groupoid.names
        terms = [f"{c}*{names[i]}" for i, c in enumerate(self.coeffs) if c != 0]
        return "AlgebraElement(" + (" + ".join(terms) or "0") + ")"


def convolve(f1: AlgebraElement, f2: AlgebraElement) -> AlgebraElement:
    """``(f1 f2)(g) = sum over g = g1 g2 of f1(g1) f2(g2)``."""
    f1._same(f2)
    ring = f1.ring
    out = [ring.zero] * len(f1.groupoid)
    a_c, b_c = f1.coeffs, f2.coeffs
    for a, b, c in f1.groupoid.triples:
        x, y = a_c[a], b_c[b]
        if x and y:
            out[c] = ring.add(out[c], ring.mul(x, y))
    return AlgebraElement(f1.groupoid, ring, out)


def _left_basis_mul(g: FiniteGroupoid, ring: RingSpec, x: int, vec: Dict[int, Raw]) -> Dict[int, Raw]:
    """``1_{x} * vec`` on sparse vectors."""
    out: Dict[int, Raw] = {}
    for b, c in g._left[x]:
        v = vec.get(b)
        if v:
            out[c] = v
    return out


def _right_basis_mul(g: FiniteGroupoid, ring: RingSpec, vec: Dict[int, Raw], x: int) -> Dict[int, Raw]:
    out: Dict[int, Raw] = {}
    for a, c in g._right[x]:
        v = vec.get(a)
        if v:
            out[c] = v
    return out


def _commutator_rows(g: FiniteGroupoid, ring: RingSpec, b: AlgebraElement) -> Dict[int, Dict[int, Raw]]:
    """Rows of the linear map ``x -> x b - b x``, one per output morphism."""
    rows: Dict[int, Dict[int, Raw]] = {}
    bc = b.coeffs
    for a, k, c in g.triples:
        v = bc[k]
        if v:  # x_a b_k contributes to c = a k
            row = rows.setdefault(c, {})
            row[a] = ring.add(row.get(a, ring.zero), v)
        v = bc[a]
        if v:  # b_a x_k contributes with a minus sign
            row = rows.setdefault(c, {})
            row[k] = ring.sub(row.get(k, ring.zero), v)
    return rows


def span(g: FiniteGroupoid, ring: RingSpec, elements: Iterable[AlgebraElement]) -> Subspace:
    linalg.require_field(ring, "span")
    return Subspace(ring, len(g), (e.sparse() for e in elements))


def coordinate_span(g: FiniteGroupoid, ring: RingSpec, support: Iterable[int]) -> Subspace:
    linalg.require_field(ring, "span")
    return Subspace(ring, len(g), ({x: ring.one} for x in support))


def centraliser_subspace(g: FiniteGroupoid, ring: RingSpec,
                         spanning: Iterable[AlgebraElement]) -> Subspace:
    if not ring.is_field:
        raise RingError("centraliser solver requires a field")
    rows = []
    for b in spanning:
        if b.groupoid != g or b.ring != ring:
            raise GroupoidError("spanning element over a different groupoid or ring")
        rows.extend(r for r in _commutator_rows(g, ring, b).values() if r)
    return linalg.nullspace(ring, (r for r in rows), len(g))


def is_subalgebra(g: FiniteGroupoid, ring: RingSpec, space: Subspace) -> bool:
    basis = [AlgebraElement.from_sparse(g, ring, v) for v in space.basis()]
    return all(space.contains(convolve(a, b).sparse()) for a in basis for b in basis)


def centraliser_of_span(g: FiniteGroupoid, ring: RingSpec, spanning: Iterable[AlgebraElement],
                        check: bool = True) -> List[AlgebraElement]:
    """Echelon basis of ``{a : a b = b a for every b in spanning}``."""
    space = centraliser_subspace(g, ring, spanning)
    if check and not is_subalgebra(g, ring, space):
        raise AssertionError("centraliser is not closed under convolution")
    return [AlgebraElement.from_sparse(g, ring, v) for v in space.basis()]


def unit_indicators(g: FiniteGroupoid, ring: RingSpec, subset: Iterable[int]) -> List[AlgebraElement]:
    return [AlgebraElement.indicator(g, ring, [u]) for u in sorted(subset)]


# -- the centraliser theorem ----------------------------------------------


@dataclass
class TheoremReport:
    holds: Optional[bool]
    lhs_dim: int
    rhs_dim: int
    invariant: bool = True
    witness: Optional[Dict[str, str]] = None
    side: str = ""

    def to_json(self) -> dict:
        out = {"holds": self.holds, "lhs_dim": self.lhs_dim, "rhs_dim": self.rhs_dim}
        if not self.invariant:
            out["invariant"] = False
        if self.witness is not None:
            out["witness"] = self.witness
            out["witness_side"] = self.side
        return out


def _named(g: FiniteGroupoid, vec: Dict[int, Raw]) -> Dict[str, str]:
    return {g.names[i]: str(v) for i, v in sorted(vec.items())}


def theorem_sides(g: FiniteGroupoid, subset: Iterable[int], ring: RingSpec) -> Tuple[Subspace, Subspace]:
    """(centraliser of A(U), span of Iso indicators + complement indicators)."""
    u = _check_subset(g, subset)
    lhs = centraliser_subspace(g, ring, unit_indicators(g, ring, u))
    rhs = coordinate_span(g, ring, sorted(set(isotropy(g)) | set(complement_morphisms(g, u))))
    return lhs, rhs


def verify_centraliser_theorem(g: FiniteGroupoid, subset: Iterable[int], ring: RingSpec,
                               force: bool = False) -> TheoremReport:
    """Compare both sides of ``C(A(U)) = A(Iso) + A(G restricted off U)``.

    With ``force`` a non-invariant subset is accepted; both sides are still
    computed and compared but ``holds`` is left as None (nothing asserted).
    """
    u = _check_subset(g, subset)
    if not ring.is_field:
        raise RingError("centraliser solver requires a field")
    invariant = is_invariant(g, u)
    if not invariant and not force:
        raise GroupoidError("subset not invariant")
    lhs, rhs = theorem_sides(g, u, ring)
    report = TheoremReport(None, lhs.dim, rhs.dim, invariant)
    w = lhs.witness_outside(rhs)
    side = "lhs"
    if w is None:
        w, side = rhs.witness_outside(lhs), "rhs"
    if w is not None:
        report.witness, report.side = _named(g, w), side
    if invariant:
        report.holds = w is None
    return report


def is_commutative_span(g: FiniteGroupoid, ring: RingSpec, spanning: Sequence[AlgebraElement]) -> bool:
    return all(convolve(a, b) == convolve(b, a) for i, a in enumerate(spanning) for b in spanning[i + 1:])


def is_maximal_commutative(g: FiniteGroupoid, ring: RingSpec, spanning: Sequence[AlgebraElement]) -> bool:
    """True iff the span of a commutative subalgebra equals its own centraliser."""
    if not ring.is_field:
        raise RingError("centraliser solver requires a field")
    spanning = list(spanning)
    if not is_commutative_span(g, ring, spanning):
        raise GroupoidError("input not commutative")
    space = span(g, ring, spanning)
    if not is_subalgebra(g, ring, space):
        raise GroupoidError("input span is not a subalgebra")
    return centraliser_subspace(g, ring, spanning) == space


# -- ideals and the core -----------------------------------------------------


def ideal_closure(g: FiniteGroupoid, ring: RingSpec, generators: Iterable[AlgebraElement]) -> Subspace:
    """Two-sided ideal generated by ``generators``, as a subspace."""
    linalg.require_field(ring, "ideal closure")
    ideal = Subspace(ring, len(g))
    frontier = []
    for f in generators:
        v = f.sparse()
        if ideal.add(v):
            frontier.append(v)
    while frontier:
        new = []
        for v in frontier:
            for x in range(len(g)):
                for w in (_left_basis_mul(g, ring, x, v), _right_basis_mul(g, ring, v, x)):
                    if w and ideal.add(w):
                        new.append(w)
        frontier = new
    return ideal


@dataclass
class InjectivityReport:
    ideal_dim: int
    ideal_core_dim: int

    @property
    def injective(self) -> bool:
        return self.ideal_dim == 0

    @property
    def core_injective(self) -> bool:
        return self.ideal_core_dim == 0

    @property
    def agree(self) -> bool:
        return self.injective == self.core_injective

    def to_json(self) -> dict:
        return {"injective": self.injective, "core_injective": self.core_injective,
                "agree": self.agree, "ideal_dim": self.ideal_dim,
                "ideal_core_dim": self.ideal_core_dim}


def core_injectivity_check(g: FiniteGroupoid, ring: RingSpec,
                           ideal_generators: Iterable[AlgebraElement]) -> InjectivityReport:
    """Is the quotient by the generated ideal injective, and is it on the core?"""
    if not ring.is_field:
        raise RingError("ideal closure requires a field")
    ideal = ideal_closure(g, ring, ideal_generators)
    core = coordinate_span(g, ring, isotropy(g))
    return InjectivityReport(ideal.dim, ideal.intersection_dim(core))
