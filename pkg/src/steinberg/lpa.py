"""Leavitt path algebras of finite graphs in rewriting normal form.

Every element is a combination of monomials ``alpha beta*`` with
``r(alpha) == r(beta)``.  The relation ``v = sum_{s(e)=v} e e*`` at a regular
vertex ``v`` is oriented as

    (a' g)(b' g)*  ->  a' b'*  -  sum_{f != g, s(f) = v} (a' f)(b' f)*

where ``g`` is the special edge of ``v``.  A monomial is in normal form when
its two paths do not both end in the same special edge; those monomials form
a basis of the algebra.
"""

from __future__ import annotations

import contextlib
import contextvars
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import linalg
from .graph import (Graph, Path, cycles_without_exit, enumerate_paths, max_cycle_length,
                    simple_cycles)
from .scalars import RATIONALS, Raw, RingError, RingSpec


class LpaError(ValueError):
    pass


@dataclass(frozen=True)
class Monomial:
    """``alpha beta*``; vertices are trivial paths."""

    alpha: Path
    beta: Path

    def __post_init__(self):
        if self.alpha.end != self.beta.end:
            raise LpaError(f"monomial [{self.alpha};{self.beta}] has mismatched ranges")

    @property
    def degree(self) -> int:
        return len(self.alpha) + len(self.beta)

    @property
    def weight(self) -> int:
        return len(self.alpha) - len(self.beta)

    @property
    def key(self):
        return (self.degree, self.alpha.key, self.beta.key)

    def __str__(self):
        return f"[{self.alpha};{self.beta}]"


def vertex_monomial(g: Graph, v: str) -> Monomial:
    p = g.vertex_path(v)
    return Monomial(p, p)


def edge_monomial(g: Graph, e: str) -> Monomial:
    return Monomial(g.path(e), g.vertex_path(g.edge(e).dst))


def ghost_monomial(g: Graph, e: str) -> Monomial:
    return Monomial(g.vertex_path(g.edge(e).dst), g.path(e))


# -- rewriting ----------------------------------------------------------------

_MUTATION: contextvars.ContextVar[Optional[str]] = contextvars.ContextVar("lpa_mutation", default=None)

MUTATIONS = ("drop-ck2-sum", "wrong-sign")


@contextlib.contextmanager
def mutated_rewrite(kind: str):
    """Deliberately break the CK2 rewrite (negative control for the test suites)."""
    if kind not in MUTATIONS:
        raise ValueError(f"unknown mutation {kind!r}")
    token = _MUTATION.set(kind)
    try:
        yield
    finally:
        _MUTATION.reset(token)


def rewrite_step(g: Graph, m: Monomial) -> Optional[List[Tuple[int, Monomial]]]:
    """One application of the oriented CK2 rule, or None if ``m`` is normal."""
    a, b = m.alpha, m.beta
    last = a.last
    if last is None or last != b.last or last not in g.special_edge_set:
        return None
    v = g.edge(last).src
    a1 = Path(a.start, v, a.edges[:-1])
    b1 = Path(b.start, v, b.edges[:-1])
    out = [(1, Monomial(a1, b1))]
    mutation = _MUTATION.get()
    if mutation == "drop-ck2-sum":
        return out
    sign = 1 if mutation == "wrong-sign" else -1
    for f in g.out_edges(v):
        if f != last:
            out.append((sign, Monomial(g.extend(a1, f), g.extend(b1, f))))
    return out


def is_normal(g: Graph, m: Monomial) -> bool:
    return rewrite_step(g, m) is None


@lru_cache(maxsize=1 << 16)
def _monomial_nf(g: Graph, m: Monomial, mutation: Optional[str]) -> Tuple[Tuple[int, Monomial], ...]:
    step = rewrite_step(g, m)
    if step is None:
        return ((1, m),)
    (_, head), *rest = step
    return _monomial_nf(g, head, mutation) + tuple(rest)


def _collect(ring: RingSpec, terms: Iterable[Tuple[Raw, Monomial]]) -> Dict[Monomial, Raw]:
    acc: Dict[Monomial, Raw] = {}
    for c, m in terms:
        acc[m] = ring.add(acc.get(m, ring.zero), c)
    return {m: c for m, c in acc.items() if c != 0}


def normalize(terms: Iterable[Tuple[object, Monomial]], g: Graph, ring: RingSpec,
              rng: Optional[random.Random] = None) -> LpaElement:
    """Rewrite a raw list of ``(coefficient, monomial)`` pairs to normal form.

    With ``rng`` the redexes are rewritten one step at a time in random order
    and like terms are merged at random moments; the result must not depend
    on those choices.
    """
    raw = [(ring.coerce(c), m) for c, m in terms]
    if rng is None:
        mutation = _MUTATION.get()
        expanded = ((ring.mul(c, ring.coerce(s)), n) for c, m in raw
                    for s, n in _monomial_nf(g, m, mutation))
        return LpaElement(g, ring, _collect(ring, expanded))
    work = list(raw)
    while True:
        redexes = [i for i, (_, m) in enumerate(work) if not is_normal(g, m)]
        if not redexes:
            break
        i = rng.choice(redexes)
        c, m = work.pop(i)
        for s, n in rewrite_step(g, m):
            work.insert(rng.randrange(len(work) + 1), (ring.mul(c, ring.coerce(s)), n))
        if rng.random() < 0.25:
            work = [(c, m) for m, c in _collect(ring, work).items()]
            rng.shuffle(work)
    return LpaElement(g, ring, _collect(ring, work))


def multiply_raw(m1: Monomial, m2: Monomial) -> Optional[Monomial]:
    """``(a b*)(c d*)`` before normalisation, using ``e* f = delta_{e,f} r(e)``."""
    a, b = m1.alpha, m1.beta
    c, d = m2.alpha, m2.beta
    if c.startswith(b):
        return Monomial(a + c.drop_prefix(b), d)
    if b.startswith(c):
        return Monomial(a, d + b.drop_prefix(c))
    return None


def multiply_monomials(m1: Monomial, m2: Monomial, g: Graph, ring: RingSpec = RATIONALS) -> LpaElement:
    m = multiply_raw(m1, m2)
    return normalize([] if m is None else [(ring.one, m)], g, ring)


# -- elements -------------------------------------------------------------------


class LpaElement:
    """A normal-form element of ``L_R(E)``; terms are kept in canonical order."""

    __slots__ = ("graph", "ring", "terms", "_hash")

    def __init__(self, graph: Graph, ring: RingSpec, terms: Dict[Monomial, Raw]):
        self.graph = graph
        self.ring = ring
        self.terms: Dict[Monomial, Raw] = dict(sorted(terms.items(), key=lambda t: t[0].key))
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, g: Graph, ring: RingSpec = RATIONALS) -> LpaElement:
        return cls(g, ring, {})

    @classmethod
    def from_monomial(cls, g: Graph, m: Monomial, ring: RingSpec = RATIONALS, coeff=1) -> LpaElement:
        return normalize([(coeff, m)], g, ring)

    @classmethod
    def vertex(cls, g: Graph, v: str, ring: RingSpec = RATIONALS) -> LpaElement:
        return cls(g, ring, {vertex_monomial(g, v): ring.one})

    @classmethod
    def edge(cls, g: Graph, e: str, ring: RingSpec = RATIONALS) -> LpaElement:
        return cls(g, ring, {edge_monomial(g, e): ring.one})

    @classmethod
    def ghost(cls, g: Graph, e: str, ring: RingSpec = RATIONALS) -> LpaElement:
        return cls(g, ring, {ghost_monomial(g, e): ring.one})

    @classmethod
    def identity(cls, g: Graph, ring: RingSpec = RATIONALS) -> LpaElement:
        return cls(g, ring, {vertex_monomial(g, v): ring.one for v in g.vertices})

    @classmethod
    def path_projection(cls, g: Graph, p: Path, ring: RingSpec = RATIONALS) -> LpaElement:
        """``p p*``, normalised."""
        return normalize([(ring.one, Monomial(p, p))], g, ring)

    # properties
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def weights(self) -> set:
        return {m.weight for m in self.terms}

    def _same(self, other: LpaElement):
        if self.ring != other.ring:
            raise RingError("ring mismatch")
        if self.graph is not other.graph and self.graph != other.graph:
            raise LpaError("graph mismatch")

    # arithmetic
    def __add__(self, other: LpaElement) -> LpaElement:
        self._same(other)
        return LpaElement(self.graph, self.ring,
                          _collect(self.ring, [(c, m) for m, c in self.terms.items()]
                                   + [(c, m) for m, c in other.terms.items()]))

    def __neg__(self) -> LpaElement:
        return LpaElement(self.graph, self.ring, {m: self.ring.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: LpaElement) -> LpaElement:
        return self + (-other)

    def scale(self, r) -> LpaElement:
        r = self.ring.coerce(r)
        return LpaElement(self.graph, self.ring,
                          {m: v for m, c in self.terms.items() if (v := self.ring.mul(r, c)) != 0})

    def __mul__(self, other: LpaElement) -> LpaElement:
        if not isinstance(other, LpaElement):
            return NotImplemented
        self._same(other)
        ring = self.ring
        raw = []
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = multiply_raw(m1, m2)
                if m is not None:
                    raw.append((ring.mul(c1, c2), m))
        return normalize(raw, self.graph, ring)

    def commutator(self, other: LpaElement) -> LpaElement:
        return self * other - other * self

    def __eq__(self, other):
        if not isinstance(other, LpaElement):
            return NotImplemented
        return (self.ring == other.ring and self.terms == other.terms
                and (self.graph is other.graph or self.graph == other.graph))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms.items():
            neg = self.ring.kind != "mod" and c < 0
            mag = -c if neg else c
            body = str(m) if mag == 1 else f"{mag}*{m}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"LpaElement({self})"


def lpa_add(x: LpaElement, y: LpaElement) -> LpaElement:
    return x + y


def lpa_mul(x: LpaElement, y: LpaElement) -> LpaElement:
    return x * y


def lpa_scale(r, x: LpaElement) -> LpaElement:
    return x.scale(r)


def power(g: Graph, cycle: Path, k: int, ring: RingSpec = RATIONALS) -> LpaElement:
    """``cycle**k`` for ``k >= 0`` and ``(cycle*)**(-k)`` for ``k < 0``."""
    base = g.vertex_path(cycle.start)
    p = base
    for _ in range(abs(k)):
        p = p + cycle
    m = Monomial(p, base) if k >= 0 else Monomial(base, p)
    return LpaElement.from_monomial(g, m, ring)


# -- spans, the diagonal and the core --------------------------------------------


def normal_basis(g: Graph, max_degree: int) -> List[Monomial]:
    """Normal-form monomials of degree at most ``max_degree``, canonically ordered."""
    by_end: Dict[str, List[Path]] = {}
    for p in enumerate_paths(g, max_degree):
        by_end.setdefault(p.end, []).append(p)
    out = []
    for ps in by_end.values():
        for a in ps:
            for b in ps:
                if len(a) + len(b) <= max_degree:
                    m = Monomial(a, b)
                    if is_normal(g, m):
                        out.append(m)
    out.sort(key=lambda m: m.key)
    return out


def _echelon(g: Graph, ring: RingSpec, elements: Sequence[LpaElement]) -> List[LpaElement]:
    """Reduced echelon basis of the span, columns ordered by monomial key."""
    monos = sorted({m for x in elements for m in x.terms}, key=lambda m: m.key)
    col = {m: i for i, m in enumerate(monos)}
    space = linalg.Subspace(ring, len(monos), ({col[m]: c for m, c in x.terms.items()} for x in elements))
    return [LpaElement(g, ring, {monos[i]: c for i, c in row.items()}) for row in space.basis()]


def _dedupe(elements: Iterable[LpaElement]) -> List[LpaElement]:
    seen, out = set(), []
    for x in elements:
        if not x.is_zero() and x not in seen:
            seen.add(x)
            out.append(x)
    return out


def _finish(g: Graph, ring: RingSpec, elements: List[LpaElement]) -> List[LpaElement]:
    return _echelon(g, ring, elements) if ring.is_field else _dedupe(elements)


@lru_cache(maxsize=256)
def _diagonal_generators(g: Graph, max_len: int, ring: RingSpec) -> Tuple[LpaElement, ...]:
    gens = [LpaElement.path_projection(g, p, ring) for p in enumerate_paths(g, max_len)]
    return tuple(_finish(g, ring, gens))


def diagonal_generators(g: Graph, max_len: int, ring: RingSpec = RATIONALS) -> List[LpaElement]:
    """``a a*`` for ``|a| <= max_len``, normalised; over a field, an echelon basis of their span."""
    return list(_diagonal_generators(g, max_len, ring))


def core_monomials(g: Graph, max_len: int) -> List[Monomial]:
    """Raw ``a b^k a*`` and ``a (b*)^k a*`` with ``b`` a cycle without exit, ``|a| + k|b| <= max_len``."""
    cycles: Dict[str, List[Path]] = {}
    for c in cycles_without_exit(g):
        cycles.setdefault(c.start, []).append(c)
    out = []
    for a in enumerate_paths(g, max_len):
        out.append(Monomial(a, a))
        for b in cycles.get(a.end, []):
            p = a
            while len(p) + len(b) <= max_len:
                p = p + b
                out.append(Monomial(p, a))
                out.append(Monomial(a, p))
    return out


@lru_cache(maxsize=256)
def _core_generators(g: Graph, max_len: int, ring: RingSpec) -> Tuple[LpaElement, ...]:
    gens = [LpaElement.from_monomial(g, m, ring) for m in core_monomials(g, max_len)]
    return tuple(_finish(g, ring, gens))


def core_generators(g: Graph, max_len: int, ring: RingSpec = RATIONALS) -> List[LpaElement]:
    """Spanning set of the core up to ``max_len`` (echelon basis over a field).

    Includes ``k = 0``, so the diagonal is contained in the core, and negative
    powers ``a (b*)^k a*``, without which the span would not be closed under
    the involution.
    """
    return list(_core_generators(g, max_len, ring))


def is_in_span(x: LpaElement, gens: Sequence[LpaElement], ring: Optional[RingSpec] = None
               ) -> Tuple[bool, Optional[List[Raw]]]:
    """Solve ``x = sum c_i gens_i``; return ``(found, coefficients)``."""
    ring = ring or x.ring
    if not ring.is_field:
        raise RingError("span membership requires a field")
    monos = sorted({m for y in (x, *gens) for m in y.terms}, key=lambda m: m.key)
    col = {m: i for i, m in enumerate(monos)}
    columns = [{col[m]: c for m, c in y.terms.items()} for y in gens]
    sol = linalg.solve(ring, columns, {col[m]: c for m, c in x.terms.items()})
    return sol is not None, sol


def core_weights_allowed(g: Graph, x: LpaElement) -> bool:
    """Cheap necessary condition for core membership via the weight grading."""
    lengths = {len(c) for c in cycles_without_exit(g)}
    return all(w == 0 or any(w % n == 0 for n in lengths) for w in x.weights())


def core_bound(x: LpaElement) -> int:
    return x.degree + max_cycle_length(x.graph)


def is_in_core(x: LpaElement) -> Tuple[bool, Optional[List[Raw]]]:
    if not x.ring.is_field:
        raise RingError("span membership requires a field")
    if not core_weights_allowed(x.graph, x):
        return False, None
    return is_in_span(x, core_generators(x.graph, core_bound(x), x.ring))


def diagonal_bound(x: LpaElement) -> int:
    return x.degree + len(x.graph.vertices) + 1


@lru_cache(maxsize=256)
def _projection_paths(g: Graph, bound: int) -> Tuple[Path, ...]:
    # a a* with a ending in a special edge is a combination of shorter ones
    return tuple(p for p in enumerate_paths(g, bound) if p.last not in g.special_edge_set)


def commutes_with_diagonal(x: LpaElement, bound: Optional[int] = None) -> Tuple[bool, Optional[Path]]:
    """Check ``[x, a a*] = 0`` for ``|a| <= bound``; return the first failing path."""
    g = x.graph
    if bound is None:
        bound = diagonal_bound(x)
    for p in _projection_paths(g, bound):
        proj = LpaElement(g, x.ring, {Monomial(p, p): x.ring.one})
        if x * proj != proj * x:
            return False, p
    return True, None


@dataclass
class DiagonalReport:
    commutes: bool
    in_core: bool
    witness: Optional[Path] = None
    bound: int = 0
    core_bound: int = 0
    certificate: Optional[List[Raw]] = field(default=None, repr=False)

    @property
    def agree(self) -> bool:
        return self.commutes == self.in_core

    def to_json(self) -> dict:
        out = {"commutes": self.commutes, "in_core": self.in_core, "agree": self.agree,
               "bound": self.bound, "core_bound": self.core_bound}
        if self.witness is not None:
            out["witness"] = str(self.witness)
        return out


def centraliser_of_diagonal_check(x: LpaElement) -> DiagonalReport:
    """Decide ``x in C(D)`` and ``x in M`` independently and report both."""
    if not x.ring.is_field:
        raise RingError("centraliser check requires a field")
    bound = diagonal_bound(x)
    commutes, witness = commutes_with_diagonal(x, bound)
    in_core, cert = is_in_core(x)
    return DiagonalReport(commutes, in_core, witness, bound, core_bound(x), cert)


def generators(g: Graph, ring: RingSpec = RATIONALS) -> List[Tuple[str, LpaElement]]:
    """Vertices, edges and ghost edges, named ``v``, ``e``, ``e*``."""
    out = [(v, LpaElement.vertex(g, v, ring)) for v in g.vertices]
    out += [(e.name, LpaElement.edge(g, e.name, ring)) for e in g.edges]
    out += [(e.name + "*", LpaElement.ghost(g, e.name, ring)) for e in g.edges]
    return out


def is_central(x: LpaElement) -> Tuple[bool, Optional[str]]:
    """Exact: ``x`` is central iff it commutes with every algebra generator."""
    for name, y in generators(x.graph, x.ring):
        if x * y != y * x:
            return False, name
    return True, None


def is_commutative_structurally(g: Graph) -> bool:
    """Every component is a lone vertex or a vertex with a single loop."""
    return all(e.src == e.dst for e in g.edges) and all(len(g.out_edges(v)) <= 1 for v in g.vertices)


def generators_commute(g: Graph, ring: RingSpec = RATIONALS) -> bool:
    gens = [y for _, y in generators(g, ring)]
    return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1:])


def is_commutative_lpa(g: Graph, ring: RingSpec = RATIONALS) -> bool:
    """Structural commutativity test, cross-checked against generator commutators.

    For a connected graph this says: a single vertex, or a single vertex with
    one loop.
    """
    structural = is_commutative_structurally(g)
    if structural != generators_commute(g, ring):
        raise AssertionError(f"structural and commutator tests disagree on {g!r}")
    return structural


# -- random elements ----------------------------------------------------------------


def random_element(g: Graph, ring: RingSpec, rng: random.Random, max_degree: int = 3,
                   max_terms: int = 4, basis: Optional[Sequence[Monomial]] = None) -> LpaElement:
    basis = basis if basis is not None else normal_basis(g, max_degree)
    k = rng.randint(1, min(max_terms, len(basis)))
    terms = {m: random_coefficient(ring, rng) for m in rng.sample(list(basis), k)}
    return LpaElement(g, ring, {m: c for m, c in terms.items() if c != 0})


def random_coefficient(ring: RingSpec, rng: random.Random) -> Raw:
    if ring.kind == "rat":
        return ring.coerce(rng.choice([-3, -2, -1, 1, 2, 3])) / rng.choice([1, 1, 2, 3])
    if ring.kind == "mod":
        return rng.randrange(1, ring.modulus)
    return ring.coerce(rng.choice([-3, -2, -1, 1, 2, 3]))
