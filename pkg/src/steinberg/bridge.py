"""The boundary-path groupoid of an acyclic graph and the map from L(E) to A(G_E).

For a finite acyclic graph there are no infinite paths, so the unit space is
the finite set of paths ending at sinks, and ``G_E`` is a finite discrete
groupoid: one pair groupoid per sink.  The map sends ``v`` to ``1_{Z(v)}``,
``e`` to ``1_{Z(e, r(e))}`` and ``e*`` to ``1_{Z(r(e), e)}``; on a monomial it
is the indicator of ``Z(alpha, beta)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Tuple

from . import linalg
from .families import build_groupoid
from .graph import Graph, Path, enumerate_paths, is_acyclic, sinks
from .groupoid import AlgebraElement, FiniteGroupoid, centraliser_subspace, isotropy, unit_indicators
from .lpa import (LpaElement, Monomial, core_generators, diagonal_generators, normal_basis,
                  random_element)
from .scalars import RATIONALS, RingError, RingSpec

Triple = Tuple[Path, int, Path]


class BridgeError(ValueError):
    pass


def _require_acyclic(g: Graph) -> None:
    if not is_acyclic(g):
        raise BridgeError("groupoid is infinite; bridge requires acyclic")


def boundary_paths(g: Graph) -> List[Path]:
    """Paths ending at a sink, by length then edge names."""
    _require_acyclic(g)
    ends = set(sinks(g))
    return [p for p in enumerate_paths(g, len(g.vertices)) if p.end in ends]


def triple_name(t: Triple) -> str:
    x, k, y = t
    return str(x) if k == 0 and x == y else f"({x},{k},{y})"


class GraphGroupoid:
    """``G_E`` for an acyclic graph, with the triples behind each morphism index."""

    def __init__(self, g: Graph):
        _require_acyclic(g)
        self.graph = g
        self.boundary = boundary_paths(g)
        self.triples: List[Triple] = [(x, len(x) - len(y), y) for x in self.boundary
                                      for y in self.boundary if x.end == y.end]
        self.index: Dict[Triple, int] = {t: i for i, t in enumerate(self.triples)}

    @cached_property
    def groupoid(self) -> FiniteGroupoid:
        # (x, k, y) has range x and source y; (x,k,y)(y,l,z) = (x,k+l,z)
        return build_groupoid(
            self.boundary, self.triples, triple_name,
            source=lambda t: t[2], range_=lambda t: t[0],
            inverse=lambda t: (t[2], -t[1], t[0]),
            compose=lambda a, b: (a[0], a[1] + b[1], b[2]),
            is_unit=lambda t: t[0] == t[2],
        )

    def cylinder(self, m: Monomial) -> List[int]:
        """Indices of ``Z(alpha, beta) = {(alpha z, |alpha| - |beta|, beta z)}``."""
        a, b = m.alpha, m.beta
        k = len(a) - len(b)
        out = []
        for z in self.boundary:
            if z.start == a.end:
                out.append(self.index[(a + z, k, b + z)])
        return sorted(out)

    def pi(self, x: LpaElement) -> AlgebraElement:
        ring = x.ring
        coeffs = [ring.zero] * len(self.triples)
        for m, c in x.terms.items():
            for i in self.cylinder(m):
                coeffs[i] = ring.add(coeffs[i], c)
        return AlgebraElement(self.groupoid, ring, coeffs)


def build_graph_groupoid(g: Graph) -> FiniteGroupoid:
    return GraphGroupoid(g).groupoid


def pi_expand(x, g: Graph, ring: RingSpec = RATIONALS) -> AlgebraElement:
    """Image of a monomial or an element under the map to the convolution algebra."""
    gg = GraphGroupoid(g)
    if isinstance(x, Monomial):
        return AlgebraElement.indicator(gg.groupoid, ring, gg.cylinder(x))
    return gg.pi(x)


@dataclass
class PiReport:
    homomorphism_pass: bool
    injectivity_rank: int
    expected_rank: int
    diagonal_supported_on_units: bool
    core_supported_on_isotropy: bool
    samples: int = 0
    failure: str = ""

    @property
    def passed(self) -> bool:
        return (self.homomorphism_pass and self.injectivity_rank == self.expected_rank
                and self.diagonal_supported_on_units and self.core_supported_on_isotropy)

    def to_json(self) -> dict:
        out = {"homomorphism_pass": self.homomorphism_pass,
               "injectivity_rank": self.injectivity_rank,
               "expected_rank": self.expected_rank,
               "diagonal_supported_on_units": self.diagonal_supported_on_units,
               "core_supported_on_isotropy": self.core_supported_on_isotropy,
               "samples": self.samples, "pass": self.passed}
        if self.failure:
            out["failure"] = self.failure
        return out


def verify_pi_iso(g: Graph, ring: RingSpec = RATIONALS, samples: int = 100, seed: int = 0,
                  max_degree: int = 4) -> PiReport:
    """Check that the map is an injective homomorphism matching diagonal and core."""
    gg = GraphGroupoid(g)
    G = gg.groupoid
    rng = random.Random(seed)
    basis = normal_basis(g, max_degree)
    hom, failure = True, ""
    for _ in range(samples):
        x = random_element(g, ring, rng, max_degree, basis=basis)
        y = random_element(g, ring, rng, max_degree, basis=basis)
        if gg.pi(x * y) != gg.pi(x) * gg.pi(y):
            hom, failure = False, f"pi({x} * {y}) != pi({x}) * pi({y})"
            break
        if gg.pi(x + y) != gg.pi(x) + gg.pi(y):
            hom, failure = False, f"pi({x} + {y}) != pi({x}) + pi({y})"
            break
    # over Z the rank is the rank over Q (torsion-free images)
    if not ring.is_field and ring.kind != "int":
        raise RingError("injectivity rank needs a field or the integers")
    rank_ring = ring if ring.is_field else RATIONALS
    images = linalg.Subspace(rank_ring, len(G), ({i: rank_ring.one for i in gg.cylinder(m)} for m in basis))
    units = G.units
    iso = set(isotropy(G))
    diag_ok = all(set(gg.pi(d).support()) <= units
                  for d in diagonal_generators(g, max_degree, ring))
    core_ok = all(set(gg.pi(c).support()) <= iso for c in core_generators(g, max_degree, ring))
    return PiReport(hom, images.dim, len(basis), diag_ok, core_ok, samples, failure)


def core_routes_agree(g: Graph, ring: RingSpec = RATIONALS) -> Tuple[int, int]:
    """Dimensions of C(A(G^0)) in A(G_E) and of the span of images of core generators."""
    gg = GraphGroupoid(g)
    G = gg.groupoid
    lhs = centraliser_subspace(G, ring, unit_indicators(G, ring, G.units))
    bound = 2 * len(g.vertices)
    rhs = linalg.Subspace(ring, len(G), (gg.pi(c).sparse() for c in core_generators(g, bound, ring)))
    return lhs.dim, rhs.dim
