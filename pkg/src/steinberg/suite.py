"""Property suites over generated instances, with deterministic reports.

Each suite returns a :class:`SuiteResult`; :func:`suite_run` runs them in a
fixed order and merges the results.  Every random choice is drawn from a
``random.Random`` seeded by a string built from the run seed and the case
label, so reports are byte-identical for equal seeds.
"""

from __future__ import annotations

import random
from contextlib import nullcontext
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from . import bridge, graph as gr, groupoid as gp, lpa
from .families import theorem_family
from .scalars import RATIONALS, RingSpec, integers_mod

FIELDS = (RATIONALS, integers_mod(5))

PROFILES = {
    "quick": {"lpa_elements": 200, "raw_terms": 500, "orders": 20, "triples": 500,
              "bridge_samples": 100, "ideal_choices": 120},
    "full": {"lpa_elements": 500, "raw_terms": 1000, "orders": 30, "triples": 1000,
             "bridge_samples": 300, "ideal_choices": 400},
}

MAX_FAILURES = 5


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: List[dict] = field(default_factory=list)
    failure_count: int = 0
    details: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def check(self, ok: bool, witness: Callable[[], dict]) -> bool:
        self.cases += 1
        if not ok:
            self.failure_count += 1
            if len(self.failures) < MAX_FAILURES:
                self.failures.append(witness())
        return ok

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "cases": self.cases,
                "failure_count": self.failure_count, "failures": self.failures,
                "details": self.details}


def _rng(seed: int, *label) -> random.Random:
    return random.Random(":".join(map(str, (seed,) + label)))


# -- groupoid suites -----------------------------------------------------------


def theorem_suite(seed: int = 0, profile: str = "quick", rings=FIELDS) -> SuiteResult:
    """Exact equality of both sides for every instance and invariant subset."""
    res = SuiteResult("centraliser_theorem")
    family = theorem_family()
    for ring in rings:
        for name, g in family:
            for u in gp.invariant_subsets(g):
                rep = gp.verify_centraliser_theorem(g, u, ring)
                res.check(bool(rep.holds), lambda: {
                    "instance": name, "ring": str(ring), "subset": sorted(g.names[x] for x in u),
                    **rep.to_json()})
    res.details = {"instances": len(family), "rings": [str(r) for r in rings]}
    return res


def containment_suite(seed: int = 0, profile: str = "quick", rings=FIELDS) -> SuiteResult:
    """Iso indicators and indicators off U commute with every indicator on U."""
    res = SuiteResult("containment")
    for ring in rings:
        for name, g in theorem_family():
            iso = set(gp.isotropy(g))
            for u in gp.invariant_subsets(g):
                us = gp.unit_indicators(g, ring, u)
                for x in sorted(iso | set(gp.complement_morphisms(g, u))):
                    f = gp.AlgebraElement.indicator(g, ring, [x])
                    ok = all(f * e == e * f for e in us)
                    res.check(ok, lambda: {"instance": name, "ring": str(ring), "morphism": g.names[x]})
    return res


def special_case_suite(seed: int = 0, profile: str = "quick", rings=FIELDS) -> SuiteResult:
    """``U`` = all units: the centraliser of the diagonal is the isotropy algebra."""
    res = SuiteResult("diagonal_centraliser")
    for ring in rings:
        for name, g in theorem_family():
            lhs = gp.centraliser_subspace(g, ring, gp.unit_indicators(g, ring, g.units))
            rhs = gp.coordinate_span(g, ring, gp.isotropy(g))
            res.check(lhs == rhs, lambda: {"instance": name, "ring": str(ring),
                                           "lhs_dim": lhs.dim, "rhs_dim": rhs.dim})
    return res


def maximal_suite(seed: int = 0, profile: str = "quick", rings=FIELDS) -> SuiteResult:
    """Abelian isotropy gives a maximal commutative isotropy algebra; otherwise refusal."""
    res = SuiteResult("maximal_commutative")
    abelian = refused = 0
    family = theorem_family()  # includes S3 as a one-unit groupoid
    for ring in rings:
        for name, g in family:
            iso = [gp.AlgebraElement.indicator(g, ring, [x]) for x in gp.isotropy(g)]
            if gp.check_iso_abelian(g):
                abelian += 1
                ok = gp.is_maximal_commutative(g, ring, iso)
                res.check(ok, lambda: {"instance": name, "ring": str(ring), "maximal": ok})
            else:
                try:
                    gp.is_maximal_commutative(g, ring, iso)
                    ok = False
                except gp.GroupoidError as exc:
                    ok = "not commutative" in str(exc)
                refused += ok
                res.check(ok, lambda: {"instance": name, "ring": str(ring), "refused": ok})
    res.details = {"abelian_cases": abelian, "refused_cases": refused}
    return res


def _random_groupoid_element(g, ring, rng) -> gp.AlgebraElement:
    coeffs = [ring.zero] * len(g)
    for x in rng.sample(range(len(g)), rng.randint(1, min(3, len(g)))):
        coeffs[x] = lpa.random_coefficient(ring, rng)
    return gp.AlgebraElement(g, ring, coeffs)


def uniqueness_suite(seed: int = 0, profile: str = "quick", rings=FIELDS) -> SuiteResult:
    """``ideal = 0`` iff ``ideal meets the isotropy algebra trivially``."""
    res = SuiteResult("core_injectivity")
    family = theorem_family()
    choices = PROFILES[profile]["ideal_choices"]
    zero_ideals = 0
    for i in range(choices):
        rng = _rng(seed, "uniqueness", i)
        ring = rings[i % len(rings)]
        name, g = family[rng.randrange(len(family))]
        mode = rng.random()
        if mode < 0.15:
            gens = []
        elif mode < 0.3:
            x = _random_groupoid_element(g, ring, rng)
            gens = [x - x]
        elif mode < 0.5:
            # differences of isotropy elements at a unit: often proper ideals
            u = rng.choice(g.sorted_units)
            grp = gp.isotropy_group(g, u)
            a, b = rng.choice(grp), rng.choice(grp)
            gens = [gp.AlgebraElement.indicator(g, ring, [a]) - gp.AlgebraElement.indicator(g, ring, [b])]
        else:
            gens = [_random_groupoid_element(g, ring, rng) for _ in range(rng.randint(1, 3))]
        rep = gp.core_injectivity_check(g, ring, gens)
        zero_ideals += rep.injective
        res.check(rep.agree, lambda: {"instance": name, "ring": str(ring), "choice": i, **rep.to_json()})
    res.details = {"choices": choices, "zero_ideals": zero_ideals}
    return res


# -- graph and LPA suites -----------------------------------------------------------

CORE_GRAPHS = ("loop", "toeplitz", "rose2", "line3", "loop_tail")


def sample_lpa_elements(g: gr.Graph, ring: RingSpec, rng: random.Random, count: int,
                        max_degree: int = 3) -> List[lpa.LpaElement]:
    """A mix of arbitrary elements, core elements, and perturbed core elements."""
    basis = lpa.normal_basis(g, max_degree)
    core = [x for x in lpa.core_generators(g, max_degree, ring) if x.degree <= max_degree]
    out = []
    for i in range(count):
        kind = i % 3
        if kind == 0 or not core:
            x = lpa.random_element(g, ring, rng, max_degree, basis=basis)
        else:
            x = lpa.LpaElement.zero(g, ring)
            for y in rng.sample(core, min(len(core), rng.randint(1, 3))):
                x = x + y.scale(lpa.random_coefficient(ring, rng))
            if kind == 2:
                x = x + lpa.random_element(g, ring, rng, max_degree, max_terms=1, basis=basis)
        out.append(x)
    return out


def lpa_diagonal_suite(seed: int = 0, profile: str = "quick", rings=FIELDS) -> SuiteResult:
    """Commuting with the diagonal agrees with lying in the core span."""
    res = SuiteResult("lpa_centraliser_of_diagonal")
    count = PROFILES[profile]["lpa_elements"]
    tally = {}
    for ring in rings:
        for gname in CORE_GRAPHS:
            g = gr.SAMPLE_GRAPHS[gname]()
            rng = _rng(seed, "lpa", gname, ring)
            commuting = 0
            for x in sample_lpa_elements(g, ring, rng, count):
                rep = lpa.centraliser_of_diagonal_check(x)
                commuting += rep.commutes
                res.check(rep.agree, lambda: {"graph": gname, "ring": str(ring), "element": str(x),
                                              **rep.to_json()})
            tally[f"{gname}@{ring}"] = {"elements": count, "commuting": commuting}
    res.details = tally
    return res


def core_commutative_suite(seed: int = 0, profile: str = "quick", rings=FIELDS) -> SuiteResult:
    """Core generators commute pairwise, diagonal lies in the core, centre lies in C(D)."""
    res = SuiteResult("core_structure")
    for ring in rings:
        for gname in CORE_GRAPHS:
            g = gr.SAMPLE_GRAPHS[gname]()
            core = [x for x in lpa.core_generators(g, 4, ring) if x.degree <= 4]
            for i, a in enumerate(core):
                for b in core[i + 1:]:
                    res.check(a * b == b * a, lambda: {"graph": gname, "ring": str(ring),
                                                       "a": str(a), "b": str(b)})
            for d in lpa.diagonal_generators(g, 3, ring):
                res.check(lpa.is_in_core(d)[0], lambda: {"graph": gname, "diagonal": str(d)})
            rng = _rng(seed, "central", gname, ring)
            for x in sample_lpa_elements(g, ring, rng, 30) + [lpa.LpaElement.identity(g, ring)]:
                if lpa.is_central(x)[0]:
                    res.check(lpa.commutes_with_diagonal(x)[0],
                              lambda: {"graph": gname, "central_not_in_CD": str(x)})
    return res


def commutative_suite(seed: int = 0, profile: str = "quick", rings=(RATIONALS,)) -> SuiteResult:
    """Commutative algebras among all graphs with at most 3 vertices and 3 edges."""
    res = SuiteResult("commutative_lpa")
    graphs = gr.all_small_graphs(3, 3)
    connected = commutative_connected = commutative_disconnected = 0
    for g in graphs:
        comm = lpa.is_commutative_lpa(g, rings[0])  # raises if the two tests disagree
        if gr.is_weakly_connected(g):
            connected += 1
            commutative_connected += comm
            expected = len(g.vertices) == 1 and len(g.edges) <= 1
        else:
            commutative_disconnected += comm
            expected = lpa.is_commutative_structurally(g)
        res.check(comm == expected, lambda: {"graph": repr(g), "commutative": comm})
    # Laurent relations in the loop algebra
    g = gr.loop()
    cyc = g.path("c")
    for ring in FIELDS:
        c = lpa.LpaElement.edge(g, "c", ring)
        cs = lpa.LpaElement.ghost(g, "c", ring)
        v = lpa.LpaElement.vertex(g, "v", ring)
        res.check(c * cs == v and cs * c == v, lambda: {"laurent": "c c* = c* c = v", "ring": str(ring)})
        for m in range(-5, 6):
            for n in range(-5, 6):
                lhs = lpa.power(g, cyc, m, ring) * lpa.power(g, cyc, n, ring)
                rhs = lpa.power(g, cyc, m + n, ring)
                res.check(lhs == rhs, lambda: {"laurent": f"c^{m} c^{n}", "got": str(lhs)})
    res.details = {"graphs": len(graphs), "connected": connected,
                   "commutative_connected": commutative_connected,
                   "commutative_disconnected": commutative_disconnected}
    return res


def bridge_suite(seed: int = 0, profile: str = "quick", rings=FIELDS) -> SuiteResult:
    res = SuiteResult("pi_isomorphism")
    samples = PROFILES[profile]["bridge_samples"]
    graphs = {"edge": gr.edge_graph(), "line3": gr.line(3), "line4": gr.line(4),
              "tree2": gr.binary_tree(2)}
    for ring in rings:
        for gname, g in graphs.items():
            gseed = _rng(seed, "bridge", gname, ring).randrange(2 ** 31)
            rep = bridge.verify_pi_iso(g, ring, samples, gseed)
            res.details[f"{gname}@{ring}"] = rep.to_json()
            res.check(rep.passed, lambda: {"graph": gname, "ring": str(ring), **rep.to_json()})
            lhs, rhs = bridge.core_routes_agree(g, ring)
            res.check(lhs == rhs, lambda: {"graph": gname, "ring": str(ring),
                                           "centraliser_dim": lhs, "core_image_dim": rhs})
    return res


def random_raw_terms(g: gr.Graph, ring: RingSpec, rng: random.Random, max_len: int = 3):
    """Raw (possibly reducible) monomials with random coefficients."""
    by_end: Dict[str, List[gr.Path]] = {}
    for p in gr.enumerate_paths(g, max_len):
        by_end.setdefault(p.end, []).append(p)
    ends = sorted(by_end)
    out = []
    for _ in range(rng.randint(1, 4)):
        paths = by_end[rng.choice(ends)]
        out.append((lpa.random_coefficient(ring, rng), lpa.Monomial(rng.choice(paths), rng.choice(paths))))
    return out


def rewriting_suite(seed: int = 0, profile: str = "quick", rings=FIELDS) -> SuiteResult:
    """Confluence of normalisation, associativity, and the Cuntz-Krieger relations."""
    res = SuiteResult("rewriting")
    prof = PROFILES[profile]
    for gname in CORE_GRAPHS:
        g = gr.SAMPLE_GRAPHS[gname]()
        for ring in rings:
            rng = _rng(seed, "rewrite", gname, ring)
            for _ in range(prof["raw_terms"]):
                terms = random_raw_terms(g, ring, rng)
                ref = lpa.normalize(terms, g, ring)
                ok = all(lpa.normalize(terms, g, ring, random.Random(rng.random())) == ref
                         for _ in range(prof["orders"]))
                res.check(ok, lambda: {"graph": gname, "ring": str(ring),
                                       "terms": [f"{c}*{m}" for c, m in terms]})
            basis = lpa.normal_basis(g, 3)
            for _ in range(prof["triples"]):
                x, y, z = (lpa.random_element(g, ring, rng, 3, max_terms=3, basis=basis) for _ in range(3))
                ok = (x * y) * z == x * (y * z)
                res.check(ok, lambda: {"graph": gname, "ring": str(ring),
                                       "x": str(x), "y": str(y), "z": str(z)})
            ident = lpa.LpaElement.identity(g, ring)
            for x in lpa.normal_basis(g, 2):
                e = lpa.LpaElement(g, ring, {x: ring.one})
                res.check(e * ident == e and ident * e == e, lambda: {"graph": gname, "identity_on": str(x)})
            for v in gr.regular_vertices(g):
                total = lpa.LpaElement.zero(g, ring)
                for e in g.out_edges(v):
                    total = total + lpa.LpaElement.edge(g, e, ring) * lpa.LpaElement.ghost(g, e, ring)
                res.check(total == lpa.LpaElement.vertex(g, v, ring),
                          lambda: {"graph": gname, "ck2_at": v, "got": str(total)})
            for e in g.edges:
                for f in g.edges:
                    prod = lpa.LpaElement.ghost(g, e.name, ring) * lpa.LpaElement.edge(g, f.name, ring)
                    want = (lpa.LpaElement.vertex(g, e.dst, ring) if e == f
                            else lpa.LpaElement.zero(g, ring))
                    res.check(prod == want, lambda: {"graph": gname, "ck1": f"{e.name}* {f.name}",
                                                     "got": str(prod)})
    return res


SUITES = {
    "centraliser_theorem": theorem_suite,
    "diagonal_centraliser": special_case_suite,
    "containment": containment_suite,
    "maximal_commutative": maximal_suite,
    "core_injectivity": uniqueness_suite,
    "lpa_centraliser_of_diagonal": lpa_diagonal_suite,
    "core_structure": core_commutative_suite,
    "commutative_lpa": commutative_suite,
    "pi_isomorphism": bridge_suite,
    "rewriting": rewriting_suite,
}


def suite_run(seed: int = 0, profile: str = "quick", mutation: Optional[str] = None,
              only: Optional[List[str]] = None) -> dict:
    """Run the suites in a fixed order and return the aggregate report."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    names = list(SUITES) if not only else [n for n in SUITES if n in only]
    ctx = lpa.mutated_rewrite(mutation) if mutation else nullcontext()
    results = []
    with ctx:
        if mutation:
            lpa._monomial_nf.cache_clear()
            lpa._diagonal_generators.cache_clear()
            lpa._core_generators.cache_clear()
        for name in names:
            try:
                results.append(SUITES[name](seed, profile))
            except Exception as exc:  # a crash counts as a failed suite
                r = SuiteResult(name)
                r.check(False, lambda: {"error": f"{type(exc).__name__}: {exc}"})
                results.append(r)
    if mutation:
        lpa._diagonal_generators.cache_clear()
        lpa._core_generators.cache_clear()
    return {"seed": seed, "profile": profile, "mutation": mutation,
            "passed": all(r.passed for r in results),
            "suites": [r.to_json() for r in results]}
