"""Command-line interface: ``steinberg <group> <command> ...``.

Every command prints one JSON report on standard output.  Exit codes: 0 when
the checked property holds, 1 when it fails (the report carries a witness),
2 on unreadable input, schema violations and expression syntax errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path as FsPath
from typing import List, Optional, Tuple

from . import bridge, graph as gr, groupoid as gp, lpa, suite
from .graph import Graph
from .groupoid import FiniteGroupoid
from .parser import ParseError, parse_element, parse_groupoid_element
from .scalars import RingError, RingSpec

SEED_ENV = "STEINBERG_SEED"


class InputError(Exception):
    """Bad input: reported with exit code 2."""


# -- input helpers ------------------------------------------------------------


def fixture_dir():
    return resources.files("steinberg") / "fixtures"


def resolve_path(name: str):
    """A file path, falling back to a packaged fixture (``toeplitz`` or ``toeplitz.json``)."""
    if FsPath(name).is_file():
        return FsPath(name)
    base = FsPath(name).name
    for candidate in (base, base + ".json"):
        res = fixture_dir() / candidate
        if res.is_file():
            return res
    raise InputError(f"cannot read file {name!r}: no such file or fixture")


def _load_json(name: str) -> dict:
    path = resolve_path(name)
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{name}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise InputError(f"cannot read file {name!r}: {exc}") from None


def load_groupoid(name: str, validate: bool = True) -> FiniteGroupoid:
    data = _load_json(name)
    if not isinstance(data, dict):
        raise InputError(f"{name}: groupoid file must hold a JSON object")
    g = FiniteGroupoid.from_json(data)
    if validate:
        rep = gp.validate_groupoid(g)
        if not rep.ok:
            raise InputError(f"{name}: not a groupoid ({rep.axiom} fails for "
                             f"{[g.names[w] for w in rep.witness]})")
    return g


def load_graph(name: str) -> Graph:
    data = _load_json(name)
    if not isinstance(data, dict):
        raise InputError(f"{name}: graph file must hold a JSON object")
    return Graph.from_json(data)


def parse_ring(text: str) -> RingSpec:
    try:
        return RingSpec.parse(text)
    except RingError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def resolve_seed(seed: Optional[int]) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return 0 if seed is None else seed


def parse_subset(g: FiniteGroupoid, text: str) -> List[int]:
    if text == "ALL":
        return list(g.sorted_units)
    out = []
    for name in filter(None, (t.strip() for t in text.split(","))):
        if name not in g.index:
            raise InputError(f"unknown unit {name!r}")
        if g.index[name] not in g.units:
            raise InputError(f"{name!r} is not a unit")
        out.append(g.index[name])
    return out


def _element_json(x: gp.AlgebraElement) -> dict:
    ring = x.ring
    return {x.groupoid.names[i]: ring.format(c) for i, c in sorted(x.sparse().items())}


# -- commands ----------------------------------------------------------------------
# Each returns (report, property_holds).


def cmd_gpd_validate(args) -> Tuple[dict, bool]:
    g = load_groupoid(args.groupoid, validate=False)
    rep = gp.validate_groupoid(g)
    return rep.to_json(g), rep.ok


def cmd_gpd_centraliser(args) -> Tuple[dict, bool]:
    g = load_groupoid(args.groupoid)
    ring = args.ring
    if args.units is not None:
        spanning = gp.unit_indicators(g, ring, parse_subset(g, args.units))
    else:
        spanning = [parse_groupoid_element(e, g, ring) for e in args.elements]
    basis = gp.centraliser_of_span(g, ring, spanning)
    return {"dim": len(basis), "basis": [_element_json(b) for b in basis]}, True


def cmd_gpd_verify_theorem(args) -> Tuple[dict, bool]:
    g = load_groupoid(args.groupoid)
    subset = parse_subset(g, args.subset)
    rep = gp.verify_centraliser_theorem(g, subset, args.ring, force=args.force)
    # a forced run on a non-invariant subset asserts nothing
    return rep.to_json(), rep.holds is not False


def cmd_gpd_core_injectivity(args) -> Tuple[dict, bool]:
    g = load_groupoid(args.groupoid)
    gens = [parse_groupoid_element(e, g, args.ring) for e in args.generators]
    rep = gp.core_injectivity_check(g, args.ring, gens)
    return rep.to_json(), rep.agree


def cmd_graph_cycles(args) -> Tuple[dict, bool]:
    g = load_graph(args.graph)
    return {"cycles": [str(c) for c in gr.simple_cycles(g)],
            "cycles_without_exit": [str(c) for c in gr.cycles_without_exit(g)],
            "acyclic": gr.is_acyclic(g),
            "sinks": gr.sinks(g)}, True


def cmd_lpa_normalize(args) -> Tuple[dict, bool]:
    g = load_graph(args.graph)
    x = parse_element(args.expr, g, args.ring)
    return {"normal_form": str(x), "terms": len(x.terms), "degree": x.degree}, True


def cmd_lpa_mul(args) -> Tuple[dict, bool]:
    g = load_graph(args.graph)
    factors = [parse_element(e, g, args.ring) for e in args.exprs]
    prod = lpa.LpaElement.identity(g, args.ring)
    for f in factors:
        prod = prod * f
    return {"product": str(prod)}, True


def cmd_lpa_centraliser_check(args) -> Tuple[dict, bool]:
    g = load_graph(args.graph)
    x = parse_element(args.expr, g, args.ring)
    rep = lpa.centraliser_of_diagonal_check(x)
    return rep.to_json(), rep.agree


def cmd_lpa_is_central(args) -> Tuple[dict, bool]:
    g = load_graph(args.graph)
    x = parse_element(args.expr, g, args.ring)
    central, witness = lpa.is_central(x)
    out = {"central": central}
    if witness is not None:
        out["witness"] = witness
    return out, central


def cmd_lpa_commutative(args) -> Tuple[dict, bool]:
    g = load_graph(args.graph)
    comm = lpa.is_commutative_lpa(g, args.ring)
    out = {"commutative": comm}
    if not comm:
        gens = lpa.generators(g, args.ring)
        for i, (a, x) in enumerate(gens):
            pair = next(((a, b) for b, y in gens[i + 1:] if x * y != y * x), None)
            if pair:
                out["witness"] = list(pair)
                break
    return out, comm


def cmd_bridge_verify_iso(args) -> Tuple[dict, bool]:
    g = load_graph(args.graph)
    rep = bridge.verify_pi_iso(g, args.ring, args.samples, resolve_seed(args.seed), args.max_degree)
    return rep.to_json(), rep.passed


def cmd_suite_run(args) -> Tuple[dict, bool]:
    report = suite.suite_run(resolve_seed(args.seed), args.profile, args.mutate, args.suite)
    return report, report["passed"]


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indented, human-readable JSON")
    ringed = argparse.ArgumentParser(add_help=False, parents=[common])
    ringed.add_argument("--ring", type=parse_ring, default=RingSpec.parse("rat"),
                        help="coefficient ring: int, rat or mod:<n> (default rat)")

    p = argparse.ArgumentParser(prog="steinberg", description=__doc__.splitlines()[0])
    groups = p.add_subparsers(dest="group", required=True)

    gpd = groups.add_parser("gpd", help="finite groupoids").add_subparsers(dest="command", required=True)
    c = gpd.add_parser("validate", parents=[common], help="check the groupoid axioms")
    c.add_argument("--groupoid", required=True)
    c.set_defaults(func=cmd_gpd_validate)
    c = gpd.add_parser("centraliser", parents=[ringed], help="basis of the centraliser of a span")
    c.add_argument("--groupoid", required=True)
    c.add_argument("--units", help="centralise unit indicators: ALL or comma-separated unit names")
    c.add_argument("elements", nargs="*", help="elements such as '2*g12 - u1'")
    c.set_defaults(func=cmd_gpd_centraliser)
    c = gpd.add_parser("verify-theorem", parents=[ringed],
                       help="compare C(A(U)) with span(Iso) + span(morphisms off U)")
    c.add_argument("--groupoid", required=True)
    c.add_argument("--subset", required=True, help="ALL or comma-separated unit names")
    c.add_argument("--force", action="store_true", help="allow non-invariant subsets (reports only)")
    c.set_defaults(func=cmd_gpd_verify_theorem)
    c = gpd.add_parser("core-injectivity", parents=[ringed],
                       help="compare ideal = 0 with ideal meeting the isotropy algebra trivially")
    c.add_argument("--groupoid", required=True)
    c.add_argument("generators", nargs="*", help="ideal generators")
    c.set_defaults(func=cmd_gpd_core_injectivity)

    graph = groups.add_parser("graph", help="directed graphs").add_subparsers(dest="command", required=True)
    c = graph.add_parser("cycles", parents=[common], help="simple cycles and cycles without exit")
    c.add_argument("--graph", required=True)
    c.set_defaults(func=cmd_graph_cycles)

    lp = groups.add_parser("lpa", help="Leavitt path algebras").add_subparsers(dest="command", required=True)
    for name, func, helptext in (
        ("normalize", cmd_lpa_normalize, "normal form of an expression"),
        ("centraliser-check", cmd_lpa_centraliser_check,
         "compare 'commutes with the diagonal' with 'lies in the core'"),
        ("is-central", cmd_lpa_is_central, "does the element commute with every generator"),
    ):
        c = lp.add_parser(name, parents=[ringed], help=helptext)
        c.add_argument("--graph", required=True)
        c.add_argument("expr")
        c.set_defaults(func=func)
    c = lp.add_parser("mul", parents=[ringed], help="product of expressions, left to right")
    c.add_argument("--graph", required=True)
    c.add_argument("exprs", nargs="+")
    c.set_defaults(func=cmd_lpa_mul)
    c = lp.add_parser("commutative", parents=[ringed], help="is the algebra commutative")
    c.add_argument("--graph", required=True)
    c.set_defaults(func=cmd_lpa_commutative)

    br = groups.add_parser("bridge", help="acyclic graphs and their groupoids").add_subparsers(
        dest="command", required=True)
    c = br.add_parser("verify-iso", parents=[ringed], help="check the map into the groupoid algebra")
    c.add_argument("--graph", required=True)
    c.add_argument("--samples", type=int, default=100)
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--max-degree", type=int, default=4)
    c.set_defaults(func=cmd_bridge_verify_iso)

    st = groups.add_parser("suite", help="property suites").add_subparsers(dest="command", required=True)
    c = st.add_parser("run", parents=[common], help="run the generated-instance suites")
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--profile", choices=sorted(suite.PROFILES), default="quick")
    c.add_argument("--mutate", choices=lpa.MUTATIONS, default=None,
                   help="break the rewrite rule on purpose (negative control)")
    c.add_argument("--suite", action="append", choices=list(suite.SUITES),
                   help="run only this suite (repeatable)")
    c.set_defaults(func=cmd_suite_run)
    return p


def dumps(report: dict, pretty: bool) -> str:
    if pretty:
        return json.dumps(report, indent=2, sort_keys=True)
    return json.dumps(report, sort_keys=True, separators=(",", ":"))


INPUT_ERRORS = (InputError, ParseError, RingError, gp.GroupoidError, gr.GraphError, lpa.LpaError,
                bridge.BridgeError)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, holds = args.func(args)
    except INPUT_ERRORS as exc:
        print(dumps({"error": str(exc)}, args.pretty))
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(dumps(report, args.pretty))
    return 0 if holds else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
