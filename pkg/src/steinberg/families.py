"""Constructors for the small groupoids used as test instances."""

from __future__ import annotations

from itertools import combinations_with_replacement, permutations
from typing import Callable, Iterator, List, Sequence, Tuple

from .groupoid import FiniteGroupoid

Perm = Tuple[int, ...]


def build_groupoid(objects: Sequence, morphisms: Sequence, name: Callable, source: Callable,
                   range_: Callable, inverse: Callable, compose: Callable,
                   is_unit: Callable) -> FiniteGroupoid:
    """Tabulate a groupoid given by hashable morphisms and structure functions."""
    index = {m: i for i, m in enumerate(morphisms)}
    obj_unit = {}
    for m in morphisms:
        if is_unit(m):
            obj_unit[source(m)] = index[m]
    table = {}
    for a in morphisms:
        for b in morphisms:
            if range_(b) == source(a):
                table[(index[a], index[b])] = index[compose(a, b)]
    return FiniteGroupoid.from_tables(
        [name(m) for m in morphisms],
        [index[m] for m in morphisms if is_unit(m)],
        [obj_unit[source(m)] for m in morphisms],
        [obj_unit[range_(m)] for m in morphisms],
        [index[inverse(m)] for m in morphisms],
        table,
    )


# -- groups -----------------------------------------------------------------


def cyclic(k: int) -> Tuple[List[int], Callable, Callable]:
    return list(range(k)), (lambda a, b: (a + b) % k), (lambda a: -a % k)


S3: List[Perm] = sorted(permutations(range(3)))


def perm_mul(p: Perm, q: Perm) -> Perm:
    """``p`` after ``q``."""
    return tuple(p[q[i]] for i in range(len(q)))


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_sign(p: Perm) -> int:
    sign = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def _perm_name(p: Perm) -> str:
    return "".join(map(str, p))


S3_SUBGROUPS = {
    "1": [(0, 1, 2)],
    "C2a": [(0, 1, 2), (1, 0, 2)],
    "C2b": [(0, 1, 2), (2, 1, 0)],
    "C2c": [(0, 1, 2), (0, 2, 1)],
    "A3": [(0, 1, 2), (1, 2, 0), (2, 0, 1)],
    "S3": S3,
}


# -- connected blocks -------------------------------------------------------


def block(n: int, k: int = 1) -> FiniteGroupoid:
    """Pair groupoid on ``n`` points times the cyclic group of order ``k``.

    Morphism ``g{i}{j}`` (with ``t{a}`` appended when ``k > 1``) goes from point
    ``j`` to point ``i``; the units are ``u{i}``.
    """
    els, mul, inv = cyclic(k)
    pts = range(1, n + 1)
    morphs = [(i, a, j) for i in pts for j in pts for a in els]

    def name(m):
        i, a, j = m
        if i == j and a == 0:
            return f"u{i}"
        return f"g{i}{j}" + (f"t{a}" if k > 1 else "")

    return build_groupoid(list(pts), morphs, name, lambda m: m[2], lambda m: m[0],
                  lambda m: (m[2], inv(m[1]), m[0]),
                  lambda x, y: (x[0], mul(x[1], y[1]), y[2]),
                  lambda m: m[0] == m[2] and m[1] == 0)


def pair_groupoid(n: int) -> FiniteGroupoid:
    return block(n, 1)


def cyclic_group(k: int) -> FiniteGroupoid:
    """The cyclic group of order ``k`` as a one-unit groupoid (``e``, ``t``, ``t2``, ...)."""
    els, mul, inv = cyclic(k)

    def name(a):
        return "e" if a == 0 else ("t" if a == 1 else f"t{a}")

    return build_groupoid([0], els, name, lambda a: 0, lambda a: 0, inv, mul, lambda a: a == 0)


def group_groupoid(elements: Sequence, mul: Callable, inv: Callable, identity,
                   name: Callable = str) -> FiniteGroupoid:
    return build_groupoid([0], list(elements), name, lambda a: 0, lambda a: 0, inv, mul,
                  lambda a: a == identity)


def symmetric_group_s3() -> FiniteGroupoid:
    return group_groupoid(S3, perm_mul, perm_inv, (0, 1, 2),
                          lambda p: "e" if p == (0, 1, 2) else "s" + _perm_name(p))


def transformation_groupoid(group: Sequence[Perm], action: Callable[[Perm, int], int],
                            points: Sequence[int]) -> FiniteGroupoid:
    """Morphisms ``(h, x): x -> h.x`` composed by ``(h', h.x)(h, x) = (h'h, x)``."""
    ident = tuple(range(len(group[0])))
    morphs = [(h, x) for x in points for h in group]

    def name(m):
        h, x = m
        return f"p{x}" if h == ident else f"h{_perm_name(h)}p{x}"

    return build_groupoid(list(points), morphs, name, lambda m: m[1], lambda m: action(m[0], m[1]),
                  lambda m: (perm_inv(m[0]), action(m[0], m[1])),
                  lambda a, b: (perm_mul(a[0], b[0]), b[1]),
                  lambda m: m[0] == ident)


def disjoint_union(*parts: FiniteGroupoid, tags: Sequence[str] = ()) -> FiniteGroupoid:
    """Disjoint union; with several parts, names get a ``A_``, ``B_``, ... prefix."""
    if len(parts) == 1:
        return parts[0]
    tags = list(tags) or [chr(ord("A") + i) for i in range(len(parts))]
    names, units, src, rng, inv, table = [], [], [], [], [], {}
    offset = 0
    for tag, p in zip(tags, parts):
        names += [f"{tag}_{n}" for n in p.names]
        units += [u + offset for u in p.units]
        src += [x + offset for x in p.source]
        rng += [x + offset for x in p.range]
        inv += [x + offset for x in p.inverse]
        table.update({(a + offset, b + offset): c + offset for (a, b), c in p.table.items()})
        offset += len(p)
    return FiniteGroupoid.from_tables(names, units, src, rng, inv, table)


# -- the generated family ---------------------------------------------------


def _natural(h: Perm, x: int) -> int:
    return h[x] if x < len(h) else x


def _sign_action(h: Perm, x: int) -> int:
    return x if perm_sign(h) == 1 else 1 - x


def _trivial(h: Perm, x: int) -> int:
    return x


TRANSFORMATION_ACTIONS = {
    "natural3": (_natural, [0, 1, 2]),
    "natural3+fixed": (_natural, [0, 1, 2, 3]),
    "sign2": (_sign_action, [0, 1]),
    "trivial1": (_trivial, [0]),
    "trivial2": (_trivial, [0, 1]),
}


def block_family(max_points: int = 4, max_order: int = 4) -> Iterator[Tuple[str, FiniteGroupoid]]:
    """Disjoint unions of ``pair(n) x Z/k`` blocks with at most ``max_points`` units.

    Covers disjoint unions of pair groupoids (all ``k = 1``) and cyclic group
    bundles (all ``n = 1``) along with mixed instances.
    """
    kinds = [(n, k) for n in range(1, max_points + 1) for k in range(1, max_order + 1)]
    for size in range(1, max_points + 1):
        for combo in combinations_with_replacement(kinds, size):
            if sum(n for n, _ in combo) > max_points:
                continue
            label = "+".join(f"P{n}xZ{k}" for n, k in combo)
            yield label, disjoint_union(*(block(n, k) for n, k in combo))


def transformation_family() -> Iterator[Tuple[str, FiniteGroupoid]]:
    for gname, group in S3_SUBGROUPS.items():
        for aname, (action, pts) in TRANSFORMATION_ACTIONS.items():
            yield f"{gname}@{aname}", transformation_groupoid(group, action, pts)


def theorem_family() -> List[Tuple[str, FiniteGroupoid]]:
    """Every instance checked by the centraliser-theorem suite, in a fixed order."""
    out = list(block_family())
    out += list(transformation_family())
    out.append(("S3", symmetric_group_s3()))
    out.append(("P2+Z2", disjoint_union(pair_groupoid(2), cyclic_group(2))))
    return out
