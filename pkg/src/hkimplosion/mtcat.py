"""Dimension and symmetry bookkeeping in the Moore-Tachikawa category.

Morphisms carry only their complex dimension and the extra group actions
picked up along the way; composition over a shared group ``G2`` is the
reduction of the product by the diagonal ``G2``.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class GroupObject:
    name: str
    complex_dimension: int
    rank: int
    abelian: bool = False

    def __post_init__(self):
        if not 0 <= self.rank <= self.complex_dimension:
            raise ValueError(f"{self.name}: rank must lie in [0, dim]")
        if self.abelian and self.rank != self.complex_dimension:
            raise ValueError(f"{self.name}: an abelian group has rank equal to its dimension")

    def maximal_torus(self) -> "GroupObject":
        return torus(self.rank, name=f"T({self.name})")


def sl(n: int) -> GroupObject:
    return GroupObject(f"SL({n})", n * n - 1, n - 1)


def gl(n: int) -> GroupObject:
    return GroupObject(f"GL({n})", n * n, n)


def so(n: int) -> GroupObject:
    return GroupObject(f"SO({n})", n * (n - 1) // 2, n // 2)


def sp(n: int) -> GroupObject:
    """``Sp(2n)``."""
    return GroupObject(f"Sp({2 * n})", n * (2 * n + 1), n)


def torus(r: int, name: str | None = None) -> GroupObject:
    return GroupObject(name or f"T{r}", r, r, abelian=True)


TRIVIAL = GroupObject("1", 0, 0, abelian=True)


class DegenerateCompositionWarning(UserWarning):
    pass


@dataclass(frozen=True)
class MTMorphism:
    label: str
    source: GroupObject
    target: GroupObject
    complex_dimension: int
    extra_actions: tuple[GroupObject, ...] = ()
    degenerate: bool = False
    derivation: dict | None = field(default=None, compare=False)
    identity: bool = field(default=False, compare=False)

    def __post_init__(self):
        ends = {self.source.name, self.target.name}
        if any(g.name in ends for g in self.extra_actions):
            raise ValueError("extra actions must differ from source and target")


def compose(x: MTMorphism, y: MTMorphism, label: str | None = None) -> MTMorphism:
    """``Y o X = (X x Y) /// G2`` for ``X: G1 -> G2`` and ``Y: G2 -> G3``.

    The dimension drops by twice ``dim G2``; an abelian middle group survives
    as an extra action unless one factor is an identity, whose anti-diagonal
    action is the outer one.  A negative result is flagged, not rejected.
    """
    if x.target != y.source:
        raise ValueError(f"middle objects differ: {x.target.name} vs {y.source.name}")
    mid = x.target
    dim = x.complex_dimension + y.complex_dimension - 2 * mid.complex_dimension
    extra = x.extra_actions + y.extra_actions
    if mid.abelian and mid.complex_dimension > 0 and not (x.identity or y.identity):
        extra = extra + (mid,)
    degenerate = dim < 0 or x.degenerate or y.degenerate
    if dim < 0:
        warnings.warn(f"composition {y.label} o {x.label} has negative dimension {dim}",
                      DegenerateCompositionWarning, stacklevel=2)
    label = label or f"({y.label} o {x.label})"
    step = {
        "op": "compose",
        "label": label,
        "via": mid.name,
        "dimension": dim,
        "formula": f"{x.complex_dimension} + {y.complex_dimension} - 2*{mid.complex_dimension}",
        "left": derivation_tree(x),
        "right": derivation_tree(y),
    }
    return MTMorphism(
        label=label,
        source=x.source,
        target=y.target,
        complex_dimension=dim,
        extra_actions=_rename_duplicates(extra, {x.source.name, y.target.name}),
        degenerate=degenerate,
        derivation=step,
        identity=x.identity and y.identity,
    )


def derivation_tree(m: MTMorphism) -> dict:
    """Nested record of how ``m`` was built, with the dimension at every node."""
    if m.derivation is not None:
        return m.derivation
    return {"op": "atom", "label": m.label, "dimension": m.complex_dimension}


def _rename_duplicates(groups, reserved):
    out, used = [], set(reserved)
    for g in groups:
        name, k = g.name, 1
        while name in used:
            k += 1
            name = f"{g.name}#{k}"
        used.add(name)
        out.append(g if name == g.name else replace(g, name=name))
    return tuple(out)


def product_group(g: GroupObject, h: GroupObject) -> GroupObject:
    if g == TRIVIAL:
        return h
    if h == TRIVIAL:
        return g
    return GroupObject(f"{g.name}x{h.name}", g.complex_dimension + h.complex_dimension,
                       g.rank + h.rank, g.abelian and h.abelian)


def tensor(x: MTMorphism, y: MTMorphism) -> MTMorphism:
    """Monoidal product: groups and spaces multiply, dimensions add."""
    src = product_group(x.source, y.source)
    tgt = product_group(x.target, y.target)
    label = f"({x.label} (x) {y.label})"
    step = {"op": "tensor", "label": label, "dimension": x.complex_dimension + y.complex_dimension,
            "left": derivation_tree(x), "right": derivation_tree(y)}
    return MTMorphism(
        label=label,
        source=src,
        target=tgt,
        complex_dimension=x.complex_dimension + y.complex_dimension,
        extra_actions=_rename_duplicates(x.extra_actions + y.extra_actions, {src.name, tgt.name}),
        degenerate=x.degenerate or y.degenerate,
        derivation=step,
        identity=x.identity and y.identity,
    )


def identity(g: GroupObject) -> MTMorphism:
    return MTMorphism(f"T*{g.name}", g, g, 2 * g.complex_dimension, identity=True)


def right_implosion(g: GroupObject) -> MTMorphism:
    return MTMorphism(f"Q^R({g.name})", g, g.maximal_torus(), g.complex_dimension + g.rank)


def left_implosion(g: GroupObject) -> MTMorphism:
    return MTMorphism(f"Q^L({g.name})", g.maximal_torus(), g, g.complex_dimension + g.rank)


def universal_contraction(g: GroupObject) -> MTMorphism:
    return compose(right_implosion(g), left_implosion(g), label=f"(T*{g.name})_con")


def catalog(g: GroupObject) -> list[MTMorphism]:
    """Identity, right and left universal implosions and the universal contraction."""
    return [identity(g), right_implosion(g), left_implosion(g), universal_contraction(g)]


def implode(m: MTMorphism) -> MTMorphism:
    return compose(m, right_implosion(m.target))


def contract(m: MTMorphism) -> MTMorphism:
    """Implode, then compose with the left implosion: same dimension, extra torus."""
    return compose(implode(m), left_implosion(m.target))


def to_json(m: MTMorphism) -> dict:
    return {
        "label": m.label,
        "source": m.source.name,
        "target": m.target.name,
        "complex_dimension": m.complex_dimension,
        "extra_actions": [g.name for g in m.extra_actions],
        "degenerate": m.degenerate,
        "identity": m.identity,
        "derivation": derivation_tree(m),
    }


_GROUP_PATTERNS = {
    "SL": sl,
    "GL": gl,
    "SO": so,
    "Sp": lambda n: sp(n // 2),
}

CATALOG_ENTRIES = {
    "identity": identity,
    "right_implosion": right_implosion,
    "left_implosion": left_implosion,
    "contraction": universal_contraction,
}


def parse_group(spec) -> GroupObject:
    """``"SL(2)"``, ``"GL(3)"``, ``"SO(5)"``, ``"Sp(4)"``, ``"T2"``, ``"1"`` or an explicit record."""
    if isinstance(spec, dict):
        return GroupObject(spec["name"], int(spec["complex_dimension"]), int(spec["rank"]),
                           bool(spec.get("abelian", False)))
    m = re.fullmatch(r"\s*(SL|GL|SO|Sp)\((\d+)\)\s*", spec)
    if m:
        n = int(m.group(2))
        if m.group(1) == "Sp" and n % 2:
            raise ValueError("Sp(n) needs even n")
        if n < 1 or (m.group(1) == "SL" and n < 2):
            raise ValueError(f"unsupported group {spec!r}")
        return _GROUP_PATTERNS[m.group(1)](n)
    m = re.fullmatch(r"\s*T(\d+)\s*", spec)
    if m:
        return torus(int(m.group(1)))
    if spec.strip() == "1":
        return TRIVIAL
    raise ValueError(f"unknown group {spec!r}")


def parse_morphism(spec: dict) -> MTMorphism:
    """A catalog reference ``{"catalog": ..., "group": ...}`` or an explicit morphism."""
    if "catalog" in spec:
        return CATALOG_ENTRIES[spec["catalog"]](parse_group(spec["group"]))
    return MTMorphism(
        spec.get("label", "X"),
        parse_group(spec["source"]),
        parse_group(spec["target"]),
        int(spec["complex_dimension"]),
        tuple(parse_group(g) for g in spec.get("extra_actions", ())),
    )


def compose_chain(morphisms) -> MTMorphism:
    """Left-to-right composition ``X_k o ... o X_1`` of a chain ``X_1, ..., X_k``."""
    it = iter(morphisms)
    try:
        acc = next(it)
    except StopIteration:
        raise ValueError("empty chain") from None
    for m in it:
        acc = compose(acc, m)
    return acc
