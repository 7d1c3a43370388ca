"""Central hyperplane arrangements: flats, broad subsets and strata.

Hyperplanes live in the dual space; each is given by a primitive integer
normal ``alpha_i`` and equals ``{x : alpha_i . x = 0}``.  Index sets are
0-based frozensets internally and 1-based sorted lists on the JSON boundary.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from . import _lattice
from .errors import PreconditionError
from .rootsys import RootSystem

MAX_EXHAUSTIVE = 24
ZERO_TOL = 1e-10


@dataclass(frozen=True)
class Arrangement:
    rank: int
    normals: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.normals)

    def matrix(self) -> np.ndarray:
        """``N x r`` array whose rows are the normals."""
        return np.array(self.normals, dtype=float).reshape(self.size, self.rank)

    @classmethod
    def from_root_system(cls, rs: RootSystem) -> "Arrangement":
        return from_normals(rs.rank, rs.positive_roots)


@dataclass(frozen=True)
class Flat:
    index_set: frozenset
    subspace_dim: int

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.index_set))


@dataclass(frozen=True)
class BroadSet:
    index_set: frozenset

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.index_set))


def from_normals(rank: int, vectors: Iterable[Sequence[int]]) -> Arrangement:
    """Validate and primitivize a list of integer normals."""
    normals = []
    seen = set()
    for v in vectors:
        v = tuple(int(x) for x in v)
        if len(v) != rank:
            raise PreconditionError("dimension mismatch", code="dimension_mismatch")
        if all(x == 0 for x in v):
            raise PreconditionError("degenerate normal", code="degenerate_normal")
        p = _lattice.primitive(v)
        key = _lattice.sign_normalize(p)
        if key in seen:
            raise PreconditionError("repeated hyperplane", code="repeated_hyperplane", normal=list(v))
        seen.add(key)
        normals.append(p)
    return Arrangement(rank=rank, normals=tuple(normals))


def _guard(arr: Arrangement) -> None:
    if arr.size > MAX_EXHAUSTIVE:
        raise PreconditionError("arrangement too large for exhaustive enumeration",
                                code="too_large", size=arr.size)


@functools.lru_cache(maxsize=4096)
def _rank_of(arr: Arrangement, idx: frozenset) -> int:
    return _lattice.rank([arr.normals[i] for i in sorted(idx)])


def closure(arr: Arrangement, idx: Iterable[int]) -> frozenset:
    """All hyperplanes containing the intersection of those in ``idx``."""
    idx = frozenset(idx)
    r = _rank_of(arr, idx)
    return frozenset(
        j for j in range(arr.size) if j in idx or _rank_of(arr, idx | {j}) == r
    )


def is_flat(arr: Arrangement, idx: Iterable[int]) -> bool:
    idx = frozenset(idx)
    return closure(arr, idx) == idx


def flats(arr: Arrangement) -> list[Flat]:
    """Every flat, found by closing each of the ``2^N`` subsets."""
    _guard(arr)
    found = set()
    for k in range(arr.size + 1):
        for sub in itertools.combinations(range(arr.size), k):
            found.add(closure(arr, sub))
    out = [Flat(f, arr.rank - _rank_of(arr, f)) for f in found]
    out.sort(key=lambda f: (len(f.index_set), f.sorted()))
    return out


def _strictly_feasible(a_ub: np.ndarray) -> bool:
    n = a_ub.shape[1]
    if a_ub.shape[0] == 0:
        return True
    res = linprog(np.zeros(n), A_ub=a_ub, b_ub=-np.ones(a_ub.shape[0]),
                  bounds=[(None, None)] * n, method="highs")
    return res.status == 0


def is_broad(arr: Arrangement, idx: Iterable[int]) -> bool:
    """Whether the sign cone of ``idx`` has nonempty interior.

    Uses margin-1 feasibility: find ``x`` with ``alpha_i . x >= 1`` on the
    set and ``<= -1`` off it, which is equivalent for cones.
    """
    idx = frozenset(idx)
    a = arr.matrix()
    signs = np.array([-1.0 if i in idx else 1.0 for i in range(arr.size)])
    return _strictly_feasible(signs[:, None] * a)


def broad_subsets(arr: Arrangement) -> list[BroadSet]:
    _guard(arr)
    out = []
    for k in range(arr.size + 1):
        for sub in itertools.combinations(range(arr.size), k):
            if is_broad(arr, sub):
                out.append(BroadSet(frozenset(sub)))
    return out


@dataclass(frozen=True)
class Stratum:
    flat: Flat
    zero_pairs: frozenset
    in_mg: bool
    in_open_stratum: bool
    codimension: int


def stratum_codimension(arr: Arrangement, flat: Flat) -> int:
    """Complex codimension of the stratum indexed by ``flat``."""
    return 2 * (arr.rank - flat.subspace_dim)


def stratum_of(arr: Arrangement, a, b, tol: float = ZERO_TOL) -> Stratum:
    """Locate the point ``(a, b)`` in the flat stratification.

    A pair counts as zero when both coordinates have modulus at most ``tol``.
    ``in_mg`` marks the locus made of the open stratum and the strata of
    single hyperplanes.
    """
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    if a.shape != (arr.size,) or b.shape != (arr.size,):
        raise PreconditionError("size mismatch", code="size_mismatch")
    zeros = frozenset(int(i) for i in np.flatnonzero((np.abs(a) <= tol) & (np.abs(b) <= tol)))
    f = closure(arr, zeros)
    flat = Flat(f, arr.rank - _rank_of(arr, f))
    return Stratum(
        flat=flat,
        zero_pairs=zeros,
        in_mg=len(f) <= 1,
        in_open_stratum=not f,
        codimension=stratum_codimension(arr, flat),
    )


def _saturated_basis(vectors: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Z-basis of ``span_Q(vectors) ∩ Z^dim``, standard basis when full."""
    if not vectors:
        return []
    if _lattice.rank(vectors) == dim:
        return [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    perp = _lattice.integer_kernel(vectors, dim)
    return _lattice.integer_kernel(perp, dim)


def _dedupe(rank: int, vectors) -> Arrangement:
    seen, out = set(), []
    for v in vectors:
        p = _lattice.primitive(v)
        key = _lattice.sign_normalize(p)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return Arrangement(rank=rank, normals=tuple(out))


def restriction_localization(arr: Arrangement, flat: Flat | Iterable[int]) -> tuple[Arrangement, Arrangement]:
    """Restriction to ``H_F`` and localization to the quotient by ``H_F``.

    The restriction is written in an integer basis of ``H_F`` (normals of
    ``i not in F`` paired against that basis, proportional duplicates merged);
    the localization writes the normals of ``i in F`` in an integer basis of
    their saturated span, the dual of the quotient space.
    """
    idx = flat.index_set if isinstance(flat, Flat) else frozenset(flat)
    if not is_flat(arr, idx):
        raise PreconditionError("not a flat", code="not_a_flat", index_set=sorted(idx))
    inside = [arr.normals[i] for i in sorted(idx)]
    if inside:
        h_basis = _lattice.integer_kernel(inside, arr.rank)
    else:
        h_basis = [tuple(int(i == j) for j in range(arr.rank)) for i in range(arr.rank)]
    restricted = [
        tuple(sum(x * y for x, y in zip(arr.normals[i], b)) for b in h_basis)
        for i in range(arr.size) if i not in idx
    ]
    restriction = _dedupe(len(h_basis), restricted)

    span = _saturated_basis(inside, arr.rank)
    coords = []
    for v in inside:
        c = _lattice.solve_exact(span, v)
        coords.append(tuple(int(x) for x in c))
    localization = Arrangement(rank=len(span), normals=tuple(coords))
    return restriction, localization


def to_json(arr: Arrangement) -> dict:
    return {"rank": arr.rank, "normals": [list(v) for v in arr.normals]}


def index_list(idx) -> list[int]:
    return [i + 1 for i in sorted(idx)]
