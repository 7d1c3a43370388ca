"""Root systems and Weyl groups with exact integer arithmetic.

Roots are integer coefficient vectors in the basis of simple roots.  The
Cartan matrix follows the convention ``cartan[i][j] = <alpha_i, alpha_j^v>
= 2 (alpha_i, alpha_j) / (alpha_j, alpha_j)``, so the simple reflection
``s_j`` sends ``beta`` to ``beta - <beta, alpha_j^v> alpha_j``.

Elements of the dual space are written in the coordinates dual to the simple
roots (fundamental-weight coordinates): ``xi[j] = alpha_j(xi)``.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _lattice
from .errors import PreconditionError

CHAMBER_TOL = 1e-10

SUPPORTED = {
    "A": (1, 2, 3, 4, 5),
    "B": (2, 3),
    "C": (2, 3),
    "D": (4,),
    "G": (2,),
}

Vector = tuple[int, ...]


def _gram(family: str, rank: int) -> list[list[int]]:
    """Symmetric inner product of simple roots, scaled to integers."""
    g = [[0] * rank for _ in range(rank)]
    if family == "G":
        # alpha_1 short, alpha_2 long
        return [[2, -3], [-3, 6]]
    for i in range(rank):
        g[i][i] = 2
    for i in range(rank - 1):
        g[i][i + 1] = g[i + 1][i] = -1
    if family == "B":
        # last simple root short
        g[-1][-1] = 1
    elif family == "C":
        # last simple root long
        for i in range(rank - 1):
            g[i][i] = 2
        g[-1][-1] = 4
        g[-2][-1] = g[-1][-2] = -2
    elif family == "D":
        g[-2][-1] = g[-1][-2] = 0
        g[-3][-1] = g[-1][-3] = -1
    return g


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    simple_roots: tuple[Vector, ...]
    positive_roots: tuple[Vector, ...]
    cartan_matrix: tuple[Vector, ...]
    gram: tuple[Vector, ...]

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def n_positive(self) -> int:
        return len(self.positive_roots)

    def root_matrix(self) -> np.ndarray:
        """Positive roots as the rows of an ``N x r`` integer array."""
        return np.array(self.positive_roots, dtype=int).reshape(self.n_positive, self.rank)

    def pairing_coroot(self, beta: Sequence[int], j: int) -> int:
        return sum(c * self.cartan_matrix[i][j] for i, c in enumerate(beta))

    def inner(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(x[i] * self.gram[i][j] * y[j] for i in range(self.rank) for j in range(self.rank))


def _reflect(rs_cartan, beta: Vector, j: int) -> Vector:
    p = sum(c * rs_cartan[i][j] for i, c in enumerate(beta))
    out = list(beta)
    out[j] -= p
    return tuple(out)


def build_root_system(family: str, rank: int) -> RootSystem:
    """Build one of the supported root systems.

    Positive roots are found as the Weyl orbit of the simple roots
    intersected with the nonnegative orthant; simple roots come first, the
    rest ordered by height and then lexicographically.
    """
    family = str(family).upper()
    if family not in SUPPORTED or rank not in SUPPORTED[family]:
        raise PreconditionError("unsupported root system", code="unsupported_root_system",
                                family=family, rank=rank)
    gram = _gram(family, rank)
    cartan = tuple(
        tuple(2 * gram[i][j] // gram[j][j] for j in range(rank)) for i in range(rank)
    )
    simple = tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))

    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for j in range(rank):
                gamma = _reflect(cartan, beta, j)
                if gamma not in roots:
                    roots.add(gamma)
                    nxt.append(gamma)
        frontier = nxt
    positive = [b for b in roots if all(c >= 0 for c in b)]
    rest = sorted((b for b in positive if b not in simple), key=lambda b: (sum(b), b))
    return RootSystem(
        family=family,
        rank=rank,
        simple_roots=simple,
        positive_roots=simple + tuple(rest),
        cartan_matrix=cartan,
        gram=tuple(tuple(r) for r in gram),
    )


def parse_name(name: str) -> RootSystem:
    """``"A2"`` -> ``build_root_system("A", 2)``."""
    name = name.strip()
    try:
        return build_root_system(name[0], int(name[1:]))
    except (ValueError, IndexError):
        raise PreconditionError("unsupported root system", code="unsupported_root_system",
                                name=name) from None


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element with its action on positive-root indices.

    ``matrix`` acts on simple-root coordinates; ``sigma`` is 0-based and
    satisfies ``matrix @ root[i] == signs[i] * root[sigma[i]]``.  ``word``
    lists simple-reflection indices with ``matrix = s_word[0] s_word[1] ...``.
    """

    matrix: tuple[Vector, ...]
    sigma: tuple[int, ...]
    signs: tuple[int, ...]
    word: tuple[int, ...]

    def as_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=int)

    @functools.cached_property
    def dual_matrix(self) -> np.ndarray:
        """Matrix of the contragredient action on fundamental-weight coordinates."""
        inv = _lattice.int_inverse(self.matrix)
        return np.array(inv, dtype=int).T

    def act_dual(self, xi):
        return self.dual_matrix @ np.asarray(xi)

    @property
    def is_identity(self) -> bool:
        return not self.word


def _matmul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _apply(m, v):
    return tuple(sum(m[i][k] * v[k] for k in range(len(v))) for i in range(len(m)))


def simple_reflection_matrix(rs: RootSystem, j: int) -> tuple[Vector, ...]:
    cols = [_reflect(rs.cartan_matrix, e, j) for e in rs.simple_roots]
    return tuple(tuple(cols[c][r] for c in range(rs.rank)) for r in range(rs.rank))


def signed_permutation(rs: RootSystem, matrix) -> tuple[tuple[int, ...], tuple[int, ...]]:
    index = {b: i for i, b in enumerate(rs.positive_roots)}
    sigma, signs = [], []
    for beta in rs.positive_roots:
        img = _apply(matrix, beta)
        if img in index:
            sigma.append(index[img])
            signs.append(1)
        else:
            sigma.append(index[tuple(-c for c in img)])
            signs.append(-1)
    return tuple(sigma), tuple(signs)


@functools.lru_cache(maxsize=None)
def weyl_elements(rs: RootSystem) -> tuple[WeylElement, ...]:
    """All Weyl group elements by breadth-first closure, identity first.

    Words are the first found by BFS; they have minimal length among words
    reached by left multiplication but no reducedness normal form is imposed.
    """
    ident = tuple(tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank))
    gens = [simple_reflection_matrix(rs, j) for j in range(rs.rank)]
    seen = {ident: ()}
    order = [ident]
    queue = deque([ident])
    while queue:
        m = queue.popleft()
        for j, s in enumerate(gens):
            new = _matmul(s, m)
            if new not in seen:
                seen[new] = (j,) + seen[m]
                order.append(new)
                queue.append(new)
    out = []
    for m in order:
        sigma, signs = signed_permutation(rs, m)
        out.append(WeylElement(matrix=m, sigma=sigma, signs=signs, word=seen[m]))
    return tuple(out)


def multiply(rs: RootSystem, w1: WeylElement, w2: WeylElement) -> WeylElement:
    m = _matmul(w1.matrix, w2.matrix)
    for w in weyl_elements(rs):
        if w.matrix == m:
            return w
    raise AssertionError("Weyl group not closed")  # pragma: no cover


def chamber_membership(rs: RootSystem, xi, closed: bool = True, tol: float = CHAMBER_TOL) -> bool:
    """Whether ``xi`` (fundamental-weight coordinates) lies in the positive chamber."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if xi.shape != (rs.rank,):
        raise PreconditionError("dimension mismatch", code="dimension_mismatch",
                                expected=rs.rank, got=list(xi.shape))
    if closed:
        return bool(np.all(xi >= -tol))
    return bool(np.all(xi > tol))


def weyl_to_json(w: WeylElement) -> dict:
    return {
        "matrix": [list(r) for r in w.matrix],
        "sigma": [s + 1 for s in w.sigma],
        "signs": list(w.signs),
        "word": [j + 1 for j in w.word],
    }


def root_system_to_json(rs: RootSystem) -> dict:
    return {
        "family": rs.family,
        "rank": rs.rank,
        "simple_roots": [list(r) for r in rs.simple_roots],
        "positive_roots": [list(r) for r in rs.positive_roots],
        "cartan_matrix": [list(r) for r in rs.cartan_matrix],
        "n_positive": rs.n_positive,
    }
