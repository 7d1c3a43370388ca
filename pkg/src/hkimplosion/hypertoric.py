"""Points of affine hypertoric varieties and the Weyl-symmetric case.

A point of ``C^{2N}`` is a pair of complex ``N``-vectors ``(a, b)``.  The
torus ``G_m^N`` acts by ``(t a, t^{-1} b)``; its subtorus ``L`` is the kernel
of ``e_i -> alpha_i``.  Moment maps per coordinate are ``a_i b_i``
(complex) and ``(|a_i|^2 - |b_i|^2) / 2`` (real).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _lattice
from .arrangement import Arrangement, BroadSet
from .errors import PreconditionError
from .rootsys import RootSystem, WeylElement, weyl_elements

CONSISTENCY_TOL = 1e-9
ZERO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class HypertoricPoint:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=complex))
        b = np.atleast_1d(np.asarray(self.b, dtype=complex))
        if a.shape != b.shape or a.ndim != 1:
            raise PreconditionError("size mismatch", code="size_mismatch")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def size(self) -> int:
        return self.a.shape[0]

    def allclose(self, other: "HypertoricPoint", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.a, other.a, atol=atol) and np.allclose(self.b, other.b, atol=atol))

    @classmethod
    def zero(cls, n: int) -> "HypertoricPoint":
        return cls(np.zeros(n), np.zeros(n))


@dataclass(frozen=True)
class KernelLattice:
    basis: tuple[tuple[int, ...], ...]

    def matrix(self, n: int) -> np.ndarray:
        return np.array(self.basis, dtype=float).reshape(len(self.basis), n)


class TMoment(NamedTuple):
    xi_complex: np.ndarray
    xi_real: np.ndarray | None


@dataclass
class EmbeddingRecord:
    mu_complex: np.ndarray
    mu_real: np.ndarray | None
    components: dict[tuple[int, ...], HypertoricPoint] = field(default_factory=dict)


def _check(arr: Arrangement, p: HypertoricPoint) -> None:
    if p.size != arr.size:
        raise PreconditionError("size mismatch", code="size_mismatch",
                                expected=arr.size, got=p.size)


def kernel_lattice(arr: Arrangement) -> KernelLattice:
    cols = [[arr.normals[i][k] for i in range(arr.size)] for k in range(arr.rank)]
    if _lattice.rank(arr.normals) != arr.rank:
        raise PreconditionError("torus map not surjective", code="not_surjective")
    return KernelLattice(tuple(_lattice.integer_kernel(cols, arr.size)))


def coordinate_moments(p: HypertoricPoint) -> tuple[np.ndarray, np.ndarray]:
    return p.a * p.b, 0.5 * (np.abs(p.a) ** 2 - np.abs(p.b) ** 2)


def l_moment_residuals(arr: Arrangement, p: HypertoricPoint):
    """Moment maps of the subtorus ``L``, one entry per lattice generator."""
    _check(arr, p)
    lat = kernel_lattice(arr).matrix(arr.size)
    mc, mr = coordinate_moments(p)
    return lat @ mc, lat @ mr


def _solve(r: np.ndarray, rhs: np.ndarray, tol: float):
    xi, *_ = np.linalg.lstsq(r, rhs, rcond=None)
    err = np.linalg.norm(r @ xi - rhs)
    return xi, err <= tol * max(1.0, np.linalg.norm(rhs))


def t_moment(arr: Arrangement, p: HypertoricPoint, tol: float = CONSISTENCY_TOL) -> TMoment:
    """Moment maps of the quotient torus in fundamental-weight coordinates.

    ``xi_complex`` solves ``alpha_i(xi) = a_i b_i``; the point must lie on the
    complex zero level of ``L``.  ``xi_real`` is ``None`` when the point is
    off the real zero level, since the real moment then does not descend.
    """
    _check(arr, p)
    r = arr.matrix().astype(complex)
    mc, mr = coordinate_moments(p)
    xc, ok = _solve(r, mc, tol)
    if not ok:
        raise PreconditionError("point not on zero L-level", code="off_level")
    xr, ok_r = _solve(arr.matrix(), mr, tol)
    return TMoment(xc, xr if ok_r else None)


def _check_weyl(rs: RootSystem, arr: Arrangement) -> None:
    if arr.rank != rs.rank or tuple(arr.normals) != tuple(rs.positive_roots):
        raise PreconditionError("arrangement does not match root system", code="mismatch")


def weyl_act(rs: RootSystem, arr: Arrangement, w: WeylElement, p: HypertoricPoint) -> HypertoricPoint:
    """Permute pairs by ``sigma``; on sign-flipped indices use ``(a, b) -> (b, -a)``."""
    _check_weyl(rs, arr)
    _check(arr, p)
    a = np.empty_like(p.a)
    b = np.empty_like(p.b)
    for i, (j, s) in enumerate(zip(w.sigma, w.signs)):
        if s > 0:
            a[j], b[j] = p.a[i], p.b[i]
        else:
            a[j], b[j] = p.b[i], -p.a[i]
    return HypertoricPoint(a, b)


def in_cotangent_chart(arr: Arrangement, v, p: HypertoricPoint, tol: float = ZERO_TOL) -> bool:
    v = v.index_set if isinstance(v, BroadSet) else frozenset(v)
    relevant = [p.a[i] if i in v else p.b[i] for i in range(arr.size)]
    return sum(abs(x) <= tol for x in relevant) <= 1


def core_projection(arr: Arrangement, v, p: HypertoricPoint, tol: float = ZERO_TOL) -> HypertoricPoint:
    """Chart projection ``T^*X(V)^g -> X(V)``: kill ``b`` on ``V`` and ``a`` off it."""
    _check(arr, p)
    v = v.index_set if isinstance(v, BroadSet) else frozenset(v)
    if not in_cotangent_chart(arr, v, p, tol):
        raise PreconditionError("point outside cotangent chart", code="outside_chart")
    mask = np.array([i in v for i in range(arr.size)], dtype=bool)
    return HypertoricPoint(np.where(mask, p.a, 0), np.where(mask, 0, p.b))


def universal_components(rs: RootSystem, arr: Arrangement, p: HypertoricPoint) -> EmbeddingRecord:
    """Moment data plus one ``X(Omega)`` component per Weyl element.

    The component at ``w`` is the chart projection of ``w . p`` onto the
    core component of the full index set.  Components are keyed by the BFS
    word of ``w`` (0-based simple-reflection indices).
    """
    _check_weyl(rs, arr)
    tm = t_moment(arr, p)
    omega = frozenset(range(arr.size))
    rec = EmbeddingRecord(tm.xi_complex, tm.xi_real)
    for w in weyl_elements(rs):
        q = weyl_act(rs, arr, w, p)
        try:
            rec.components[w.word] = core_projection(arr, omega, q)
        except PreconditionError as exc:
            raise PreconditionError("point outside cotangent chart", code="outside_chart",
                                    weyl_word=[j + 1 for j in w.word]) from exc
    return rec


def lift_moments(arr: Arrangement, xi_complex, xi_real, phases=None) -> HypertoricPoint:
    """A point on both zero ``L``-levels with prescribed torus moments.

    Each coordinate pair solves ``a b = c`` and ``(|a|^2 - |b|^2)/2 = d`` for
    ``c = alpha(xi_complex)``, ``d = alpha(xi_real)``; ``phases`` fixes
    ``arg a``.
    """
    r = arr.matrix()
    c = r @ np.asarray(xi_complex, dtype=complex)
    d = r @ np.asarray(xi_real, dtype=float)
    if phases is None:
        phases = np.zeros(arr.size)
    a = np.empty(arr.size, dtype=complex)
    b = np.empty(arr.size, dtype=complex)
    for i in range(arr.size):
        if abs(c[i]) == 0:
            a[i] = np.sqrt(max(2 * d[i], 0.0)) * np.exp(1j * phases[i])
            b[i] = np.sqrt(max(-2 * d[i], 0.0))
        else:
            a2 = d[i] + np.hypot(d[i], abs(c[i]))
            a[i] = np.sqrt(a2) * np.exp(1j * phases[i])
            b[i] = c[i] / a[i]
    return HypertoricPoint(a, b)


def invariant_monomials(arr: Arrangement, x) -> np.ndarray:
    """``prod_i x_i^{alpha_i[j]}`` for each coordinate ``j``: ``L``-invariant characters."""
    x = np.asarray(x, dtype=complex)
    r = np.array(arr.normals, dtype=int).reshape(arr.size, arr.rank)
    return np.array([np.prod(x ** r[:, j]) for j in range(arr.rank)])


def sl2_embed_quiver(p: HypertoricPoint):
    """``(a, b) -> ((a, 0)^T, (b, 0))``, the embedding into the ``n = 2`` quiver."""
    from .quiver import H2Point

    if p.size != 1:
        raise PreconditionError("expected a point of the A1 hypertoric variety", code="wrong_arrangement")
    return H2Point(np.array([p.a[0], 0]), np.array([p.b[0], 0]))


def point_to_json(p: HypertoricPoint) -> dict:
    from .jsonio import encode

    return {"a": encode(p.a), "b": encode(p.b)}
