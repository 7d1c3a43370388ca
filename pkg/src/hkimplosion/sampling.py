"""Seeded generators of random test data.

Every function takes a ``numpy.random.Generator`` so that a single seed
reproduces an entire verification run.
"""

from __future__ import annotations

import numpy as np

from . import mtcat
from .arrangement import Arrangement
from .contraction import CotangentPoint, borel_line_transform
from .hypertoric import HypertoricPoint, lift_moments
from .quiver import H2Point, QuiverRep, act, flag_rep_from_upper


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def cnormal(rng, size=None) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def su2(rng) -> np.ndarray:
    """Haar-random ``SU(2)`` element from a unit quaternion."""
    q = rng.standard_normal(4)
    a, b = complex(q[0], q[1]), complex(q[2], q[3])
    n = np.hypot(abs(a), abs(b))
    a, b = a / n, b / n
    return np.array([[a, -np.conj(b)], [b, np.conj(a)]])


def su2_algebra(rng, scale: float = 1.0) -> np.ndarray:
    x, y, z = scale * rng.standard_normal(3)
    return np.array([[1j * z, x + 1j * y], [-x + 1j * y, -1j * z]])


def sl2(rng, scale: float = 1.0) -> np.ndarray:
    m = scale * cnormal(rng, (2, 2)) + np.eye(2)
    d = np.linalg.det(m)
    while abs(d) < 1e-3:
        m = scale * cnormal(rng, (2, 2)) + np.eye(2)
        d = np.linalg.det(m)
    return m / np.sqrt(d)


def sl2_with_gap(rng, min_gap: float = 0.1, max_norm: float = 4.0) -> np.ndarray:
    """``SL(2)`` element ``U diag(s, 1/s) V`` with ``s - 1/s`` at least ``min_gap``."""
    lo = (min_gap + np.sqrt(min_gap ** 2 + 4)) / 2
    s = rng.uniform(lo, max(lo * 1.0001, max_norm))
    return su2(rng) @ np.diag([s, 1 / s]) @ su2(rng)


def cotangent_point(rng, degenerate_prob: float = 0.1) -> CotangentPoint:
    v = np.zeros((2, 2), dtype=complex) if rng.random() < degenerate_prob else su2_algebra(rng)
    return CotangentPoint(su2(rng), v)


def zero_level_point(rng, arr: Arrangement, scale: float = 1.0) -> HypertoricPoint:
    """Generic point on both zero ``L``-levels."""
    xi_c = scale * cnormal(rng, arr.rank)
    xi_r = scale * rng.standard_normal(arr.rank)
    return lift_moments(arr, xi_c, xi_r, rng.uniform(0, 2 * np.pi, arr.size))


def gl(rng, k: int, scale: float = 0.5) -> np.ndarray:
    """Well-conditioned random element of ``GL(k, C)``."""
    g = np.eye(k) + scale * cnormal(rng, (k, k)) / np.sqrt(k)
    while np.linalg.cond(g) > 1e3:
        g = np.eye(k) + scale * cnormal(rng, (k, k)) / np.sqrt(k)
    return g


def nilpotent_quiver(rng, n: int, flavor: bool = True) -> QuiverRep:
    """Gauge transform of the rep built from a random strictly upper-triangular matrix."""
    u = np.triu(cnormal(rng, (n, n)), 1)
    rep = flag_rep_from_upper(u)
    gs = [gl(rng, i) for i in range(1, n + (1 if flavor else 0))]
    return act(rep, gs)


def h2_point(rng) -> H2Point:
    return H2Point(cnormal(rng, 2), cnormal(rng, 2))


def zero_level_pair(rng) -> tuple[H2Point, H2Point]:
    """Two points of ``H^2`` whose torus moments cancel."""
    p1 = h2_point(rng)
    alpha2 = cnormal(rng, 2)
    beta2 = cnormal(rng, 2)
    target = -(p1.beta @ p1.alpha)
    beta2 = beta2 + (target - beta2 @ alpha2) * np.conj(alpha2) / np.vdot(alpha2, alpha2).real
    return p1, H2Point(alpha2, beta2)


def borel_element(rng) -> np.ndarray:
    """Random upper-triangular element of ``SL(2, C)``."""
    t = cnormal(rng)
    while abs(t) < 0.2:
        t = cnormal(rng)
    return np.array([[t, cnormal(rng)], [0, 1 / t]])


def psi_triple(rng) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(g, v, l)`` with ``v`` preserving the line ``l``."""
    g = sl2(rng)
    line = cnormal(rng, 2)
    h = borel_line_transform(line)
    a = cnormal(rng)
    x = np.array([[a, cnormal(rng)], [0, -a]])
    v = np.linalg.inv(h) @ x @ h
    return g, v, line


GROUP_CHOICES = (
    lambda k: mtcat.sl(k + 2),
    lambda k: mtcat.so(k + 3),
    lambda k: mtcat.sp(k + 1),
    lambda k: mtcat.gl(k + 1),
    lambda k: mtcat.torus(k + 1),
)


def group_object(rng) -> mtcat.GroupObject:
    return GROUP_CHOICES[rng.integers(len(GROUP_CHOICES))](int(rng.integers(0, 4)))


def source_morphism(rng, g: mtcat.GroupObject | None = None) -> mtcat.MTMorphism:
    """A morphism ``1 -> G`` of random dimension at least ``dim G``."""
    g = g or group_object(rng)
    dim = g.complex_dimension + int(rng.integers(0, 2 * g.complex_dimension + 4))
    return mtcat.MTMorphism(f"M{dim}", mtcat.TRIVIAL, g, dim)
