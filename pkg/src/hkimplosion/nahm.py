"""Nahm's equations ``dT_i/dt + [T_0, T_i] = [T_j, T_k]`` for cyclic ``(i, j, k)``.

Data are stored as one array of shape ``(4, K, d, d)`` holding ``T_0..T_3``
on ``K`` increasing time samples.  ``T_0`` is held fixed (no gauge
evolution), so integration only moves ``T_1..T_3``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import PoleEncountered, PreconditionError

BLOWUP_NORM = 1e6
ANTI_HERMITIAN_TOL = 1e-8
CYCLIC = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


def su2_basis() -> np.ndarray:
    """``e_i = -i sigma_i / 2``, satisfying ``[e_1, e_2] = e_3`` cyclically."""
    sigma = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)
    return -0.5j * sigma


@dataclass(frozen=True, eq=False)
class NahmData:
    grid: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        T = np.asarray(self.T, dtype=complex)
        if grid.ndim != 1 or T.ndim != 4 or T.shape[0] != 4 or T.shape[1] != grid.size \
                or T.shape[2] != T.shape[3]:
            raise PreconditionError("expected four d x d matrices per grid sample", code="shape")
        if grid.size > 1 and np.any(np.diff(grid) <= 0):
            raise PreconditionError("grid not strictly increasing", code="grid")
        if not np.all(np.isfinite(T)):
            raise PreconditionError("non-finite entries", code="shape")
        defect = np.abs(T + np.conj(np.swapaxes(T, -1, -2))).max(initial=0.0)
        if defect > ANTI_HERMITIAN_TOL * max(1.0, np.abs(T).max(initial=0.0)):
            raise PreconditionError("matrices not anti-Hermitian", code="not_anti_hermitian",
                                    defect=float(defect))
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "T", T)

    @property
    def dim(self) -> int:
        return self.T.shape[-1]

    @classmethod
    def from_function(cls, f, grid) -> "NahmData":
        """Sample ``f(t) -> (T0, T1, T2, T3)`` on ``grid``."""
        grid = np.asarray(grid, dtype=float)
        return cls(grid, np.stack([np.asarray(f(t), dtype=complex) for t in grid], axis=1))


def _comm(x, y):
    return x @ y - y @ x


def _rhs(t0: np.ndarray, t: np.ndarray) -> np.ndarray:
    """``dT_i/dt = [T_j, T_k] - [T_0, T_i]`` for ``T = (T_1, T_2, T_3)``."""
    return np.stack([_comm(t[j - 1], t[k - 1]) - _comm(t0, t[i - 1]) for i, j, k in CYCLIC])


def _is_uniform(grid: np.ndarray) -> bool:
    h = np.diff(grid)
    return bool(np.allclose(h, h[0], rtol=1e-9, atol=0.0))


def _derivative(grid: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, slice]:
    """Time derivative along axis 1 and the interior samples where it is valid.

    Uniform grids with at least five samples use the fourth-order
    five-point stencil; otherwise second-order central differences.
    """
    k = grid.size
    if k >= 5 and _is_uniform(grid):
        h = grid[1] - grid[0]
        d = np.zeros_like(y)
        d[:, 2:-2] = ((y[:, :-4] - y[:, 4:]) + 8 * (y[:, 3:-1] - y[:, 1:-3])) / (12 * h)
        return d, slice(2, k - 2)
    return np.gradient(y, grid, axis=1), slice(1, k - 1)


def residual(data: NahmData) -> float:
    """Max over interior samples and cyclic ``(i, j, k)`` of the Frobenius defect."""
    if data.grid.size < 3:
        raise PreconditionError("grid too short", code="grid_too_short")
    dT, inner = _derivative(data.grid, data.T)
    T = data.T
    worst = 0.0
    for i, j, k in CYCLIC:
        lhs = dT[i, inner] + _comm(T[0, inner], T[i, inner])
        rhs = _comm(T[j, inner], T[k, inner])
        worst = max(worst, float(np.linalg.norm(lhs - rhs, axis=(-2, -1)).max(initial=0.0)))
    return worst


def integrate(initial, interval, steps: int = 200) -> NahmData:
    """Classical RK4 with ``steps`` equal steps from ``interval[0]`` to ``interval[1]``.

    ``initial`` holds ``T_0..T_3`` at ``interval[0]``.  Integration may run
    backwards in time; the returned grid is always increasing.
    """
    init = np.asarray(initial, dtype=complex)
    if init.ndim != 3 or init.shape[0] != 4 or init.shape[1] != init.shape[2]:
        raise PreconditionError("expected four d x d matrices", code="shape")
    if steps < 16:
        raise PreconditionError("at least 16 steps required", code="too_few_steps")
    t_start, t_end = map(float, interval)
    if t_start == t_end:
        raise PreconditionError("empty interval", code="empty_interval")
    grid = np.linspace(t_start, t_end, steps + 1)
    h = grid[1] - grid[0]
    t0 = init[0]
    y = init[1:].copy()
    out = np.empty((steps + 1, 3) + init.shape[1:], dtype=complex)
    out[0] = y
    for n in range(steps):
        k1 = _rhs(t0, y)
        k2 = _rhs(t0, y + 0.5 * h * k1)
        k3 = _rhs(t0, y + 0.5 * h * k2)
        k4 = _rhs(t0, y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        size = np.abs(y).max()
        if not np.isfinite(size) or size > BLOWUP_NORM:
            raise PoleEncountered("pole encountered", t=float(grid[n + 1]), step=n + 1)
        out[n + 1] = y
    T = np.concatenate([np.broadcast_to(t0, (steps + 1,) + t0.shape)[None],
                        np.moveaxis(out, 1, 0)])
    if h < 0:
        grid, T = grid[::-1], T[:, ::-1]
    return NahmData(grid.copy(), T.copy())


def exact_pole_solution(grid) -> NahmData:
    """``T_0 = 0``, ``T_i(t) = -e_i / t``: a solution with a simple pole at ``t = 0``."""
    e = su2_basis()
    return NahmData.from_function(lambda t: np.stack([np.zeros((2, 2)), *(-e / t)]), grid)


def symmetry_transform(data: NahmData, kind: str = "scale", c: float = 1.0, grid=None) -> NahmData:
    """Apply ``T(t) -> c T(c t)`` (``kind="scale"``) or ``T(t) -> -T(-t)`` (``"reflect"``).

    Scaling without ``grid`` maps samples exactly onto ``data.grid / c``;
    with ``grid`` the new data are interpolated by cubic splines and every
    ``c * t`` must lie in the original domain.  Both symmetries act on all
    four matrices, so ``T_0`` transforms like the others.
    """
    if kind == "reflect":
        return NahmData(-data.grid[::-1], -data.T[:, ::-1])
    if kind != "scale":
        raise PreconditionError("unknown symmetry", code="bad_kind")
    if not c > 0:
        raise PreconditionError("scale factor must be positive", code="bad_scale")
    if grid is None:
        return NahmData(data.grid / c, c * data.T)
    grid = np.asarray(grid, dtype=float)
    src = c * grid
    lo, hi = data.grid[0], data.grid[-1]
    slack = 1e-12 * max(1.0, abs(lo), abs(hi))
    if src.min() < lo - slack or src.max() > hi + slack:
        raise PreconditionError("interpolation out of range", code="out_of_range")
    spline = CubicSpline(data.grid, data.T, axis=1)
    return NahmData(grid, c * spline(np.clip(src, lo, hi)))


def anti_hermitian_defect(data: NahmData) -> float:
    T = data.T
    return float(np.abs(T + np.conj(np.swapaxes(T, -1, -2))).max(initial=0.0))


def to_json(data: NahmData) -> dict:
    from .jsonio import encode_complex

    return {"grid": [float(t) for t in data.grid],
            "T": [encode_complex(data.T[m]) for m in range(4)]}


def from_json(obj: dict) -> NahmData:
    from .jsonio import decode_complex

    try:
        grid = obj["grid"]
        T = np.stack([decode_complex(m, 3) for m in obj["T"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError("malformed Nahm data", code="schema") from exc
    return NahmData(grid, T)
