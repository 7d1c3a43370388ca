"""Full-flag quivers for the SU(n) implosion.

The quiver is ``0 <-> C <-> C^2 <-> ... <-> C^{n-1} <-> C^n`` with maps
``alpha_i : C^i -> C^{i+1}`` and ``beta_i : C^{i+1} -> C^i`` for
``i = 1..n-1`` (``alpha_0 = beta_0 = 0``).  Python lists are 0-based, so
``rep.alphas[i - 1]`` is ``alpha_i``; vertex ``i`` carries ``C^i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import NoConvergence, PreconditionError

J = np.array([[0, 1], [-1, 0]], dtype=complex)


@dataclass(frozen=True, eq=False)
class QuiverRep:
    n: int
    alphas: tuple
    betas: tuple

    def __post_init__(self):
        if self.n < 2:
            raise PreconditionError("flag length must be at least 2", code="shape")
        if len(self.alphas) != self.n - 1 or len(self.betas) != self.n - 1:
            raise PreconditionError("shape mismatch", code="shape")
        alphas, betas = [], []
        for i in range(1, self.n):
            a = np.asarray(self.alphas[i - 1], dtype=complex)
            b = np.asarray(self.betas[i - 1], dtype=complex)
            if a.shape != (i + 1, i) or b.shape != (i, i + 1):
                raise PreconditionError("shape mismatch", code="shape", vertex=i)
            if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
                raise PreconditionError("non-finite entries", code="shape")
            alphas.append(a)
            betas.append(b)
        object.__setattr__(self, "alphas", tuple(alphas))
        object.__setattr__(self, "betas", tuple(betas))

    @classmethod
    def zero(cls, n: int) -> "QuiverRep":
        return cls(n, tuple(np.zeros((i + 1, i)) for i in range(1, n)),
                   tuple(np.zeros((i, i + 1)) for i in range(1, n)))

    def alpha(self, i: int) -> np.ndarray:
        """``alpha_i`` with ``alpha_0`` the empty map ``C^0 -> C^1``."""
        return np.zeros((1, 0), dtype=complex) if i == 0 else self.alphas[i - 1]

    def beta(self, i: int) -> np.ndarray:
        return np.zeros((0, 1), dtype=complex) if i == 0 else self.betas[i - 1]

    def norm2(self) -> float:
        return float(sum(np.linalg.norm(m) ** 2 for m in self.alphas + self.betas))


class H2Point(NamedTuple):
    """Point of ``Hom(C, C^2) + Hom(C^2, C)``: a column ``alpha`` and a row ``beta``."""

    alpha: np.ndarray
    beta: np.ndarray

    def to_rep(self) -> QuiverRep:
        return QuiverRep(2, (np.reshape(self.alpha, (2, 1)),), (np.reshape(self.beta, (1, 2)),))

    @classmethod
    def from_rep(cls, rep: QuiverRep) -> "H2Point":
        if rep.n != 2:
            raise PreconditionError("expected n = 2 data", code="shape")
        return cls(rep.alphas[0][:, 0].copy(), rep.betas[0][0, :].copy())


def _traceless(m: np.ndarray) -> np.ndarray:
    k = m.shape[0]
    return m - np.trace(m) / k * np.eye(k) if k else m


def complex_moment(rep: QuiverRep) -> tuple[np.ndarray, np.ndarray]:
    """Scalars ``lambda_i`` and the norms of the traceless defects.

    At vertex ``i`` the matrix ``alpha_{i-1} beta_{i-1} - beta_i alpha_i``
    should equal ``lambda_i I``; ``lambda_i`` is its trace over ``i``.
    """
    lam = np.zeros(rep.n - 1, dtype=complex)
    res = np.zeros(rep.n - 1)
    for i in range(1, rep.n):
        m = rep.alpha(i - 1) @ rep.beta(i - 1) - rep.beta(i) @ rep.alpha(i)
        lam[i - 1] = np.trace(m) / i
        res[i - 1] = np.linalg.norm(_traceless(m))
    return lam, res


def _moment_matrix(rep: QuiverRep, i: int) -> np.ndarray:
    a0, a1 = rep.alpha(i - 1), rep.alpha(i)
    b0, b1 = rep.beta(i - 1), rep.beta(i)
    return a0 @ a0.conj().T - a1.conj().T @ a1 + b1 @ b1.conj().T - b0.conj().T @ b0


def _gauge_vertices(rep: QuiverRep, mode: str) -> range:
    if mode == "SU":
        return range(2, rep.n)
    if mode == "U":
        return range(1, rep.n)
    raise PreconditionError("mode must be 'SU' or 'U'", code="bad_mode")


def real_moment_matrices(rep: QuiverRep, mode: str = "SU", level=None) -> list[np.ndarray]:
    out = []
    for i in _gauge_vertices(rep, mode):
        mu = _moment_matrix(rep, i)
        if mode == "SU":
            mu = _traceless(mu)
        elif level is not None:
            mu = mu - level[i - 1] * np.eye(i)
        out.append(mu)
    return out


def real_moment(rep: QuiverRep, mode: str = "SU", level=None) -> np.ndarray:
    """Frobenius norms of the real moment map at each gauged vertex.

    Mode ``"SU"`` takes traceless parts at vertices ``2..n-1`` (``SU(1)`` is
    trivial); mode ``"U"`` uses the full matrices at ``1..n-1``, shifted by
    ``level[i-1] * I`` when a real level is requested.
    """
    return np.array([np.linalg.norm(m) for m in real_moment_matrices(rep, mode, level)])


def _check_gauge(rep: QuiverRep, gs: Sequence) -> list[np.ndarray]:
    if len(gs) not in (rep.n - 1, rep.n):
        raise PreconditionError("gauge tuple has the wrong length", code="shape")
    out = []
    for i, g in enumerate(gs, start=1):
        g = np.asarray(g, dtype=complex).reshape(i, i) if i == 1 else np.asarray(g, dtype=complex)
        if g.shape != (i, i):
            raise PreconditionError("gauge element has the wrong size", code="shape", vertex=i)
        if abs(np.linalg.det(g)) < 1e-14 or np.linalg.cond(g) > 1e14:
            raise PreconditionError("singular gauge element", code="singular_gauge", vertex=i)
        out.append(g)
    return out


def act(rep: QuiverRep, gs: Sequence) -> QuiverRep:
    """Gauge action ``alpha_i -> g_{i+1} alpha_i g_i^{-1}``, ``beta_i -> g_i beta_i g_{i+1}^{-1}``.

    ``gs`` holds ``g_1 .. g_{n-1}``, optionally followed by a flavor element
    ``g_n`` acting on ``C^n``; without it ``g_n = I``.
    """
    g = _check_gauge(rep, gs)
    if len(g) == rep.n - 1:
        g.append(np.eye(rep.n, dtype=complex))
    ginv = [np.linalg.inv(x) for x in g]
    alphas = tuple(g[i] @ rep.alphas[i - 1] @ ginv[i - 1] for i in range(1, rep.n))
    betas = tuple(g[i - 1] @ rep.betas[i - 1] @ ginv[i] for i in range(1, rep.n))
    return QuiverRep(rep.n, alphas, betas)


def _expm_hermitian(h: np.ndarray, s: float) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.exp(s * w)) @ v.conj().T


@dataclass
class RealMomentSolution:
    rep: QuiverRep
    iterations: int
    residual: float
    objective_history: list = field(default_factory=list)


def solve_real_moment(rep: QuiverRep, mode: str = "SU", max_iter: int = 10_000,
                      tol: float = 1e-10, level=None, max_step: float = 8.0) -> RealMomentSolution:
    """Move along the complexified gauge orbit until the real moment vanishes.

    Gradient descent on ``sum_i ||mu_i||^2``: each step acts by
    ``exp(-s mu_i)`` at every gauged vertex (``mu_i`` Hermitian, traceless in
    mode ``"SU"``) with step halving until the objective decreases.  Complex
    moment data are preserved because the action is by conjugation.
    """
    vertices = list(_gauge_vertices(rep, mode))

    def objective(x):
        mus = real_moment_matrices(x, mode, level)
        return mus, float(sum(np.linalg.norm(m) ** 2 for m in mus))

    x = rep
    mus, f = objective(x)
    history = [f]
    step = 0.5 / max(1.0, x.norm2())
    for it in range(max_iter + 1):
        res = max((np.linalg.norm(m) for m in mus), default=0.0)
        if res < tol:
            return RealMomentSolution(x, it, float(res), history)
        if it == max_iter:
            break
        s = step
        while True:
            gs = [np.eye(i, dtype=complex) for i in range(1, rep.n)]
            for i, mu in zip(vertices, mus):
                gs[i - 1] = _expm_hermitian(-mu, s)
            trial = act(x, gs)
            tmus, tf = objective(trial)
            if tf < f:
                break
            s *= 0.5
            if s < 1e-300:
                raise NoConvergence("no convergence", residual=float(res), iterations=it)
        x, mus, f = trial, tmus, tf
        history.append(f)
        step = min(2.0 * s, max_step)
    res = max((np.linalg.norm(m) for m in mus), default=0.0)
    raise NoConvergence("no convergence", residual=float(res), iterations=max_iter)


class Nilpotency(NamedTuple):
    X: np.ndarray
    nilpotent: bool


def end_matrix_nilpotency(rep: QuiverRep, tol: float = 1e-8) -> Nilpotency:
    """``X = alpha_{n-1} beta_{n-1}`` and whether ``X^n`` vanishes.

    On the zero level ``X^k = alpha_{n-1}..alpha_{n-k} beta_{n-k}..beta_{n-1}``,
    which dies at ``k = n`` because ``alpha_0 = 0``.
    """
    lam, res = complex_moment(rep)
    if np.max(res, initial=0.0) > tol or np.max(np.abs(lam), initial=0.0) > tol:
        raise PreconditionError("representation not on the zero complex level", code="off_level")
    x = rep.alphas[-1] @ rep.betas[-1]
    nx = np.linalg.norm(x)
    xn = np.linalg.matrix_power(x, rep.n)
    return Nilpotency(x, bool(nx == 0 or np.linalg.norm(xn) < tol * nx ** (rep.n - 1)))


def sl2_gamma(p: H2Point) -> H2Point:
    """Weyl involution on ``H^2``: ``(alpha, beta) -> ((beta J)^T, (J alpha)^T)``."""
    alpha = np.asarray(p.alpha, dtype=complex).reshape(2)
    beta = np.asarray(p.beta, dtype=complex).reshape(2)
    return H2Point(beta @ J, J @ alpha)


def flag_rep_from_upper(u: np.ndarray) -> QuiverRep:
    """Zero-level rep built from a strictly upper-triangular ``n x n`` matrix.

    ``alpha_i`` includes ``C^i`` into ``C^{i+1}`` and ``beta_i`` is the top
    ``i`` rows of the leading ``(i+1)``-block of ``u``; then
    ``beta_i alpha_i = u_i = alpha_{i-1} beta_{i-1}`` and ``X = u``.
    """
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    if np.any(np.tril(u) != 0):
        raise PreconditionError("expected a strictly upper-triangular matrix", code="shape")
    alphas = tuple(np.eye(i + 1, i, dtype=complex) for i in range(1, n))
    betas = tuple(u[:i, : i + 1].copy() for i in range(1, n))
    return QuiverRep(n, alphas, betas)
