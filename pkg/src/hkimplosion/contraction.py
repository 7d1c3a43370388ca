"""Contraction for SU(2) and SL(2, C).

Covers the closed-form contraction of ``SL(2, C) = T^*SU(2)`` onto singular
matrices, the gradient-Hamiltonian flow of ``Re det``, the map from
``T^*SU(2)`` to pairs of imploded points, its complex analogue on
``SL(2) x`` (Borel flags), and invariant-theory coordinates on the
contraction.

Conventions
-----------
* The right implosion of ``SU(2)`` is ``C^2`` with ``z = sqrt(2 lam) k e_1``;
  the left one uses the row ``w = sqrt(2 lam) e_1^T h``.
* ``H^2`` points are ``(alpha, beta)`` with ``alpha`` a column and ``beta`` a
  row.  A pair ``(g, x)`` with ``x`` upper triangular gives
  ``alpha = g e_1`` and ``beta = e_1^T (x + x_11 I) g^{-1}``; this is
  invariant under the upper unipotent group and ``beta alpha = 2 x_11``.
* Left-implosion records are stored with ``alpha`` and ``beta`` swapped
  (opposite torus weights), so that ``v = (alpha1, beta2)`` collects the
  weight ``-1`` coordinates of a pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DegenerateFlow, PreconditionError
from .quiver import H2Point

DEFAULT_TOL = 1e-9
J = np.array([[0, 1], [-1, 0]], dtype=complex)
J_TILDE = np.kron(np.eye(2), J)
E1 = np.array([1, 0], dtype=complex)


def _as2x2(b) -> np.ndarray:
    b = np.asarray(b, dtype=complex)
    if b.shape != (2, 2):
        raise PreconditionError("expected a 2x2 matrix", code="shape")
    return b


def check_sl2(b, tol: float = DEFAULT_TOL) -> np.ndarray:
    b = _as2x2(b)
    if abs(np.linalg.det(b) - 1) > tol:
        raise PreconditionError("determinant is not 1", code="non_unit_determinant",
                                det=complex(np.linalg.det(b)))
    return b


def su2_flow_closed_form(b, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``B = U sqrt(B^*B)  ->  U sqrt(B^*B - gamma I)``, ``gamma = min eig(B^*B)``."""
    b = check_sl2(b, tol)
    evals, evecs = np.linalg.eigh(b.conj().T @ b)
    p_inv = (evecs / np.sqrt(evals)) @ evecs.conj().T
    u = b @ p_inv
    gap = evals - evals[0]
    # a gap at rounding level is indistinguishable from zero; its square root is not
    gap[gap <= 16 * np.finfo(float).eps * evals[-1]] = 0.0
    shifted = np.sqrt(gap)
    return u @ ((evecs * shifted) @ evecs.conj().T)


def _cofactor(m: np.ndarray) -> np.ndarray:
    return np.array([[m[1, 1], -m[1, 0]], [-m[0, 1], m[0, 0]]])


def gh_vector_field(m: np.ndarray) -> np.ndarray:
    """``-grad Re(det) / |grad Re(det)|^2`` in the flat metric on 2x2 matrices.

    ``grad Re(det)`` is the conjugate cofactor matrix, whose norm equals
    ``|m|``; along the flow ``det`` decreases at unit rate.
    """
    cof = _cofactor(m)
    return -np.conj(cof) / np.vdot(cof, cof).real


class FlowTrajectory(NamedTuple):
    t: np.ndarray
    matrices: np.ndarray


def gh_flow_numeric(b, steps: int | None = None, rtol: float = 1e-11, atol: float = 1e-13,
                    min_norm: float = 1e-3, tol: float = DEFAULT_TOL, trajectory: bool = False):
    """Integrate the gradient-Hamiltonian field of ``det`` for unit time.

    Uses adaptive Dormand-Prince stepping; ``steps`` caps the step size at
    ``1/steps``.  Raises ``DegenerateFlow`` when the path approaches the zero
    matrix, where the field is singular (inputs in ``SU(2)``).
    """
    b = check_sl2(b, tol)

    def rhs(_t, y):
        m = (y[:4] + 1j * y[4:]).reshape(2, 2)
        v = gh_vector_field(m).ravel()
        return np.concatenate([v.real, v.imag])

    def near_zero(_t, y):
        return np.linalg.norm(y) - min_norm

    near_zero.terminal = True
    near_zero.direction = -1

    sv = np.linalg.svd(b, compute_uv=False)
    if np.sqrt(max(sv[0] ** 2 - sv[1] ** 2, 0.0)) < min_norm:
        raise DegenerateFlow("flow enters degenerate locus", singular_values=sv.tolist())

    y0 = np.concatenate([b.ravel().real, b.ravel().imag])
    kwargs = {"max_step": 1.0 / steps} if steps else {}
    sol = solve_ivp(rhs, (0.0, 1.0), y0, method="RK45", rtol=rtol, atol=atol,
                    events=near_zero, **kwargs)
    if sol.status == 1 or not sol.success:
        raise DegenerateFlow("flow enters degenerate locus")
    mats = (sol.y[:4] + 1j * sol.y[4:]).T.reshape(-1, 2, 2)
    if trajectory:
        return FlowTrajectory(sol.t, mats)
    return mats[-1]


def singular_value_gap(b) -> float:
    sv = np.linalg.svd(_as2x2(b), compute_uv=False)
    return float(sv[0] - sv[1])


@dataclass(frozen=True, eq=False)
class CotangentPoint:
    """``(k, v)`` with ``k`` in SU(2) and ``v`` traceless anti-Hermitian."""

    k: np.ndarray
    v: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        k = _as2x2(self.k)
        v = _as2x2(self.v)
        if np.linalg.norm(k.conj().T @ k - np.eye(2)) > self.tol or abs(np.linalg.det(k) - 1) > self.tol:
            raise PreconditionError("k is not in SU(2)", code="not_unitary")
        if abs(np.trace(v)) > self.tol or np.linalg.norm(v + v.conj().T) > self.tol:
            raise PreconditionError("v is not traceless anti-Hermitian", code="not_su2")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "v", v)


def implode_su2(k, lam: float) -> np.ndarray:
    """Point ``sqrt(2 lam) k e_1`` of the universal implosion ``C^2``."""
    if lam < 0:
        raise PreconditionError("negative chamber coordinate", code="negative_lambda")
    return np.sqrt(2 * lam) * (_as2x2(k) @ E1)


def diagonalize_su2(v) -> tuple[np.ndarray, float]:
    """``h`` in SU(2) and ``lam >= 0`` with ``h v h^* = lam diag(i, -i)``."""
    evals, q = np.linalg.eigh(-1j * _as2x2(v))
    lam = float(max(evals[1], 0.0))
    hstar = np.column_stack([q[:, 1], q[:, 0]])
    hstar[:, 1] *= np.conj(np.linalg.det(hstar))
    return hstar.conj().T, lam


def phi(x: CotangentPoint) -> np.ndarray:
    """Map ``T^*SU(2)`` to the contraction ``{XW - YZ = 0}``.

    ``(k, v) -> [(k h^{-1}, h.v), (h, v)]`` written in the invariants
    ``z (x) w``.  The torus ambiguity in ``h`` scales ``z`` and ``w``
    inversely and drops out.
    """
    h, lam = diagonalize_su2(x.v)
    z = implode_su2(x.k @ h.conj().T, lam)
    w = np.sqrt(2 * lam) * h[0, :]
    return np.outer(z, w)


def equivalent(x: CotangentPoint, y: CotangentPoint, tol: float = DEFAULT_TOL) -> bool:
    """Contraction equivalence for SU(2), using the right moment map ``v``.

    The commutator subgroup of the stabilizer of ``v`` is trivial when
    ``v != 0`` and all of SU(2) when ``v = 0``.
    """
    if np.linalg.norm(x.v - y.v) > tol:
        return False
    if np.linalg.norm(x.v) <= tol:
        return True
    return bool(np.linalg.norm(x.k - y.k) <= tol)


def quadric_defect(m) -> float:
    m = _as2x2(m)
    return float(abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]))


def max_minor(m) -> float:
    """Largest modulus among all 2x2 minors."""
    m = np.asarray(m)
    rows, cols = m.shape
    best = 0.0
    for i in range(rows):
        for k in range(i + 1, rows):
            d = np.outer(m[i], m[k])
            minors = d - d.T
            best = max(best, float(np.max(np.abs(minors))))
    return best


def _h2(p) -> tuple[np.ndarray, np.ndarray]:
    alpha = np.asarray(p[0], dtype=complex).reshape(2)
    beta = np.asarray(p[1], dtype=complex).reshape(2)
    return alpha, beta


def torus_moment(p) -> complex:
    """``beta alpha = alpha_1 beta_1 + alpha_2 beta_2``."""
    alpha, beta = _h2(p)
    return complex(beta @ alpha)


def regroup(p1, p2) -> tuple[np.ndarray, np.ndarray]:
    """``v = (alpha1, beta2)``, ``w = (beta1, alpha2)``: weight ``-1`` and ``+1`` halves."""
    a1, b1 = _h2(p1)
    a2, b2 = _h2(p2)
    return np.concatenate([a1, b2]), np.concatenate([b1, a2])


def complex_invariants(p1, p2, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Invariants ``v (x) w`` of a zero-level pair, a point of the minimal orbit closure."""
    v, w = regroup(p1, p2)
    mu = v @ w
    if abs(mu) > tol * max(1.0, np.linalg.norm(v) * np.linalg.norm(w)):
        raise PreconditionError("torus moment level nonzero", code="level_nonzero", level=complex(mu))
    return np.outer(v, w)


def swann_weyl(m) -> np.ndarray:
    """``A -> J~ A^T J~`` with ``J~ = diag(J, J)``."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise PreconditionError("expected a 4x4 matrix", code="shape")
    return J_TILDE @ m.T @ J_TILDE


def q_circ_membership(p, tol: float = DEFAULT_TOL) -> bool:
    return abs(torus_moment(p)) > tol


def borel_line_transform(line) -> np.ndarray:
    """``h`` in SL(2, C) sending the line to the ``e_1``-line (``h l = e_1``)."""
    ell = np.asarray(line, dtype=complex).reshape(2)
    nrm = np.vdot(ell, ell).real
    if nrm == 0:
        raise PreconditionError("line must be a nonzero vector", code="zero_line")
    m = np.array([-np.conj(ell[1]), np.conj(ell[0])]) / nrm
    return np.linalg.inv(np.column_stack([ell, m]))


def _right_record(g: np.ndarray, x: np.ndarray) -> H2Point:
    alpha = g @ E1
    beta = (x[0] + x[0, 0] * E1) @ np.linalg.inv(g)
    return H2Point(alpha, beta)


class PsiResult(NamedTuple):
    right: H2Point
    left: H2Point
    invariants: np.ndarray
    h: np.ndarray


def psi_sl2(g, v, line, h=None, tol: float = DEFAULT_TOL) -> PsiResult:
    """``(g, v, l) -> [(g h^{-1}, h.v), (h, v)]`` with ``h l`` on the ``e_1``-line.

    ``v`` must preserve ``l``.  Any ``h`` may be supplied; it is checked to
    send ``l`` into the ``e_1``-line and the result depends on it only up to
    the Borel subgroup, which the invariants do not see.
    """
    g = check_sl2(g, tol)
    v = _as2x2(v)
    ell = np.asarray(line, dtype=complex).reshape(2)
    if abs(np.trace(v)) > tol * max(1.0, np.linalg.norm(v)):
        raise PreconditionError("v must be traceless", code="not_sl2")
    vl = v @ ell
    if abs(vl[0] * ell[1] - vl[1] * ell[0]) > tol * max(1.0, np.linalg.norm(v)) * np.vdot(ell, ell).real:
        raise PreconditionError("vector not in chosen Borel", code="not_in_borel")
    if h is None:
        h = borel_line_transform(ell)
    else:
        h = check_sl2(h, tol)
        hl = h @ ell
        if abs(hl[1]) > tol * np.linalg.norm(hl):
            raise PreconditionError("h does not send the line to the e1-line", code="bad_h")
    hinv = np.linalg.inv(h)
    x_right = h @ v @ hinv
    right = _right_record(g @ hinv, x_right)
    nat = _right_record(hinv, -x_right)
    left = H2Point(nat.beta, nat.alpha)
    return PsiResult(right, left, complex_invariants(right, left, tol), h)
