"""Seeded property suites run by ``hkimplosion verify``.

Each suite returns a list of :class:`PropertyResult`; samples are drawn in
index order from one generator, so a report is a pure function of the seed.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import arrangement, contraction, hypertoric, mtcat, nahm, quiver, rootsys, sampling
from .errors import NoConvergence


@dataclass
class PropertyResult:
    name: str
    passed: bool
    max_deviation: float
    samples: int

    def to_json(self) -> dict:
        d = asdict(self)
        d["max_deviation"] = float(self.max_deviation)
        return d


def _result(name, deviation, threshold, samples) -> PropertyResult:
    return PropertyResult(name, bool(deviation < threshold), float(deviation), samples)


def _flag(name, failures, samples) -> PropertyResult:
    return PropertyResult(name, failures == 0, float(failures), samples)


def weyl_equivariance(seed: int, samples: int = 100) -> list[PropertyResult]:
    """``mu(w.p) = w.mu(p)`` for both moment maps over every ``w``; ``gamma^2`` on A1."""
    rng = sampling.rng_for(seed)
    out = []
    for name in ("A1", "A2"):
        rs = rootsys.parse_name(name)
        arr = arrangement.Arrangement.from_root_system(rs)
        worst = 0.0
        for _ in range(samples):
            p = sampling.zero_level_point(rng, arr)
            tm = hypertoric.t_moment(arr, p)
            for w in rootsys.weyl_elements(rs):
                tw = hypertoric.t_moment(arr, hypertoric.weyl_act(rs, arr, w, p))
                worst = max(worst,
                            np.abs(tw.xi_complex - w.act_dual(tm.xi_complex)).max(),
                            np.abs(tw.xi_real - w.act_dual(tm.xi_real)).max())
        out.append(_result(f"moment equivariance {name}", worst, 1e-10, samples))
    rs = rootsys.parse_name("A1")
    arr = arrangement.Arrangement.from_root_system(rs)
    s1 = rootsys.weyl_elements(rs)[1]
    fails = 0
    for _ in range(samples):
        p = sampling.zero_level_point(rng, arr)
        q = hypertoric.weyl_act(rs, arr, s1, hypertoric.weyl_act(rs, arr, s1, p))
        fails += not (np.array_equal(q.a, -p.a) and np.array_equal(q.b, -p.b))
    out.append(_flag("gamma squared is -1 on A1", fails, samples))
    return out


def cocycle(seed: int, samples: int = 10) -> list[PropertyResult]:
    """``w1.(w2.p)`` and ``(w1 w2).p`` differ by a sign in the coordinate torus."""
    rng = sampling.rng_for(seed)
    out = []
    for name in ("A2", "B2", "G2"):
        rs = rootsys.parse_name(name)
        arr = arrangement.Arrangement.from_root_system(rs)
        ws = rootsys.weyl_elements(rs)
        worst = 0.0
        for _ in range(samples):
            p = sampling.zero_level_point(rng, arr)
            for w1 in ws:
                inner = hypertoric.weyl_act(rs, arr, w1, p)
                for w2 in ws:
                    q1 = hypertoric.weyl_act(rs, arr, w2, inner)
                    q2 = hypertoric.weyl_act(rs, arr, rootsys.multiply(rs, w2, w1), p)
                    eps = np.round((q1.a / q2.a).real)
                    worst = max(worst, np.abs(np.abs(eps) - 1).max(),
                                np.abs(q1.a - eps * q2.a).max(), np.abs(q1.b - eps * q2.b).max())
        out.append(_result(f"sign cocycle {name}", worst, 1e-12, samples))
    return out


def broad_count(seed: int, samples: int = 0) -> list[PropertyResult]:
    out = []
    for name in ("A1", "A2", "B2", "G2"):
        rs = rootsys.parse_name(name)
        arr = arrangement.Arrangement.from_root_system(rs)
        diff = abs(len(arrangement.broad_subsets(arr)) - len(rootsys.weyl_elements(rs)))
        out.append(_flag(f"broad subsets equal |W| for {name}", diff, 1))
    return out


def nilpotent_cone(seed: int, samples: int = 200) -> list[PropertyResult]:
    rng = sampling.rng_for(seed)
    worst = 0.0
    fails = 0
    for _ in range(samples):
        n = int(rng.integers(2, 6))
        rep = sampling.nilpotent_quiver(rng, n)
        nil = quiver.end_matrix_nilpotency(rep)
        fails += not nil.nilpotent
        worst = max(worst, float(np.linalg.norm(np.linalg.matrix_power(nil.X, n))))
    return [_result("X^n vanishes", worst, 1e-8, samples), _flag("nilpotency flag", fails, samples)]


def example_rep(c: complex = 0.0) -> quiver.QuiverRep:
    """The ``n = 3`` rep with ``alpha_1 = 1``, ``beta_1 = c``, ``alpha_2 = [e1 e2]``."""
    a1 = np.array([[1], [0]])
    b1 = np.array([[c, 0]])
    a2 = np.eye(3, 2)
    b2 = np.array([[0, 0, 1], [0, 0, 0]])
    return quiver.QuiverRep(3, (a1, a2), (b1, b2))


def real_moment_solver(seed: int, samples: int = 10) -> list[PropertyResult]:
    """Solver convergence and preservation of complex data, on the example and random reps."""
    rng = sampling.rng_for(seed)
    reps = [example_rep()] + [sampling.nilpotent_quiver(rng, int(rng.integers(2, 5)), flavor=False)
                              for _ in range(samples)]
    res_worst, drift, monotone = 0.0, 0.0, 0
    for rep in reps:
        lam0, r0 = quiver.complex_moment(rep)
        sol = quiver.solve_real_moment(rep, "SU", max_iter=10_000, tol=1e-10)
        lam1, r1 = quiver.complex_moment(sol.rep)
        res_worst = max(res_worst, sol.residual)
        drift = max(drift, np.abs(lam1 - lam0).max(initial=0.0), np.abs(r1 - r0).max(initial=0.0))
        monotone += bool(np.any(np.diff(sol.objective_history) > 0))
    return [
        _result("real residual", res_worst, 1e-8, len(reps)),
        _result("complex data preserved", drift, 1e-9, len(reps)),
        _flag("objective non-increasing", monotone, len(reps)),
    ]


def flow_equivariance(seed: int, samples: int = 100) -> list[PropertyResult]:
    rng = sampling.rng_for(seed)
    eq, det = 0.0, 0.0
    for _ in range(samples):
        b = sampling.sl2(rng)
        k1, k2 = sampling.su2(rng), sampling.su2(rng)
        f = contraction.su2_flow_closed_form(b)
        eq = max(eq, np.abs(contraction.su2_flow_closed_form(k1 @ b @ k2) - k1 @ f @ k2).max())
        det = max(det, abs(np.linalg.det(f)))
    return [_result("closed form equivariance", eq, 1e-8, samples),
            _result("closed form lands in singular matrices", det, 1e-9, samples)]


def ghflow(seed: int, samples: int = 50) -> list[PropertyResult]:
    rng = sampling.rng_for(seed)
    err, drift, affine = 0.0, 0.0, 0.0
    for _ in range(samples):
        b = sampling.sl2_with_gap(rng, 0.1)
        traj = contraction.gh_flow_numeric(b, trajectory=True)
        err = max(err, np.abs(traj.matrices[-1] - contraction.su2_flow_closed_form(b)).max())
        dets = np.linalg.det(traj.matrices)
        drift = max(drift, np.abs(dets.imag - dets[0].imag).max())
        affine = max(affine, np.abs(dets.real - (1 - traj.t)).max())
    return [_result("numeric flow matches closed form", err, 1e-4, samples),
            _result("Im det conserved", drift, 1e-6, samples),
            _result("Re det affine in time", affine, 1e-6, samples)]


def phi_separation(seed: int, samples: int = 500) -> list[PropertyResult]:
    """``phi(x) = phi(y)`` iff ``x ~ y``, with pairs biased toward equivalence."""
    rng = sampling.rng_for(seed)
    mismatch, quad = 0, 0.0
    for _ in range(samples):
        x = sampling.cotangent_point(rng, degenerate_prob=0.2)
        kind = rng.integers(4)
        if kind == 0:
            y = x
        elif kind == 1 and np.linalg.norm(x.v) == 0:
            y = contraction.CotangentPoint(sampling.su2(rng), x.v)
        elif kind == 2:
            h, lam = contraction.diagonalize_su2(x.v)
            theta = rng.uniform(0.1, 3.0)
            t = np.diag([np.exp(1j * theta), np.exp(-1j * theta)])
            y = contraction.CotangentPoint(x.k @ h.conj().T @ t @ h, x.v)
        else:
            y = sampling.cotangent_point(rng, degenerate_prob=0.2)
        px, py = contraction.phi(x), contraction.phi(y)
        same = bool(np.abs(px - py).max() < 1e-9)
        mismatch += same != contraction.equivalent(x, y)
        quad = max(quad, contraction.quadric_defect(px), contraction.quadric_defect(py))
    return [_flag("phi separates equivalence classes", mismatch, samples),
            _result("XW - YZ vanishes", quad, 1e-12, samples)]


def quadric(seed: int, samples: int = 500) -> list[PropertyResult]:
    rng = sampling.rng_for(seed)
    minors, tr, sq = 0.0, 0.0, 0.0
    for _ in range(samples):
        p1, p2 = sampling.zero_level_pair(rng)
        m = contraction.complex_invariants(p1, p2)
        minors = max(minors, contraction.max_minor(m))
        tr = max(tr, abs(np.trace(m)))
        sq = max(sq, np.abs(m @ m).max())
    return [_result("2x2 minors vanish", minors, 1e-10, samples),
            _result("trace vanishes", tr, 1e-10, samples),
            _result("square vanishes", sq, 1e-10, samples)]


def psi_welldefined(seed: int, samples: int = 50, reambiguations: int = 100) -> list[PropertyResult]:
    rng = sampling.rng_for(seed)
    worst = 0.0
    for _ in range(samples):
        g, v, line = sampling.psi_triple(rng)
        base = contraction.psi_sl2(g, v, line)
        for _ in range(reambiguations):
            other = contraction.psi_sl2(g, v, line, h=sampling.borel_element(rng) @ base.h)
            worst = max(worst, np.abs(other.invariants - base.invariants).max())
    return [_result("psi invariants independent of h", worst, 1e-9, samples)]


SWANN_SIGN = np.diag([-1, -1, 1, 1])


def swann(seed: int, samples: int = 200) -> list[PropertyResult]:
    """Involution property and compatibility with ``gamma`` on both copies of ``H^2``."""
    rng = sampling.rng_for(seed)
    inv, compat = 0.0, 0.0
    for _ in range(samples):
        p1, p2 = sampling.zero_level_pair(rng)
        m = contraction.complex_invariants(p1, p2)
        inv = max(inv, np.abs(contraction.swann_weyl(contraction.swann_weyl(m)) - m).max())
        n = contraction.complex_invariants(quiver.sl2_gamma(p1), quiver.sl2_gamma(p2))
        compat = max(compat, np.abs(contraction.swann_weyl(m) - SWANN_SIGN @ n @ SWANN_SIGN).max())
    return [_result("swann involution", inv, 1e-12, samples),
            _result("swann matches gamma on pairs", compat, 1e-10, samples)]


def dimension_arithmetic(seed: int, samples: int = 20) -> list[PropertyResult]:
    rng = sampling.rng_for(seed)
    sl2 = mtcat.sl(2)
    cat = mtcat.catalog(sl2)
    fixed = abs(cat[1].complex_dimension - 4) + abs(cat[3].complex_dimension - 6)
    fails = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", mtcat.DegenerateCompositionWarning)
        for _ in range(samples):
            m = sampling.source_morphism(rng)
            c = mtcat.contract(m)
            unit = mtcat.compose(m, mtcat.identity(m.target))
            fails += c.complex_dimension != m.complex_dimension
            fails += unit.complex_dimension != m.complex_dimension
            fails += len(c.extra_actions) != len(m.extra_actions) + 1 + m.target.abelian
            fails += unit.extra_actions != m.extra_actions
    return [_flag("SL(2) catalog dimensions 4 and 6", fixed, 1),
            _flag("contraction preserves dimension", fails, samples)]


def nahm_scaling(seed: int, samples: int = 5) -> list[PropertyResult]:
    rng = sampling.rng_for(seed)
    e = nahm.su2_basis()
    init = np.stack([np.zeros((2, 2)), *(-e)])
    coarse = nahm.integrate(init, (1.0, 2.0), 200)
    exact = nahm.exact_pole_solution(coarse.grid)
    fine = nahm.integrate(init, (1.0, 2.0), 400)
    ratio = nahm.residual(coarse) / nahm.residual(fine)
    worst = 0.0
    for _ in range(samples):
        c = rng.uniform(0.25, 4.0)
        eps = nahm.residual(coarse)
        scaled = nahm.residual(nahm.symmetry_transform(coarse, "scale", c))
        worst = max(worst, scaled / (2 * c * c * eps))
    return [
        _result("RK4 error against exact solution", np.abs(coarse.T - exact.T).max(), 1e-6, 1),
        PropertyResult("halving the step gains at least 8x", bool(ratio >= 8), float(ratio), 1),
        _result("scaling bound 2 c^2 eps (ratio)", worst, 1.0, samples),
    ]


SUITES: dict[str, Callable[..., list[PropertyResult]]] = {
    "weyl-equivariance": weyl_equivariance,
    "cocycle": cocycle,
    "broad-count": broad_count,
    "nilpotent-cone": nilpotent_cone,
    "real-moment-solver": real_moment_solver,
    "flow-equivariance": flow_equivariance,
    "ghflow": ghflow,
    "phi-separation": phi_separation,
    "quadric": quadric,
    "psi-welldefined": psi_welldefined,
    "swann": swann,
    "dimension-arithmetic": dimension_arithmetic,
    "nahm-scaling": nahm_scaling,
}


def run(suite: str, seed: int = 0, samples: int | None = None, timing: bool = False) -> dict:
    """Run one suite (or ``"all"``) and return a JSON-ready report."""
    from .errors import PreconditionError

    names = list(SUITES) if suite == "all" else [suite]
    if any(n not in SUITES for n in names):
        raise PreconditionError("unknown suite", code="unknown_suite", suite=suite,
                                known=sorted(SUITES))
    results = []
    for name in names:
        start = time.perf_counter()
        kwargs = {} if samples is None else {"samples": samples}
        try:
            props = SUITES[name](seed, **kwargs)
        except NoConvergence as exc:
            props = [PropertyResult("solver converged", False, float(exc.residual or np.inf), 1)]
        entry = {"suite": name, "properties": [p.to_json() for p in props],
                 "passed": all(p.passed for p in props)}
        if timing:
            entry["seconds"] = time.perf_counter() - start
        results.append(entry)
    return {"seed": seed, "suites": results, "passed": all(r["passed"] for r in results)}
