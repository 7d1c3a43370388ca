"""Acceptance criteria, one test each; a summary line per criterion is printed at the end."""

import json
import time
import warnings

import numpy as np

from hkimplosion import arrangement, cli, jsonio, mtcat, nahm, rootsys, sampling
from hkimplosion import contraction as C
from hkimplosion import hypertoric as H
from hkimplosion import quiver as Q
from hkimplosion.verify import example_rep


def test_criterion_01_closed_form(verdict, capsys, tmp_path):
    start = time.perf_counter()
    worst = 0.0
    for x in (1.0, 1.2, 2.0, 5.0):
        for b, pos in ((np.diag([x, 1 / x]), 0), (np.diag([1 / x, x]), 1)):
            path = tmp_path / "b.json"
            path.write_text(json.dumps({"B": b.tolist()}))
            assert cli.main(["contract", "flow", "--input", str(path)]) == 0
            m = jsonio.decode_complex(json.loads(capsys.readouterr().out)["matrix"], 2)
            expected = np.zeros((2, 2))
            expected[pos, pos] = np.sqrt(x * x - x ** -2)
            worst = max(worst, np.abs(m - expected).max())
    rng = sampling.rng_for(1)
    su2_worst = max(np.abs(C.su2_flow_closed_form(sampling.su2(rng))).max() for _ in range(200))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and su2_worst < 1e-9 and elapsed < 1.0
    verdict(1, ok, f"diag err {worst:.1e}, SU(2) err {su2_worst:.1e}, {elapsed:.2f}s")


def test_criterion_02_ghflow(verdict):
    start = time.perf_counter()
    rng = sampling.rng_for(2)
    dev = drift = 0.0
    for _ in range(50):
        b = sampling.sl2_with_gap(rng, 0.1)
        traj = C.gh_flow_numeric(b, trajectory=True)
        dev = max(dev, np.abs(traj.matrices[-1] - C.su2_flow_closed_form(b)).max())
        drift = max(drift, np.abs(np.linalg.det(traj.matrices).imag).max())
    elapsed = time.perf_counter() - start
    ok = dev < 1e-4 and drift < 1e-6 and elapsed < 30
    verdict(2, ok, f"max dev {dev:.1e}, Im det drift {drift:.1e}, {elapsed:.1f}s")


def test_criterion_03_phi_separation(verdict):
    rng = sampling.rng_for(3)
    points = [sampling.cotangent_point(rng, degenerate_prob=0.2) for _ in range(500)]
    # add equivalent partners for the degenerate points so the "same" side is exercised
    points += [C.CotangentPoint(sampling.su2(rng), p.v) for p in points[:100] if not p.v.any()]
    images = [C.phi(p) for p in points]
    counter = 0
    for i in range(len(points)):
        for j in range(i, len(points)):
            same = np.abs(images[i] - images[j]).max() < 1e-9
            counter += same != C.equivalent(points[i], points[j])
    quad = max(C.quadric_defect(m) for m in images)
    verdict(3, counter == 0 and quad < 1e-12, f"{counter} counterexamples, quadric {quad:.1e}")


def test_criterion_04_minimal_orbit(verdict):
    rng = sampling.rng_for(4)
    minor = trace = square = 0.0
    for _ in range(500):
        m = C.complex_invariants(*sampling.zero_level_pair(rng))
        minor = max(minor, C.max_minor(m))
        trace = max(trace, abs(np.trace(m)))
        square = max(square, np.linalg.norm(m @ m))
    ok = max(minor, trace, square) < 1e-10
    verdict(4, ok, f"minors {minor:.1e}, trace {trace:.1e}, square {square:.1e}")


def test_criterion_05_combinatorics(verdict):
    def arr(name):
        rs = rootsys.parse_name(name)
        return rs, arrangement.Arrangement.from_root_system(rs)

    _, a2 = arr("A2")
    counts = {"A2 flats": len(arrangement.flats(a2)), "A2 broad": len(arrangement.broad_subsets(a2)),
              "B2 broad": len(arrangement.broad_subsets(arr("B2")[1]))}
    ok = counts == {"A2 flats": 5, "A2 broad": 6, "B2 broad": 8}
    for name in ("A1", "A2", "B2", "G2"):
        rs, a = arr(name)
        counts[name] = (len(arrangement.broad_subsets(a)), len(rootsys.weyl_elements(rs)))
        ok &= counts[name][0] == counts[name][1]
    verdict(5, ok, ", ".join(f"{k} {v}" for k, v in counts.items()))


def test_criterion_06_equivariance(verdict):
    rng = sampling.rng_for(6)
    worst = 0.0
    for name in ("A1", "A2"):
        rs = rootsys.parse_name(name)
        arr = arrangement.Arrangement.from_root_system(rs)
        for _ in range(100):
            p = sampling.zero_level_point(rng, arr)
            tm = H.t_moment(arr, p)
            for w in rootsys.weyl_elements(rs):
                tw = H.t_moment(arr, H.weyl_act(rs, arr, w, p))
                worst = max(worst, np.abs(tw.xi_complex - w.act_dual(tm.xi_complex)).max(),
                            np.abs(tw.xi_real - w.act_dual(tm.xi_real)).max())
    rs = rootsys.parse_name("A1")
    arr = arrangement.Arrangement.from_root_system(rs)
    gamma = rootsys.weyl_elements(rs)[1]
    exact = True
    for _ in range(20):
        p = H.HypertoricPoint(sampling.cnormal(rng, 1), sampling.cnormal(rng, 1))
        q = H.weyl_act(rs, arr, gamma, H.weyl_act(rs, arr, gamma, p))
        exact &= np.array_equal(q.a, -p.a) and np.array_equal(q.b, -p.b)
    verdict(6, worst < 1e-10 and exact, f"max dev {worst:.1e}, gamma^2 = -1 exact: {exact}")


def test_criterion_07_nilpotent_cone(verdict):
    rng = sampling.rng_for(7)
    worst = 0.0
    admitted = 0
    for k in range(200):
        n = 2 + k % 4
        rep = sampling.nilpotent_quiver(rng, n)
        lam, res = Q.complex_moment(rep)
        if np.abs(lam).max() > 1e-10 or res.max() > 1e-10:
            continue
        admitted += 1
        x = Q.end_matrix_nilpotency(rep).X
        worst = max(worst, np.linalg.norm(np.linalg.matrix_power(x, n)))
    verdict(7, admitted == 200 and worst < 1e-8, f"{admitted}/200 reps, max |X^n| {worst:.1e}")


def test_criterion_08_real_solver(verdict):
    rep = example_rep()
    lam0, res0 = Q.complex_moment(rep)
    sol = Q.solve_real_moment(rep, "SU", max_iter=10_000, tol=1e-10)
    lam1, res1 = Q.complex_moment(sol.rep)
    drift = max(np.abs(lam1 - lam0).max(), np.abs(res1 - res0).max())
    ok = sol.residual < 1e-8 and sol.iterations <= 10_000 and drift < 1e-9
    verdict(8, ok, f"residual {sol.residual:.1e} in {sol.iterations} iterations, complex drift {drift:.1e}")


def test_criterion_09_dimensions(verdict):
    sl2 = mtcat.sl(2)
    impl = mtcat.right_implosion(sl2).complex_dimension
    con = mtcat.universal_contraction(sl2).complex_dimension
    rng = sampling.rng_for(9)
    mismatches = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", mtcat.DegenerateCompositionWarning)
        for _ in range(20):
            g = sampling.group_object(rng)
            m = sampling.source_morphism(rng, g)
            chain = mtcat.compose_chain([m, mtcat.right_implosion(g), mtcat.left_implosion(g)])
            mismatches += chain.complex_dimension != m.complex_dimension
            mismatches += mtcat.contract(m).complex_dimension != m.complex_dimension
    ok = impl == 4 and con == 6 and mismatches == 0
    verdict(9, ok, f"implosion {impl}, contraction {con}, {mismatches} chain mismatches")


def test_criterion_10_nahm(verdict):
    e = nahm.su2_basis()
    init = np.stack([np.zeros((2, 2)), *(-e)])
    out = nahm.integrate(init, (1, 2), steps=200)
    err = np.abs(out.T - nahm.exact_pole_solution(out.grid).T).max()
    coarse = nahm.residual(nahm.integrate(init, (1, 2), steps=100))
    eps = nahm.residual(out)
    ratio = coarse / eps
    scaling_ok = all(nahm.residual(nahm.symmetry_transform(out, "scale", c)) < 2 * c * c * eps
                     for c in (0.25, 0.5, 2.0, 4.0))
    ok = err < 1e-6 and ratio >= 8 and scaling_ok
    verdict(10, ok, f"max err {err:.1e}, halving ratio {ratio:.1f}, scaling bound holds: {scaling_ok}")


def test_criterion_11_psi(verdict):
    rng = sampling.rng_for(11)
    worst = 0.0
    for _ in range(50):
        g, v, line = sampling.psi_triple(rng)
        base = C.psi_sl2(g, v, line)
        for _ in range(100):
            other = C.psi_sl2(g, v, line, h=sampling.borel_element(rng) @ base.h)
            worst = max(worst, np.abs(other.invariants - base.invariants).max())
    verdict(11, worst < 1e-9, f"max change {worst:.1e}")
