import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkimplosion import contraction as C
from hkimplosion import quiver, sampling
from hkimplosion.errors import DegenerateFlow, PreconditionError

J = np.array([[0, 1], [-1, 0]])
seeds = st.integers(0, 2**32 - 1)


def flow_value(x):
    """Nonzero diagonal entry of the contraction of diag(x, 1/x)."""
    return np.sqrt(abs(x * x - 1 / (x * x)))


def phi_oracle(x):
    """``k (lam I - i v)`` with ``lam`` the spectral radius of ``v``; equals ``z (x) w``."""
    lam = max(np.linalg.eigvalsh(-1j * x.v))
    return x.k @ (lam * np.eye(2) - 1j * x.v)


@pytest.mark.parametrize("x", [1.0, 1.2, 2.0, 5.0, 0.5, 0.2])
def test_closed_form_on_diagonal(x):
    out = C.su2_flow_closed_form(np.diag([x, 1 / x]))
    expected = np.diag([flow_value(x), 0]) if x >= 1 else np.diag([0, flow_value(x)])
    assert np.abs(out - expected).max() < 1e-9


def test_closed_form_example_value():
    out = C.su2_flow_closed_form(np.diag([2, 0.5]))
    assert out[0, 0] == pytest.approx(1.9364916731, abs=1e-9)


def test_closed_form_su2_goes_to_zero():
    rng = sampling.rng_for(0)
    for _ in range(50):
        assert np.abs(C.su2_flow_closed_form(sampling.su2(rng))).max() < 1e-9


def test_closed_form_rejects_non_unit_det():
    with pytest.raises(PreconditionError, match="determinant"):
        C.su2_flow_closed_form(np.diag([1, 2]))
    with pytest.raises(PreconditionError):
        C.su2_flow_closed_form(np.eye(3))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_closed_form_equivariant_and_singular(seed):
    rng = np.random.default_rng(seed)
    b = sampling.sl2(rng)
    k1, k2 = sampling.su2(rng), sampling.su2(rng)
    f = C.su2_flow_closed_form(b)
    assert np.abs(C.su2_flow_closed_form(k1 @ b @ k2) - k1 @ f @ k2).max() < 1e-8
    assert abs(np.linalg.det(f)) < 1e-9


def test_ghflow_matches_closed_form_on_diag2():
    b = np.diag([2, 0.5])
    assert np.abs(C.gh_flow_numeric(b) - C.su2_flow_closed_form(b)).max() < 1e-4


def test_ghflow_small_gap_value():
    out = C.gh_flow_numeric(np.diag([1.2, 1 / 1.2]))
    assert out[0, 0].real == pytest.approx(np.sqrt(1.44 - 1 / 1.44), abs=1e-6)
    assert abs(out[1, 1]) < 1e-6


def test_ghflow_identity_is_degenerate():
    with pytest.raises(DegenerateFlow, match="flow enters degenerate locus"):
        C.gh_flow_numeric(np.eye(2))


def test_ghflow_trajectory_invariants():
    rng = sampling.rng_for(9)
    b = sampling.sl2_with_gap(rng, 0.5)
    traj = C.gh_flow_numeric(b, trajectory=True, steps=50)
    dets = np.linalg.det(traj.matrices)
    assert np.abs(dets.real - (1 - traj.t)).max() < 1e-8
    assert np.abs(dets.imag).max() < 1e-6
    assert np.diff(traj.t).max() <= 1 / 50 + 1e-12


def test_vector_field_decreases_det_at_unit_rate():
    rng = sampling.rng_for(1)
    m = sampling.cnormal(rng, (2, 2))
    v = C.gh_vector_field(m)
    # d/dt det(M + t V) at 0 is tr(cof(M)^T V)
    cof = np.array([[m[1, 1], -m[1, 0]], [-m[0, 1], m[0, 0]]])
    assert np.sum(cof * v) == pytest.approx(-1)


def test_singular_value_gap():
    assert C.singular_value_gap(np.diag([2, 0.5])) == pytest.approx(1.5)


def test_implode_examples():
    rng = sampling.rng_for(2)
    assert not C.implode_su2(sampling.su2(rng), 0).any()
    assert np.allclose(C.implode_su2(np.eye(2), 0.5), [1, 0])
    theta = 0.3
    k = np.diag([np.exp(1j * theta), np.exp(-1j * theta)])
    assert np.allclose(C.implode_su2(k, 2.0), 2 * np.array([np.exp(1j * theta), 0]))
    with pytest.raises(PreconditionError):
        C.implode_su2(np.eye(2), -1)


def test_cotangent_point_validation():
    with pytest.raises(PreconditionError):
        C.CotangentPoint(2 * np.eye(2), np.zeros((2, 2)))
    with pytest.raises(PreconditionError):
        C.CotangentPoint(np.eye(2), np.eye(2))


def test_diagonalize():
    rng = sampling.rng_for(3)
    v = sampling.su2_algebra(rng)
    h, lam = C.diagonalize_su2(v)
    assert np.allclose(h @ v @ h.conj().T, lam * np.diag([1j, -1j]))
    assert np.allclose(h @ h.conj().T, np.eye(2)) and np.isclose(np.linalg.det(h), 1)


def test_phi_examples():
    v = 0.5 * np.diag([1j, -1j])
    assert np.allclose(C.phi(C.CotangentPoint(np.eye(2), v)), [[1, 0], [0, 0]])
    rng = sampling.rng_for(4)
    assert not C.phi(C.CotangentPoint(sampling.su2(rng), np.zeros((2, 2)))).any()
    assert np.allclose(C.phi(C.CotangentPoint(J, v)), [[0, 0], [-1, 0]])


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_phi_matches_closed_form_oracle(seed):
    x = sampling.cotangent_point(np.random.default_rng(seed))
    m = C.phi(x)
    assert np.abs(m - phi_oracle(x)).max() < 1e-10
    assert C.quadric_defect(m) < 1e-12


def test_equivalent_examples():
    rng = sampling.rng_for(5)
    x = sampling.cotangent_point(rng, degenerate_prob=0)
    assert C.equivalent(x, x)
    z = np.zeros((2, 2))
    assert C.equivalent(C.CotangentPoint(sampling.su2(rng), z), C.CotangentPoint(sampling.su2(rng), z))
    h, _ = C.diagonalize_su2(x.v)
    t = np.diag([np.exp(0.4j), np.exp(-0.4j)])
    y = C.CotangentPoint(x.k @ h.conj().T @ t @ h, x.v)
    assert not C.equivalent(x, y)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_phi_separates(seed):
    rng = np.random.default_rng(seed)
    x = sampling.cotangent_point(rng, degenerate_prob=0.3)
    candidates = [x, sampling.cotangent_point(rng, degenerate_prob=0.3)]
    if not np.any(x.v):
        candidates.append(C.CotangentPoint(sampling.su2(rng), x.v))
    for y in candidates:
        same = np.abs(C.phi(x) - C.phi(y)).max() < 1e-9
        assert same == C.equivalent(x, y)


def test_max_minor():
    assert C.max_minor(np.outer([1, 2, 3], [4, 5, 6])) < 1e-12
    assert C.max_minor(np.eye(3)) == 1


def test_invariants_examples():
    p1 = quiver.H2Point(np.array([1, 0]), np.array([0, 1]))
    p2 = quiver.H2Point(np.array([0, 1]), np.array([1, 0]))
    v, w = C.regroup(p1, p2)
    assert np.array_equal(v, [1, 0, 1, 0]) and np.array_equal(w, [0, 1, 0, 1])
    m = C.complex_invariants(p1, p2)
    assert np.trace(m) == 0 and not (m @ m).any()
    with pytest.raises(PreconditionError, match="torus moment level nonzero"):
        C.complex_invariants(quiver.H2Point(np.array([1, 0]), np.array([1, 0])),
                             quiver.H2Point(np.zeros(2), np.zeros(2)))


def test_real_contraction_sits_inside():
    rng = sampling.rng_for(6)
    for _ in range(20):
        b1, b2 = sampling.cnormal(rng, 2), sampling.cnormal(rng, 2)
        m = C.complex_invariants(quiver.H2Point(np.zeros(2), b1), quiver.H2Point(np.zeros(2), b2))
        block = m[2:, :2]
        assert C.quadric_defect(block) < 1e-12
        mask = np.ones((4, 4), dtype=bool)
        mask[2:, :2] = False
        assert not m[mask].any()


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_invariants_lie_in_minimal_orbit(seed):
    p1, p2 = sampling.zero_level_pair(np.random.default_rng(seed))
    m = C.complex_invariants(p1, p2)
    assert C.max_minor(m) < 1e-10
    assert abs(np.trace(m)) < 1e-10
    assert np.abs(m @ m).max() < 1e-10


def test_torus_moment_sum_is_pairing():
    rng = sampling.rng_for(7)
    p1, p2 = sampling.h2_point(rng), sampling.h2_point(rng)
    v, w = C.regroup(p1, p2)
    assert v @ w == pytest.approx(C.torus_moment(p1) + C.torus_moment(p2))


def test_swann_involution_rank_and_trace():
    rng = sampling.rng_for(8)
    m = sampling.cnormal(rng, (4, 4))
    s = C.swann_weyl(m)
    assert np.allclose(C.swann_weyl(s), m)
    assert np.linalg.matrix_rank(s) == np.linalg.matrix_rank(m)
    # J~ squares to -I, so the trace flips sign; it is preserved on the zero level
    assert np.trace(s) == pytest.approx(-np.trace(m))
    r1 = np.outer(sampling.cnormal(rng, 4), sampling.cnormal(rng, 4))
    assert np.linalg.matrix_rank(C.swann_weyl(r1)) == 1
    with pytest.raises(PreconditionError):
        C.swann_weyl(np.eye(2))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_swann_matches_gamma_on_pairs(seed):
    p1, p2 = sampling.zero_level_pair(np.random.default_rng(seed))
    m = C.complex_invariants(p1, p2)
    n = C.complex_invariants(quiver.sl2_gamma(p1), quiver.sl2_gamma(p2))
    e = np.diag([-1, -1, 1, 1])
    assert np.abs(C.swann_weyl(m) - e @ n @ e).max() < 1e-10
    assert abs(np.trace(C.swann_weyl(m))) < 1e-10


def test_qcirc_examples():
    assert C.q_circ_membership(quiver.H2Point(np.array([1, 0]), np.array([1, 0])))
    assert not C.q_circ_membership(quiver.H2Point(np.array([1, 0]), np.array([0, 1])))
    assert not C.q_circ_membership(quiver.H2Point(np.zeros(2), np.zeros(2)))


def test_psi_regular_semisimple():
    v = np.diag([1.0, -1.0])
    r = C.psi_sl2(np.eye(2), v, [1, 0])
    assert np.allclose(r.h, np.eye(2))
    assert C.max_minor(r.invariants) < 1e-12
    assert abs(np.trace(r.invariants)) < 1e-12
    assert C.q_circ_membership(r.right) and C.q_circ_membership(r.left)


def test_psi_nilpotent_accepted():
    r = C.psi_sl2(np.eye(2), np.array([[0, 1], [0, 0]]), [1, 0], h=np.eye(2))
    assert np.allclose(r.h, np.eye(2))


def test_psi_rejects_vector_outside_borel():
    with pytest.raises(PreconditionError, match="vector not in chosen Borel"):
        C.psi_sl2(np.eye(2), np.array([[0, 0], [1, 0]]), [1, 0])


def test_psi_rejects_bad_h():
    with pytest.raises(PreconditionError):
        C.psi_sl2(np.eye(2), np.diag([1, -1]), [1, 0], h=np.array([[0, 1], [-1, 0]]))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_psi_independent_of_borel_choice(seed):
    rng = np.random.default_rng(seed)
    g, v, line = sampling.psi_triple(rng)
    base = C.psi_sl2(g, v, line)
    for _ in range(20):
        unipotent = np.array([[1, sampling.cnormal(rng)], [0, 1]])
        for b in (unipotent, sampling.borel_element(rng)):
            other = C.psi_sl2(g, v, line, h=b @ base.h)
            assert np.abs(other.invariants - base.invariants).max() < 1e-9


def test_psi_level_is_zero():
    rng = sampling.rng_for(10)
    g, v, line = sampling.psi_triple(rng)
    r = C.psi_sl2(g, v, line)
    assert C.torus_moment(r.right) + C.torus_moment(r.left) == pytest.approx(0, abs=1e-12)
