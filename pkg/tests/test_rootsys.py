import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hkimplosion import rootsys
from hkimplosion.errors import PreconditionError

WEYL_ORDERS = {
    "A1": 2, "A2": 6, "A3": 24, "A4": 120, "A5": 720,
    "B2": 8, "B3": 48, "C2": 8, "C3": 48, "D4": 192, "G2": 12,
}
ALL = sorted(WEYL_ORDERS)


def norm_oracle(rs):
    """Positive roots as the nonnegative lattice vectors of root length."""
    g = np.array(rs.gram)
    lengths = {int(g[i, i]) for i in range(rs.rank)}
    found = set()
    for c in itertools.product(range(4), repeat=rs.rank):
        v = np.array(c)
        if v.any() and int(v @ g @ v) in lengths:
            found.add(tuple(int(x) for x in c))
    return found


@pytest.mark.parametrize("name", ALL)
def test_positive_roots_match_norm_enumeration(name):
    rs = rootsys.parse_name(name)
    assert set(rs.positive_roots) == norm_oracle(rs)
    assert len(set(rs.positive_roots)) == rs.n_positive


@pytest.mark.parametrize("name", ALL)
def test_simple_roots_first(name):
    rs = rootsys.parse_name(name)
    assert rs.positive_roots[: rs.rank] == rs.simple_roots


@pytest.mark.parametrize("name", ALL)
def test_cartan_matrix_shape(name):
    rs = rootsys.parse_name(name)
    c = np.array(rs.cartan_matrix)
    assert (np.diag(c) == 2).all()
    assert (c[~np.eye(rs.rank, dtype=bool)] <= 0).all()


@pytest.mark.parametrize("name", ALL)
def test_root_count_is_half_of_all_roots(name):
    rs = rootsys.parse_name(name)
    ws = rootsys.weyl_elements(rs)
    orbit = {tuple(int(x) for x in w.as_array() @ np.array(a)) for w in ws for a in rs.simple_roots}
    assert len(orbit) == 2 * rs.n_positive


def test_build_examples():
    assert rootsys.build_root_system("A", 1).n_positive == 1
    assert set(rootsys.build_root_system("A", 2).positive_roots) == {(1, 0), (0, 1), (1, 1)}
    assert rootsys.build_root_system("B", 2).n_positive == 4


def test_g2_cartan():
    assert rootsys.parse_name("G2").cartan_matrix == ((2, -1), (-3, 2))


@pytest.mark.parametrize("family,rank", [("A", 0), ("E", 6), ("B", 1), ("G", 3), ("Z", 2)])
def test_unsupported(family, rank):
    with pytest.raises(PreconditionError, match="unsupported root system"):
        rootsys.build_root_system(family, rank)


@pytest.mark.parametrize("name", ALL)
def test_weyl_group_order_and_identity_first(name):
    rs = rootsys.parse_name(name)
    ws = rootsys.weyl_elements(rs)
    assert len(ws) == WEYL_ORDERS[name]
    assert ws[0].is_identity
    assert len({w.matrix for w in ws}) == len(ws)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3", "C3"])
def test_weyl_group_closed_under_products(name):
    rs = rootsys.parse_name(name)
    mats = {w.matrix for w in rootsys.weyl_elements(rs)}
    arrays = [np.array(m) for m in mats]
    for a, b in itertools.product(arrays, repeat=2):
        assert tuple(map(tuple, (a @ b).tolist())) in mats


@pytest.mark.parametrize("name", ALL)
def test_signed_permutation_invariant(name):
    rs = rootsys.parse_name(name)
    roots = rs.root_matrix()
    g = np.array(rs.gram)
    for w in rootsys.weyl_elements(rs):
        m = w.as_array()
        assert sorted(w.sigma) == list(range(rs.n_positive))
        for i, (j, s) in enumerate(zip(w.sigma, w.signs)):
            assert (m @ roots[i] == s * roots[j]).all()
        assert (m.T @ g @ m == g).all()


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
def test_word_reproduces_matrix(name):
    rs = rootsys.parse_name(name)
    for w in rootsys.weyl_elements(rs):
        m = np.eye(rs.rank, dtype=int)
        for j in w.word:
            m = m @ np.array(rootsys.simple_reflection_matrix(rs, j))
        assert (m == w.as_array()).all()


def test_a1_elements():
    ws = rootsys.weyl_elements(rootsys.parse_name("A1"))
    assert [w.signs for w in ws] == [(1,), (-1,)]


def test_a2_first_simple_reflection():
    rs = rootsys.parse_name("A2")
    s1 = next(w for w in rootsys.weyl_elements(rs) if w.word == (0,))
    assert s1.sigma == (0, 2, 1)
    assert s1.signs == (-1, 1, 1)
    assert rootsys.weyl_to_json(s1)["sigma"] == [1, 3, 2]


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_dual_action_matches_root_pairing(name):
    rs = rootsys.parse_name(name)
    roots = rs.root_matrix()
    xi = np.array([0.3, -1.7])
    for w in rootsys.weyl_elements(rs):
        # (w xi)(w alpha) = xi(alpha)
        assert np.allclose((w.as_array() @ roots.T).T @ w.act_dual(xi), roots @ xi)


def test_chamber_membership():
    rs = rootsys.parse_name("A2")
    assert rootsys.chamber_membership(rs, [1.0, 2.0])
    assert rootsys.chamber_membership(rs, [0.0, 1.0])
    assert not rootsys.chamber_membership(rs, [0.0, 1.0], closed=False)
    assert not rootsys.chamber_membership(rs, [-0.5, 1.0])
    with pytest.raises(PreconditionError, match="dimension mismatch"):
        rootsys.chamber_membership(rs, [1.0, 2.0, 3.0])


@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=2))
def test_exactly_one_chamber_contains_generic_points(xi):
    rs = rootsys.parse_name("B2")
    xi = np.array(xi)
    roots = rs.root_matrix()
    if np.min(np.abs(roots @ xi)) < 1e-6:
        return
    inside = [w for w in rootsys.weyl_elements(rs)
              if rootsys.chamber_membership(rs, w.act_dual(xi), closed=False)]
    assert len(inside) == 1


def test_json_roundtrip_shape():
    rs = rootsys.parse_name("B2")
    d = rootsys.root_system_to_json(rs)
    assert d["n_positive"] == 4 and len(d["cartan_matrix"]) == 2
