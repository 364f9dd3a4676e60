import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from l1proj.documents import DocumentError
from l1proj.groups import (GroupSpecError, TorusGroup, WindowedAbelianGroup, cyclic_product,
                           dihedral_group, direct_product, euler_to_su2, make_group, permutation_from_cycles,
                           quaternion_group, sample_points, su2_to_euler, symmetric_group, table_group)


def test_s3_composition_convention(s3):
    a = permutation_from_cycles([(1, 2)], 3)
    b = permutation_from_cycles([(2, 3)], 3)
    assert s3.mul(a, b) == permutation_from_cycles([(1, 2, 3)], 3)


def test_cyclic_addition(z4):
    assert z4.mul((3,), (2,)) == (1,)
    assert z4.inv((1,)) == (3,)
    assert z4.identity == (0,)


@pytest.mark.parametrize("G", [symmetric_group(3), symmetric_group(4), dihedral_group(4), quaternion_group(),
                               cyclic_product([2, 3])])
def test_finite_group_axioms(G):
    T = G.table
    n = G.order
    e = G.identity_index
    assert (T[e] == np.arange(n)).all() and (T[:, e] == np.arange(n)).all()
    assert (T[np.arange(n), G.inverse] == e).all()
    assert (T[T[:, :, None], np.arange(n)[None, None, :]] == T[:, T]).all()


def test_orders():
    assert symmetric_group(4).order == 24
    assert dihedral_group(5).order == 10
    assert quaternion_group().order == 8
    assert direct_product(cyclic_product([2]), symmetric_group(3)).order == 12


def test_probability_and_counting_weights():
    assert symmetric_group(3).weights.sum() == pytest.approx(1.0)
    assert symmetric_group(3, "counting").weights.sum() == 6


def test_table_group_rejects_non_group():
    with pytest.raises(GroupSpecError):
        table_group([[0, 1], [1, 1]])


def test_make_group_dispatch():
    assert make_group({"kind": "finite-by-table", "catalog": "S3"}).order == 6
    assert make_group({"kind": "cyclic-product", "orders": [2, 2]}).order == 4
    assert make_group({"kind": "finite-by-table", "table": [[0, 1], [1, 0]]}).order == 2
    G = make_group({"kind": "su2", "su2_nodes": [8, 16, 8]})
    assert G.num_nodes == 1024
    assert G.weights.sum() == pytest.approx(1.0, abs=1e-15)


def test_make_group_errors_name_the_field():
    with pytest.raises(DocumentError) as err:
        make_group({"kind": "su2", "su2_nodes": [8, 8]})
    assert "su2_nodes" in str(err.value)
    with pytest.raises(DocumentError):
        make_group({"kind": "lorentz"})
    with pytest.raises(GroupSpecError):
        make_group({"kind": "finite-by-table", "catalog": "M24"})


def test_windowed_abelian_lookup():
    G = WindowedAbelianGroup([2], 1, 3)
    assert G.num_nodes == 14
    assert G.mul((1, 2), (1, -3)) == (0, -1)
    P = G.to_points([(1, 2), (0, 4)])
    idx = G.locate(P)
    assert idx[0] >= 0 and G.from_points(G.node_points[idx[:1]])[0] == (1, 2)
    assert idx[1] == -1


def test_torus_wraps():
    T = TorusGroup(2, 8)
    x = T.mul((6.0, 1.0), (1.0, 0.5))
    assert x[0] == pytest.approx(7.0 - 2 * math.pi)
    assert T.weights.sum() == pytest.approx(1.0)


def test_su2_chart_roundtrip(su2):
    rng = np.random.default_rng(0)
    P = sample_points(su2, 200, rng)
    U = euler_to_su2(P)
    assert np.abs(U @ np.conj(np.swapaxes(U, -1, -2)) - np.eye(2)).max() < 1e-14
    assert np.abs(euler_to_su2(su2_to_euler(U)) - U).max() < 1e-14
    assert (P[:, 0] >= 0).all() and (P[:, 0] < 2 * math.pi).all()
    assert (P[:, 2] >= 0).all() and (P[:, 2] < 4 * math.pi).all()


def test_su2_inverse_and_product(su2):
    rng = np.random.default_rng(1)
    P = sample_points(su2, 50, rng)
    Q = sample_points(su2, 50, rng)
    I = euler_to_su2(su2.mul_points(P, su2.inv_points(P)))
    assert np.abs(I - np.eye(2)).max() < 1e-13
    assert np.abs(euler_to_su2(su2.mul_points(P, Q)) - euler_to_su2(P) @ euler_to_su2(Q)).max() < 1e-13


def test_su2_poles_are_canonical(su2):
    # at beta = 0 only alpha + gamma matters; the chart puts it all in gamma
    x = su2.canonical((1.0, 0.0, 0.5))
    assert x[0] == 0.0 and x[2] == pytest.approx(1.5)
    U = euler_to_su2(np.array([[0.3, math.pi, 0.2]]))
    E = su2_to_euler(U)
    assert E[0, 0] == 0.0 and np.abs(euler_to_su2(E) - U).max() < 1e-15


def test_su2_quadrature_integrates_haar_moments(su2):
    U = euler_to_su2(su2.node_points)
    # int |U_00|^2 = 1/2, int |U_00|^4 = 1/3 under Haar probability
    assert su2.integrate(np.abs(U[:, 0, 0]) ** 2).real == pytest.approx(0.5, abs=1e-14)
    assert su2.integrate(np.abs(U[:, 0, 0]) ** 4).real == pytest.approx(1 / 3, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=2, max_value=5), min_size=1, max_size=3), st.data())
def test_cyclic_product_is_abelian(orders, data):
    G = cyclic_product(orders)
    i = data.draw(st.integers(0, G.order - 1))
    j = data.draw(st.integers(0, G.order - 1))
    assert G.table[i, j] == G.table[j, i]
