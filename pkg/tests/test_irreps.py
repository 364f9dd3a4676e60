import numpy as np
import pytest

from l1proj.groups import dihedral_group, euler_to_su2, quaternion_group, sample_points
from l1proj.irreps import (IrrepError, coefficient, conjugate, dual, equivalent, extend_from_generators,
                           measure_formal_dimension, root_of_unity, wigner_D)

from oracles import su2_rotation_angle, sum_zero_rep, weyl_character


def schur_defect(pi, G, rng, trials=4):
    """max deviation of int <pi xi, eta> conj(<pi xi', eta'>) from <xi, xi'><eta', eta>/k."""
    worst = 0.0
    for _ in range(trials):
        v = [rng.standard_normal(pi.dim) + 1j * rng.standard_normal(pi.dim) for _ in range(4)]
        a = coefficient(pi, v[0], v[1]).at_points(G.node_points)
        b = coefficient(pi, v[2], v[3]).at_points(G.node_points)
        lhs = G.integrate(a * b.conj()) / G.weights.sum()
        rhs = np.vdot(v[2], v[0]) * np.vdot(v[1], v[3]) / pi.dim
        worst = max(worst, abs(lhs - rhs))
    return worst


def test_root_of_unity_exact_at_quarter_turns():
    assert root_of_unity(1, 4) == 1j
    assert root_of_unity(2, 4) == -1
    assert root_of_unity(3, 8) == pytest.approx(np.exp(2j * np.pi * 3 / 8))


@pytest.mark.parametrize("name", ["s3", "s4", "z4"])
def test_finite_schur_orthogonality(name, request):
    G = request.getfixturevalue(name)
    rng = np.random.default_rng(3)
    for pi in dual(G):
        assert schur_defect(pi, G, rng) < 1e-12


def test_su2_schur_orthogonality(su2):
    rng = np.random.default_rng(4)
    for pi in dual(su2):
        assert schur_defect(pi, su2, rng, trials=2) < 1e-10


def test_formal_dimensions_equal_dimensions(s4, su2):
    for G in (s4, su2):
        for pi in dual(G):
            assert pi.formal_dimension == pytest.approx(pi.dim, abs=1e-9)


def test_sum_of_squares(s4):
    assert sum(pi.dim ** 2 for pi in dual(s4)) == 24


def test_s3_standard_matches_independent_construction(s3):
    chi = np.trace(sum_zero_rep(s3), axis1=1, axis2=2)
    assert np.abs(dual(s3)["std"].node_characters - chi).max() < 1e-14


def test_su2_characters_match_weyl_formula(su2):
    rng = np.random.default_rng(5)
    P = sample_points(su2, 100, rng)
    theta = su2_rotation_angle(euler_to_su2(P))
    for twoj in range(5):
        chi = np.trace(wigner_D(twoj, P), axis1=1, axis2=2)
        assert np.abs(chi - weyl_character(twoj, theta)).max() < 1e-9


def test_spin_half_is_defining_rep(su2):
    P = sample_points(su2, 20, np.random.default_rng(6))
    assert np.abs(dual(su2)["D1/2"].at_points(P) - euler_to_su2(P)).max() < 1e-15


def test_su2_homomorphism(su2):
    rng = np.random.default_rng(7)
    P, Q = sample_points(su2, 30, rng), sample_points(su2, 30, rng)
    for pi in dual(su2):
        lhs = pi.at_points(su2.mul_points(P, Q))
        rhs = pi.at_points(P) @ pi.at_points(Q)
        assert np.abs(lhs - rhs).max() < 1e-12


def test_cross_irrep_integrals_vanish(s4, su2):
    rng = np.random.default_rng(8)
    for G in (s4, su2):
        irreps = list(dual(G))
        for a in irreps:
            for b in irreps:
                if a is b:
                    continue
                x = coefficient(a, rng.standard_normal(a.dim), rng.standard_normal(a.dim)).at_points(G.node_points)
                y = coefficient(b, rng.standard_normal(b.dim), rng.standard_normal(b.dim)).at_points(G.node_points)
                assert abs(G.integrate(x * y.conj())) < 1e-8


def test_conjugate_labels(z4, s3, su2):
    assert dual(z4).conjugate_label("chi1") == "chi3"
    assert dual(s3).conjugate_label("std") == "std"
    assert dual(su2).conjugate_label("D1/2") == "D1/2"
    pi = dual(z4)["chi1"]
    assert conjugate(conjugate(pi)) is pi


def test_regular_decomposition_dihedral():
    d = dual(dihedral_group(5))
    assert sorted(pi.dim for pi in d) == [1, 1, 2, 2]
    assert d.labels[0] == "rho0"
    assert np.allclose(d["rho0"].node_characters, 1)


def test_quaternion_irreps():
    d = dual(quaternion_group())
    assert sorted(pi.dim for pi in d) == [1, 1, 1, 1, 2]
    assert all(abs(pi.formal_dimension - pi.dim) < 1e-12 for pi in d)


def test_equivalence_detects_change_of_basis(s3):
    std = dual(s3)["std"]
    Q, _ = np.linalg.qr(np.random.default_rng(9).standard_normal((2, 2)))
    from l1proj.irreps import Irrep
    other = Irrep("other", 2, s3, matrices=Q.T @ std.node_matrices @ Q)
    assert equivalent(std, other)
    assert not equivalent(std, dual(s3)["sgn"])


def test_extend_from_generators(z4):
    pi = extend_from_generators(z4, [(1,)], [np.array([[1j]])])
    assert pi((3,))[0, 0] == pytest.approx(-1j)
    with pytest.raises(IrrepError):
        extend_from_generators(z4, [(1,)], [np.array([[np.exp(0.3j)]])])


def test_reducible_rep_flagged(s3):
    from l1proj.irreps import Irrep
    sgn = dual(s3)["sgn"].node_matrices[:, 0, 0]
    mats = np.array([np.diag([1.0, s]) for s in sgn], dtype=complex)
    _, spread = measure_formal_dimension(Irrep("triv+sgn", 2, s3, matrices=mats))
    assert spread > 1e-6
