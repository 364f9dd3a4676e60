import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from l1proj.fourier import (block_distance, bnorm, convolve, from_json, inner_l2, involution,
                            l2norm, random_element, sigma_min_formal_dimension, single, to_json, zero)
from l1proj.groups import symmetric_group
from l1proj.irreps import IrrepError, coefficient, dual
from l1proj.timedomain import inner_product, lp_norm, to_time_domain

from oracles import brute_convolve, brute_involution

S3 = symmetric_group(3)


def test_coefficient_block_pairing(s3):
    pi = dual(s3)["std"]
    rng = np.random.default_rng(0)
    xi, eta = rng.standard_normal(2) + 1j * rng.standard_normal(2), rng.standard_normal(2)
    c = coefficient(pi, xi, eta)
    f = single(dual(s3), "std", c.block)
    assert np.abs(f.at_points(s3.node_points) - c.at_points(s3.node_points)).max() < 1e-15


@pytest.mark.parametrize("name", ["s3", "s4", "z4"])
def test_convolution_matches_brute_force(name, request):
    G = request.getfixturevalue(name)
    d = dual(G)
    rng = np.random.default_rng(1)
    for _ in range(10):
        f, g = random_element(d, rng), random_element(d, rng)
        ref = brute_convolve(G, f.at_points(G.node_points), g.at_points(G.node_points))
        assert np.abs(convolve(f, g).at_points(G.node_points) - ref).max() < 1e-12


def test_involution_matches_brute_force(s4):
    d = dual(s4)
    f = random_element(d, np.random.default_rng(2))
    ref = brute_involution(s4, f.at_points(s4.node_points))
    assert np.abs(involution(f).at_points(s4.node_points) - ref).max() < 1e-13


def test_norms_match_time_domain(s4):
    d = dual(s4)
    rng = np.random.default_rng(3)
    for _ in range(5):
        f, g = random_element(d, rng), random_element(d, rng)
        tf, tg = to_time_domain(f), to_time_domain(g)
        assert l2norm(f) == pytest.approx(lp_norm(tf, 2), rel=1e-12)
        assert inner_l2(f, g) == pytest.approx(inner_product(tf, tg), rel=1e-12)


def test_bnorm_of_character(s3):
    # the character of std has block I, trace norm 2
    assert bnorm(single(dual(s3), "std", np.eye(2))) == pytest.approx(2.0)


def test_banach_inequalities_random(s4, su2):
    rng = np.random.default_rng(4)
    for G in (s4, su2):
        d = dual(G)
        for _ in range(50):
            u = random_element(d, rng, max_blocks=3)
            v = random_element(d, rng, max_blocks=3)
            k = sigma_min_formal_dimension(u, v)
            assert np.sqrt(sigma_min_formal_dimension(u)) * l2norm(u) <= bnorm(u) + 1e-9
            assert bnorm(convolve(u, v)) <= bnorm(u) * bnorm(v) / k + 1e-9


def test_zero_and_pruning(s3):
    d = dual(s3)
    assert zero(d).is_zero()
    assert single(d, "std", 1e-15 * np.eye(2)).is_zero()
    f = random_element(d, np.random.default_rng(5))
    assert (f - f).is_zero()


def test_shape_and_label_errors(s3):
    d = dual(s3)
    with pytest.raises(ValueError):
        single(d, "std", np.eye(3))
    with pytest.raises(KeyError):
        single(d, "nope", np.eye(1))


def test_mixed_groups_rejected(s3, s4):
    with pytest.raises(ValueError):
        convolve(random_element(dual(s3), np.random.default_rng(0)),
                 random_element(dual(s4), np.random.default_rng(0)))


def test_json_roundtrip(s4):
    f = random_element(dual(s4), np.random.default_rng(6))
    g = from_json(to_json(f), dual=dual(s4))
    assert block_distance(f, g) == 0.0
    h = from_json(to_json(f))
    assert h.labels == f.labels


def test_json_unknown_irrep(s3):
    doc = {"group": s3.spec, "blocks": [{"irrep": "xyz", "matrix": [[[1, 0]]]}]}
    with pytest.raises(IrrepError):
        from_json(doc)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_star_algebra_laws(seed):
    G = S3
    d = dual(G)
    rng = np.random.default_rng(seed)
    f, g, h = (random_element(d, rng) for _ in range(3))
    assert block_distance(convolve(convolve(f, g), h), convolve(f, convolve(g, h))) < 1e-11 * (1 + bnorm(f) * bnorm(g) * bnorm(h))
    assert block_distance(involution(convolve(f, g)), convolve(involution(g), involution(f))) < 1e-11 * (1 + bnorm(f) * bnorm(g))
    assert block_distance(involution(involution(f)), f) == 0.0
