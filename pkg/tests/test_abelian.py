import numpy as np
import pytest

from l1proj.abelian import (ClopenDualSet, ClopenError, abelian_group, abelian_group_from_json,
                            enumerate_projections, example_2_2, minimality_report, projection_from_clopen,
                            sup_defect)
from l1proj.documents import DocumentError
from l1proj.timedomain import convolve_direct, involution_direct, point_mass


def test_singleton_trivial_character_is_half_haar():
    G = abelian_group((2,), 1)
    p = projection_from_clopen(ClopenDualSet((2,), 1, {(0,)}), G)
    half = 0.5 * (point_mass(G, (0, 0)) + point_mass(G, (1, 0)))
    assert sup_defect(p, half) == 0.0
    assert sup_defect(convolve_direct(p, p), p) == 0.0


def test_full_dual_is_unit_mass():
    # summing both characters gives delta_(0,0), the unit of l1
    G = abelian_group((2,), 1)
    p = projection_from_clopen(ClopenDualSet((2,), 1, {(0,), (1,)}), G)
    assert sup_defect(p, point_mass(G, (0, 0))) == 0.0


def test_empty_set_is_zero():
    p = projection_from_clopen(ClopenDualSet((3,), 1, set()))
    assert not np.any(p.node_values)


def test_out_of_range_character():
    with pytest.raises(ClopenError):
        ClopenDualSet((2,), 1, {(2,)})


@pytest.mark.parametrize("orders,count", [((2,), 4), ((1,), 2), ((3,), 8), ((2, 2), 16)])
def test_enumeration_sizes(orders, count):
    fam = enumerate_projections(orders, 1)
    assert len(fam) == count
    assert fam.idempotency_defect < 1e-15 and fam.selfadjoint_defect < 1e-15


def test_dual_too_large():
    with pytest.raises(ClopenError):
        enumerate_projections((17,), 1)


def test_intersection_law():
    fam = enumerate_projections((3,), 1)
    for S, p in fam:
        for T, q in fam:
            r = fam.members[fam.index(S.chi_set & T.chi_set)][1]
            assert sup_defect(convolve_direct(p, q), r) < 1e-15


def test_involution_fixes_family():
    fam = enumerate_projections((2, 2), 1)
    for _, p in fam:
        assert sup_defect(involution_direct(p), p) == 0.0


def test_distinct_sets_distinct_functions():
    fam = enumerate_projections((3,), 1)
    vals = [p.node_values for _, p in fam]
    for i in range(len(vals)):
        for j in range(i):
            assert np.abs(vals[i] - vals[j]).max() > 0.1


def test_singleton_minimal_not_strongly_minimal():
    fam = enumerate_projections((2,), 1)
    r = minimality_report(fam.index({(1,)}), fam)
    assert r.minimal and not r.strongly_minimal
    assert r.witness == "delta(0,1)"


def test_full_set_not_minimal():
    fam = enumerate_projections((2,), 1)
    r = minimality_report(fam.index({(0,), (1,)}), fam)
    assert not r.minimal
    assert sorted(r.dominates) == ["{(0)}", "{(1)}"]


def test_compact_case_singletons_strongly_minimal():
    fam = enumerate_projections((2,), 0)
    for chi in [(0,), (1,)]:
        r = minimality_report(fam.index({chi}), fam)
        assert r.minimal and r.strongly_minimal


def test_no_nonzero_projection_strongly_minimal_with_free_part():
    for orders in [(2,), (3,), (1,), (2, 2)]:
        fam = enumerate_projections(orders, 1)
        for i, (S, _) in enumerate(fam):
            r = minimality_report(i, fam)
            if S.chi_set:
                assert not r.strongly_minimal and r.witness is not None


def test_example_report():
    r = example_2_2()
    assert r["passed"] and r["projection_count"] == 4
    assert r["minimal"] and not r["strongly_minimal"]
    assert r["haar_subgroup_projection"]["equals_half_delta_00_plus_delta_10"]


def test_abelian_spec_document():
    G = abelian_group_from_json({"torsion_orders": [2, 3], "free_rank": 1})
    assert G.orders == (2, 3) and G.free_rank == 1
    with pytest.raises(DocumentError):
        abelian_group_from_json({"torsion_orders": [2]})
