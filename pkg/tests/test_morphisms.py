import json

import numpy as np
import pytest

from l1proj.fourier import block_distance, convolve, involution
from l1proj.groups import SU2Group, cyclic_product, symmetric_group
from l1proj.irreps import dual
from l1proj.morphisms import (ORIENTATION, HomomorphismSpec, UnitaryTuple, act, calibrate_orientation,
                              calibration_projection, framed_from_document, load_homomorphism,
                              mp_verify_group, noncontractive_check, phi_p, verify_star_hom)
from l1proj.projections import frame_projection, random_frame
from l1proj.timedomain import SampledFunction, point_mass, random_function


@pytest.fixture(scope="module")
def s4_rank2():
    return calibration_projection()


@pytest.fixture(scope="module")
def s3_two_parts(s3):
    d = dual(s3)
    return frame_projection([(d["sgn"], [1.0]), (d["std"], random_frame(2, 1, np.random.default_rng(1)))])


def test_calibration_selects_frozen_orientation():
    rep = calibrate_orientation()
    assert rep.orientation == ORIENTATION
    other = [o for o in rep.defects if o != ORIENTATION][0]
    assert rep.defects[ORIENTATION] < 1e-12 and rep.defects[other] > 1e-3


def test_identity_tuple_acts_trivially(s4_rank2):
    assert block_distance(act(UnitaryTuple.identity([2]), s4_rank2), s4_rank2.element) < 1e-15


def test_scalar_phase(s3_two_parts):
    u = UnitaryTuple([np.array([[np.exp(0.7j)]]), np.array([[1.0]])])
    a = act(u, s3_two_parts)
    p = s3_two_parts.element
    assert np.allclose(a.block("sgn"), np.exp(0.7j) * p.block("sgn"))
    assert block_distance(convolve(a, involution(a)), p) < 1e-14


def test_membership_condition(s4_rank2):
    u = UnitaryTuple.random([2], np.random.default_rng(2))
    a = act(u, s4_rank2)
    p = s4_rank2.element
    assert block_distance(convolve(involution(a), a), p) < 1e-10
    assert block_distance(convolve(a, involution(a)), p) < 1e-10
    assert block_distance(involution(a), act(u.adjoint(), s4_rank2)) < 1e-14


def test_group_law(s4_rank2):
    rep = mp_verify_group(s4_rank2, sample_count=50)
    assert rep.passed and rep.oracle_law_defect < 1e-12


def test_act_errors(s4_rank2):
    with pytest.raises(ValueError):
        act(UnitaryTuple.identity([3]), s4_rank2)
    with pytest.raises(ValueError):
        UnitaryTuple([np.array([[2.0]])])


def test_phi_unit_counting_measure_exact(s3_two_parts):
    F = cyclic_product([4], "counting")
    dz = dual(F)
    spec = HomomorphismSpec(F, s3_two_parts, {"sgn": dz["chi1"], "std": dz["chi0"]})
    assert block_distance(phi_p(spec, point_mass(F, (0,))), s3_two_parts.element) == 0.0


def test_phi_character_scales_block(s3_two_parts, z4):
    dz = dual(z4)
    spec = HomomorphismSpec(z4, s3_two_parts, {"sgn": dz["chi1"], "std": dz["chi0"]})
    P = phi_p(spec, point_mass(z4, (1,)))
    assert np.allclose(P.block("sgn"), 1j * s3_two_parts.element.block("sgn"), atol=1e-15)
    assert np.allclose(P.block("std"), s3_two_parts.element.block("std"), atol=1e-15)


def test_star_hom_finite(s3_two_parts, z4):
    dz = dual(z4)
    spec = HomomorphismSpec(z4, s3_two_parts, {"sgn": dz["chi1"], "std": dz["chi3"]})
    rep = verify_star_hom(spec, probe_pairs=20)
    assert rep.passed and rep.multiplicativity_defect < 1e-12 and rep.unit_defect < 1e-14


def test_real_class_function_maps_to_selfadjoint(s4_rank2):
    F = symmetric_group(3)
    spec = HomomorphismSpec(F, s4_rank2, {"std": dual(F)["std"]})
    f = SampledFunction(F, values=dual(F)["std"].node_characters.real)
    P = phi_p(spec, f)
    assert block_distance(involution(P), P) < 1e-14


def test_su2_defining_rep_schur(s4_rank2):
    F = SU2Group((16, 16, 32), 1)
    D = dual(F)["D1/2"]
    spec = HomomorphismSpec(F, s4_rank2, {"std": D})
    chi = SampledFunction(F, func=lambda P: np.trace(D.at_points(P), axis1=1, axis2=2))
    assert block_distance(phi_p(spec, chi), 0.5 * s4_rank2.element) < 1e-12
    rep = verify_star_hom(spec, probe_pairs=6)
    assert rep.passed and rep.multiplicativity_defect < 1e-6


def test_range_containment(s4_rank2):
    F = symmetric_group(3)
    spec = HomomorphismSpec(F, s4_rank2, {"std": dual(F)["std"]})
    p = s4_rank2.element
    P = phi_p(spec, random_function(F, np.random.default_rng(3)))
    assert block_distance(convolve(convolve(p, P), p), P) < 1e-13


def test_noncontractive(s4_rank2):
    r = noncontractive_check(s4_rank2.element)
    assert r["has_higher_rank"] and r["exceeds_one"] and r["b_norm"] == pytest.approx(6.0)


def test_spec_rejects_bad_components(s4_rank2, z4):
    with pytest.raises(ValueError):
        HomomorphismSpec(z4, s4_rank2, {"std": dual(z4)["chi1"]})  # dimension 1 vs rank 2
    with pytest.raises(ValueError):
        HomomorphismSpec(z4, s4_rank2, {})


def test_load_documents(fixtures_dir):
    spec = load_homomorphism(json.loads((fixtures_dir / "hom_z4_to_s3.json").read_text()), fixtures_dir)
    assert spec.target.labels == ["sgn", "std"]
    assert verify_star_hom(spec, probe_pairs=4).passed
    doc = json.loads((fixtures_dir / "s4_projection.json").read_text())
    doc.pop("parts")
    framed = framed_from_document(doc)
    assert framed.ranks == [2]
