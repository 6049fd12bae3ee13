"""Tests for the pair-compatibility checks and field-equation fits."""

import numpy as np
import pytest

from cprojective.cproj import (
    classify_field,
    cproj_connection_check,
    cproj_field_residual,
    hsc_classify,
    l_tensor,
    mobility_condition_degenerate,
    mobility_condition_liouville,
    sinjukov_residuals,
)
from cprojective.families import (
    FAMILY_NAMES,
    build_companion,
    build_frame,
    default_case,
    make_case,
    sample_points,
)
from cprojective.jets import constant_jet, seed_variable

SEED = 20260816


def coord_jet(point, order, idx):
    return seed_variable(4, order, idx, float(point[idx]))


def const(order, value):
    return constant_jet(4, order, value)


def field_from(builder):
    def field(point, order):
        comps = builder(point, order)
        out = np.empty(4, dtype=object)
        for k in range(4):
            out[k] = comps[k]
        return out

    return field


def frames_for(case, count=4, order=4, tag="cproj-tests"):
    pts = sample_points(case, count, SEED, tag)
    return [build_frame(case, p, order=order) for p in pts]


# ---------------------------------------------------------------------------
# distinguished tensor and first-order system
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", FAMILY_NAMES)
def test_l_tensor_invariants(name):
    case = default_case(name)
    pt = sample_points(case, 1, SEED, "lt")[0]
    frame = build_frame(case, pt, order=3)
    ghat, _ = build_companion(frame)
    lt = l_tensor(frame, ghat)
    assert lt.selfadjoint_residual < 5e-8
    assert lt.jcommute_residual < 5e-8


def test_l_tensor_trace_scalar_matches_profile_values():
    case = default_case("L1")
    pt = sample_points(case, 1, SEED, "lt-trace")[0]
    frame = build_frame(case, pt, order=3)
    ghat, _ = build_companion(frame)
    lt = l_tensor(frame, ghat)
    assert lt.lam.value == pytest.approx(0.5 * (pt[0] + pt[1]), rel=1e-10)


@pytest.mark.parametrize("name", FAMILY_NAMES)
def test_first_tier_system_holds_for_every_family(name):
    case = default_case(name)
    pt = sample_points(case, 1, SEED, "tier1")[0]
    frame = build_frame(case, pt, order=4)
    ghat, _ = build_companion(frame)
    res = sinjukov_residuals(frame, ghat)
    assert res["nabla_l"] < 1e-8
    assert res["nabla_l_alt"] < 1e-8


def test_generic_pair_fails_only_the_third_tier():
    case = default_case("L1")
    pt = sample_points(case, 1, SEED, "tier3")[0]
    frame = build_frame(case, pt, order=4)
    ghat, _ = build_companion(frame)
    res = sinjukov_residuals(frame, ghat)
    assert res["nabla_l"] < 1e-8
    assert res["nabla_lambda"] < 1e-8
    assert res["nabla_mu"] > 1e-3


def test_tuned_pair_satisfies_all_tiers():
    case = make_case("L1", label="L1-const", eps=-1, c0=1.0, c1=1.0)
    pt = sample_points(case, 1, SEED, "tier3")[0]
    frame = build_frame(case, pt, order=4)
    ghat, _ = build_companion(frame)
    res = sinjukov_residuals(frame, ghat)
    assert res["nabla_l"] < 1e-7
    assert res["nabla_lambda"] < 1e-8
    assert res["nabla_mu"] < 1e-7


# ---------------------------------------------------------------------------
# mobility obstructions
# ---------------------------------------------------------------------------


def _max_obstruction(case, n=3):
    pts = sample_points(case, n, SEED, "mob")
    return max(abs(mobility_condition_liouville(case, pt)) for pt in pts)


def test_liouville_obstruction_separates_generic_from_tuned():
    assert _max_obstruction(default_case("L1")) > 1e-3
    assert _max_obstruction(make_case("L1", label="L1-const", eps=-1, c0=1.0, c1=1.0)) < 1e-9


def test_liouville_obstruction_on_both_l2_parameter_rows():
    c1 = -0.9**2 / 1.1**2
    half = make_case("L2", label="L2-half", beta=-0.5, eps=1, c0=1.0, c1=c1, d0=1.1, d1=0.9)
    two = make_case("L2", label="L2-two", beta=-2.0, eps=-1, d0=1.0, d1=1.0)
    assert _max_obstruction(half) < 1e-9
    assert _max_obstruction(two) < 1e-9
    assert _max_obstruction(default_case("L2")) > 1e-3
    off = make_case("L2", label="L2-off", beta=-2.0, eps=1, d0=1.0, d1=1.0)
    assert _max_obstruction(off) > 1e-3


def test_liouville_obstruction_never_vanishes_for_l3_l4():
    assert _max_obstruction(default_case("L3")) > 1e-3
    assert _max_obstruction(make_case("L3", label="L3-t", eps=-1, c0=1.0, c1=1.0)) > 1e-3
    assert _max_obstruction(default_case("L4")) > 1e-3
    assert _max_obstruction(make_case("L4", label="L4-t", eps=-1, c0=0.8, c1=0.8)) > 1e-3


def test_complex_obstruction_rows():
    assert _max_obstruction(default_case("C1")) > 1e-3
    assert _max_obstruction(make_case("C1", label="C1-re", sigma=[1.1, 0.0])) < 1e-9
    assert _max_obstruction(make_case("C1", label="C1-im", sigma=[0.0, 0.9])) < 1e-9
    assert _max_obstruction(make_case("C2", label="C2-h", beta=-0.5, sigma=[1.2, 0.0])) < 1e-9
    assert _max_obstruction(make_case("C2", label="C2-t", beta=-2.0, sigma=[0.0, 0.8])) < 1e-9
    assert _max_obstruction(make_case("C2", label="C2-o", beta=0.5, sigma=[1.2, 0.0])) > 1e-3
    assert _max_obstruction(default_case("C3")) > 1e-3
    assert _max_obstruction(make_case("C3", label="C3-re", sigma=[1.1, 0.0])) > 1e-3
    assert _max_obstruction(default_case("C4")) > 1e-3
    assert _max_obstruction(make_case("C4", label="C4-re", sigma=[1.1, 0.0])) > 1e-3


def test_degenerate_obstruction_vanishes_identically_for_d1_d2a():
    for name in ("D1", "D2a"):
        case = default_case(name)
        for x0 in np.linspace(0.25, 1.4, 10):
            assert abs(mobility_condition_degenerate(case, x0)) < 1e-9, name


def test_degenerate_obstruction_nonzero_for_d2b_d3():
    for name in ("D2b", "D3"):
        case = default_case(name)
        vals = [mobility_condition_degenerate(case, x0) for x0 in (0.3, 0.8, 1.3)]
        assert max(abs(v) for v in vals) > 1e-3, name


# ---------------------------------------------------------------------------
# curvature constancy
# ---------------------------------------------------------------------------


def test_projective_model_classifies_constant_four():
    res = hsc_classify(default_case("fs"))
    assert res["constant"] is True
    assert res["mean"] == pytest.approx(4.0, abs=1e-9)
    assert res["witness"] is None


def test_flat_model_classifies_constant_zero():
    res = hsc_classify(default_case("flat_kahler"))
    assert res["constant"] is True
    assert res["mean"] == pytest.approx(0.0, abs=1e-12)


def test_generic_family_classifies_non_constant_with_witness():
    res = hsc_classify(default_case("L1"))
    assert res["constant"] is False
    assert res["spread"] > 1e-3
    wit = res["witness"]
    assert wit is not None
    assert wit["high"]["value"] - wit["low"]["value"] == pytest.approx(res["spread"])


def test_tuned_family_classifies_constant():
    case = make_case("L1", label="L1-const", eps=-1, c0=1.0, c1=1.0)
    res = hsc_classify(case)
    assert res["constant"] is True


def test_hsc_classify_is_deterministic():
    a = hsc_classify(default_case("L2"))
    b = hsc_classify(default_case("L2"))
    assert a["values"] == b["values"]


# ---------------------------------------------------------------------------
# field equations
# ---------------------------------------------------------------------------


def l3_generator(point, order):
    s0 = coord_jet(point, order, 2)
    s1 = coord_jet(point, order, 3)
    return [const(order, 1.0), const(order, 1.0), -(3.0 * s0 + s1), -3.0 * s1]


def test_field_constants_of_the_l3_generator():
    frames = frames_for(default_case("L3"))
    res = cproj_field_residual(frames, field_from(l3_generator))
    assert res["residual"] < 1e-10
    assert res["transport"] < 1e-10
    a00, a01, a10, a11 = res["a"]
    assert a00 == pytest.approx(0.6, abs=1e-10)
    assert a01 == pytest.approx(0.0, abs=1e-10)
    assert a10 == pytest.approx((5.0 / 3.0) * a00, abs=1e-9)
    assert a11 == pytest.approx(a00, abs=1e-10)
    assert res["classification"] == "homothetic"


def test_field_constants_of_the_l4_generator():
    beta = 0.7
    case = default_case("L4")

    def gen(point, order):
        s0 = coord_jet(point, order, 2)
        s1 = coord_jet(point, order, 3)
        return [
            const(order, 1.0),
            const(order, 1.0),
            -(3.0 * beta * s0 - s1),
            -(s0 + 3.0 * beta * s1),
        ]

    res = cproj_field_residual(frames_for(case), field_from(gen))
    assert res["residual"] < 1e-10
    assert res["transport"] < 1e-10
    a00, a01, a10, a11 = res["a"]
    assert a00 == pytest.approx(0.6 * beta, abs=1e-10)
    assert a01 == pytest.approx((5.0 / 3.0) * a00 / beta, abs=1e-9)
    assert a10 == pytest.approx(-a01, abs=1e-9)
    assert a11 == pytest.approx(a00, abs=1e-10)
    assert res["classification"] == "essential"


def test_field_constants_of_the_degenerate_translation():
    def gen(point, order):
        return [const(order, 1.0), const(order, 0.0), const(order, 0.0), const(order, 0.0)]

    res = cproj_field_residual(frames_for(default_case("D1")), field_from(gen))
    assert res["residual"] < 1e-10
    assert res["transport"] < 1e-10
    assert np.allclose(res["a"], (0.6, 1.0, -1.0, -1.4), atol=1e-9)
    assert res["classification"] == "essential"


def test_field_constants_of_the_liouville_scaling():
    def gen(point, order):
        return [
            coord_jet(point, order, 0),
            coord_jet(point, order, 1),
            2.0 * coord_jet(point, order, 2),
            coord_jet(point, order, 3),
        ]

    res = cproj_field_residual(frames_for(default_case("L1")), field_from(gen))
    assert res["residual"] < 1e-10
    assert np.allclose(res["a"], (-0.6, 0.0, 0.0, 0.4), atol=1e-9)
    assert res["classification"] == "homothetic"


def test_killing_field_fits_zero_constants():
    def gen(point, order):
        return [const(order, 0.0), const(order, 0.0), const(order, 1.0), const(order, 0.0)]

    res = cproj_field_residual(frames_for(default_case("L3")), field_from(gen))
    assert res["residual"] < 1e-12
    assert np.allclose(res["a"], (0.0, 0.0, 0.0, 0.0), atol=1e-12)
    assert res["classification"] == "killing"


def test_field_constants_scale_linearly_with_the_field():
    def gen(point, order):
        s1 = coord_jet(point, order, 3)
        return [const(order, 1.0), const(order, 1.0), -s1, const(order, 0.0)]

    def doubled(point, order):
        return np.array([2.0 * c for c in gen(point, order)], dtype=object)

    frames = frames_for(default_case("L1"))
    res1 = cproj_field_residual(frames, field_from(gen))
    res2 = cproj_field_residual(frames, doubled)
    assert np.allclose(2.0 * np.array(res1["a"]), res2["a"], atol=1e-9)


def test_supplied_constants_skip_the_fit():
    frames = frames_for(default_case("L3"))
    good = cproj_field_residual(frames, field_from(l3_generator), a=(0.6, 0.0, 1.0, 0.6))
    assert good["residual"] < 1e-10
    assert "condition" not in good
    bad = cproj_field_residual(frames, field_from(l3_generator), a=(0.6, 0.0, 1.1, 0.6))
    assert bad["residual"] > 1e-3


def test_non_symmetry_field_leaves_a_large_residual():
    def gen(point, order):
        x0 = coord_jet(point, order, 0)
        return [x0 * x0, const(order, 0.0), const(order, 0.0), const(order, 0.0)]

    res = cproj_field_residual(frames_for(default_case("L3")), field_from(gen))
    assert res["residual"] > 1e-3


def test_fit_reports_a_bounded_condition_number():
    res = cproj_field_residual(frames_for(default_case("L3")), field_from(l3_generator))
    assert res["condition"] < 1e8


def test_classify_field_thresholds():
    assert classify_field((0.0, 0.5, 0.0, 0.0)) == "essential"
    assert classify_field((0.5, 0.0, 1.0, 2.0)) == "homothetic"
    assert classify_field((0.0, 0.0, 1.0, 0.0)) == "killing"
    assert classify_field((1e-12, 1e-13, 0.0, 0.0)) == "killing"


# ---------------------------------------------------------------------------
# connection comparison
# ---------------------------------------------------------------------------


def test_constant_curvature_models_share_their_connection_class():
    fs = default_case("fs")
    others = [default_case("fs_modified"), default_case("bergman_modified"), default_case("flat_kahler")]
    for pt in sample_points(fs, 2, SEED, "conn"):
        fa = build_frame(fs, pt, order=2)
        for other in others:
            fb = build_frame(other, pt, order=2)
            res = cproj_connection_check(fa, fb)
            assert res["j_mismatch"] < 1e-12
            assert res["residual"] < 1e-9, other.name


def test_conformal_rescaling_breaks_the_connection_pattern():
    case = default_case("fs")
    pt = sample_points(case, 1, SEED, "conn-neg")[0]
    fa = build_frame(case, pt, order=2)
    factor = 1.0 + 0.4 * seed_variable(4, 2, 0, pt[0])
    scaled = np.empty((4, 4), dtype=object)
    for i in range(4):
        for j in range(4):
            scaled[i, j] = fa.g[i, j] * factor
    from dataclasses import replace

    fb = replace(fa, g=scaled)
    res = cproj_connection_check(fa, fb)
    assert res["residual"] > 1e-3


def test_mismatched_complex_structures_are_flagged():
    fs = default_case("fs")
    l1 = default_case("L1")
    pt = sample_points(l1, 1, SEED, "conn-flag")[0]
    res = cproj_connection_check(build_frame(fs, pt, order=2), build_frame(l1, pt, order=2))
    assert res["j_mismatch"] > 1e-2
