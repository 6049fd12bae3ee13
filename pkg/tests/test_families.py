"""Tests for the metric family builders, companion pencil, and samplers."""

import json
import math

import numpy as np
import pytest

from cprojective.families import (
    FAMILY_NAMES,
    MODEL_NAMES,
    CaseSpec,
    RunConfig,
    build_companion,
    build_frame,
    build_model_frame,
    default_case,
    hermitian_to_real_metric,
    intro_surface_metric,
    make_case,
    pencil_metric,
    profile_G,
    recover_l_tensor,
    sample_points,
    standard_jmat,
)
from cprojective.geometry import (
    gauss_curvature_2d,
    holomorphic_sectional_curvature,
    kahler_residuals,
    relative_residual,
    riemann_down,
    riemann_up,
    christoffel,
    coeff_max,
    value_array,
)
from cprojective.jets import constant_jet, seed_variable

SEED = 20260816


def matrix_residual(a, b):
    worst = 0.0
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            worst = max(worst, relative_residual(a[i, j] - b[i, j], b[i, j]))
    return worst


# ---------------------------------------------------------------------------
# structure identities for every family
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", FAMILY_NAMES)
def test_family_satisfies_kahler_identities(name):
    case = default_case(name)
    for pt in sample_points(case, 2, SEED, "kahler-panel"):
        frame = build_frame(case, pt, order=3)
        res = kahler_residuals(frame.g, frame.omega, frame.jmat)
        assert set(res) == {
            "metric_symmetric",
            "form_antisymmetric",
            "j_squared",
            "j_orthogonal",
            "form_pairing",
            "form_closed",
            "j_parallel",
        }
        for key, val in res.items():
            assert val < 1e-9, (name, key, val)


@pytest.mark.parametrize("name", FAMILY_NAMES)
def test_companion_and_pencil_identities(name):
    case = default_case(name)
    pt = sample_points(case, 1, SEED, "companion")[0]
    frame = build_frame(case, pt, order=3)
    ghat, omegahat = build_companion(frame)

    res = kahler_residuals(ghat, omegahat, frame.jmat)
    assert max(res.values()) < 1e-9, (name, res)

    recovered = recover_l_tensor(frame.g, ghat)
    assert matrix_residual(recovered, frame.lmat) < 1e-8

    assert matrix_residual(pencil_metric(frame.g, ghat, 1.0, 0.0), frame.g) < 1e-9
    assert matrix_residual(pencil_metric(frame.g, ghat, 0.0, 1.0), ghat) < 1e-9

    member = pencil_metric(frame.g, ghat, 0.7, 0.45)
    omega_member = np.empty((4, 4), dtype=object)
    for i in range(4):
        for j in range(4):
            acc = None
            for a in range(4):
                t = frame.jmat[a, i] * member[a, j]
                acc = t if acc is None else acc + t
            omega_member[i, j] = acc
    res_member = kahler_residuals(member, omega_member, frame.jmat)
    assert max(res_member.values()) < 1e-8, (name, res_member)


def test_realified_frames_have_tiny_imaginary_parts():
    for name in ("C1", "C2", "C3", "C4"):
        case = default_case(name)
        pt = sample_points(case, 1, SEED, "realify")[0]
        frame = build_frame(case, pt, order=3)
        assert frame.imag_residual < 1e-10


def test_liouville_l_tensor_eigenvalues_are_profile_values():
    # the distinguished tensor of the first family has eigenvalues
    # x0, x0, x1, x1 (the 2x2 trailing block has the same two roots)
    case = default_case("L1")
    pt = sample_points(case, 1, SEED, "l-eigs")[0]
    frame = build_frame(case, pt, order=3)
    eigs = np.sort(np.linalg.eigvals(value_array(frame.lmat)).real)
    expected = np.sort([pt[0], pt[0], pt[1], pt[1]])
    assert np.allclose(eigs, expected, atol=1e-10)


def test_degenerate_l_tensor_eigenvalues():
    # scalar-profile families: eigenvalues are rho - 1 (twice) and -1 (twice)
    case = default_case("D1")
    pt = sample_points(case, 1, SEED, "l-eigs")[0]
    frame = build_frame(case, pt, order=3)
    rho = 1.0 / pt[0]
    eigs = np.sort(np.linalg.eigvals(value_array(frame.lmat)).real)
    expected = np.sort([rho - 1.0, rho - 1.0, -1.0, -1.0])
    assert np.allclose(eigs, expected, atol=1e-10)


# ---------------------------------------------------------------------------
# model spaces
# ---------------------------------------------------------------------------


def test_projective_model_is_identity_at_origin():
    frame = build_model_frame("fs", (0.0, 0.0, 0.0, 0.0), order=3)
    gval = value_array(frame.g)
    assert np.allclose(gval, np.eye(4), atol=1e-14)


def test_projective_model_sectional_curvature_is_four():
    frame = build_model_frame("fs", (0.3, -0.2, 0.4, 0.1), order=4)
    gamma = christoffel(frame.g)
    rdown = riemann_down(frame.g, riemann_up(gamma))
    for v in ((1.0, 0.0, 0.0, 0.0), (0.3, -0.2, 0.5, 0.7)):
        k = holomorphic_sectional_curvature(frame.g, frame.jmat, rdown, v)
        assert coeff_max(k - 4.0) < 1e-8


def test_flat_model_has_zero_curvature():
    frame = build_model_frame("flat_kahler", (0.2, 0.5, -0.3, 0.1), order=3)
    gamma = christoffel(frame.g)
    rdown = riemann_down(frame.g, riemann_up(gamma))
    assert coeff_max(rdown) < 1e-12


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_models_satisfy_kahler_identities(name):
    frame = build_model_frame(name, (0.25, -0.15, 0.3, 0.2), order=3)
    res = kahler_residuals(frame.g, frame.omega, frame.jmat)
    assert max(res.values()) < 1e-9, (name, res)


def test_hermitian_realification_of_constant_form():
    # h = [[2, 1+3i], [1-3i, 5]] must realify to a symmetric matrix with
    # paired diagonal blocks and antisymmetric imaginary off-blocks
    from cprojective.jets import ComplexJet

    one = constant_jet(4, 2, 1.0)
    zero = constant_jet(4, 2, 0.0)
    h = np.empty((2, 2), dtype=object)
    h[0, 0] = ComplexJet(2.0 * one, zero)
    h[0, 1] = ComplexJet(1.0 * one, 3.0 * one)
    h[1, 0] = ComplexJet(1.0 * one, -3.0 * one)
    h[1, 1] = ComplexJet(5.0 * one, zero)
    g = value_array(hermitian_to_real_metric(h))
    expected = np.array(
        [
            [2.0, 0.0, 1.0, 3.0],
            [0.0, 2.0, -3.0, 1.0],
            [1.0, -3.0, 5.0, 0.0],
            [3.0, 1.0, 0.0, 5.0],
        ]
    )
    assert np.allclose(g, expected, atol=1e-14)
    assert np.allclose(g, g.T, atol=1e-14)


def test_standard_jmat_squares_to_minus_identity():
    jm = value_array(standard_jmat(2))
    assert np.allclose(jm @ jm, -np.eye(4), atol=1e-14)


# ---------------------------------------------------------------------------
# surface metrics for the path-equation examples
# ---------------------------------------------------------------------------


def test_surface_a_curvature_profile():
    # orthogonal-coordinate curvature of diag(e^{4x}, e^{2x}) is e^{-4x}
    for x in (0.0, 0.3, -0.5):
        g = intro_surface_metric("a", (x, 0.7), order=4)
        k = gauss_curvature_2d(g)
        assert abs(k.value - math.exp(-4.0 * x)) < 1e-10


def test_surface_b_curvature_profile():
    # orthogonal-coordinate curvature of diag(e^{3x}, e^{x}) is e^{-3x}/2
    for x in (0.0, 0.4, -0.6):
        g = intro_surface_metric("b", (x, -0.2), order=4)
        k = gauss_curvature_2d(g)
        assert abs(k.value - 0.5 * math.exp(-3.0 * x)) < 1e-10


def test_surface_flat_curvature_zero():
    g = intro_surface_metric("flat", (0.3, 0.4), order=4)
    assert abs(gauss_curvature_2d(g).value) < 1e-13


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------


def test_profile_poly_matches_horner_on_floats():
    spec = {"kind": "poly", "coeffs": [1.0, 0.3, 0.0, 0.2]}
    for s in (0.0, 0.5, -1.2):
        expected = 1.0 + 0.3 * s + 0.2 * s**3
        assert abs(profile_G(spec, s) - expected) < 1e-14


def test_profile_jet_and_float_agree():
    specs = [
        {"kind": "quadratic", "kappa": 1.0, "m1": 4.0, "m2": 3.0},
        {"kind": "power", "kappa": 1.0, "m1": 0.5, "m2": 2.0},
        {"kind": "exp", "m1": 0.7},
        {"kind": "sinpow", "freq": 0.8, "phase": math.pi / 2, "amp": 1.1, "expo": -4.0},
    ]
    s_val = 0.4
    s_jet = seed_variable(1, 3, 0, s_val)
    for spec in specs:
        f_float = profile_G(spec, s_val)
        f_jet = profile_G(spec, s_jet)
        assert abs(f_jet.value - f_float) < 1e-12, spec


# ---------------------------------------------------------------------------
# samplers and configuration
# ---------------------------------------------------------------------------


def test_sampler_is_deterministic_per_check():
    case = default_case("L2")
    a = sample_points(case, 5, SEED, "check-a")
    b = sample_points(case, 5, SEED, "check-a")
    c = sample_points(case, 5, SEED, "check-b")
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sampler_streams_differ_between_cases():
    a = sample_points(default_case("L1"), 4, SEED, "check")
    b = sample_points(default_case("L3"), 4, SEED, "check")
    assert not np.array_equal(a, b)


def test_sampler_respects_margins():
    for name in FAMILY_NAMES:
        case = default_case(name)
        pts = sample_points(case, 20, SEED, "margin-audit")
        assert pts.shape == (20, 4)
        if name in ("L1", "L3"):
            assert np.min(np.abs(pts[:, 0] - pts[:, 1])) >= 0.05
        if name in ("D1", "D3"):
            assert np.min(pts[:, 0]) >= 0.1


def test_case_key_and_labels():
    case = default_case("L1")
    assert case.key == "L1"
    labeled = make_case("L1", label="L1-custom", c1=1.0)
    assert labeled.key == "L1-custom"
    assert labeled.params["c1"] == 1.0


def test_unknown_family_rejected():
    with pytest.raises(ValueError):
        CaseSpec("Q9", {})


def test_runconfig_validation():
    cfg = RunConfig(family="L1")
    assert cfg.points == 12 and cfg.order == 4
    with pytest.raises(ValueError):
        RunConfig(family="L1", points=5)
    with pytest.raises(ValueError):
        RunConfig(family="L1", order=7)
    with pytest.raises(ValueError):
        RunConfig(family="L1", tol=0.5)


def test_runconfig_json_round_trip():
    cfg = RunConfig(family="D2b", params={"beta": 0.5}, points=11, tol=1e-9)
    again = RunConfig.from_json(cfg.to_json())
    assert again == cfg
    with pytest.raises(ValueError):
        RunConfig.from_json(json.dumps({"family": "L1", "bogus": 3}))


# ---------------------------------------------------------------------------
# model routing and parameter-domain invariants
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_models_route_through_the_case_registry(name):
    case = default_case(name)
    pts = sample_points(case, 3, SEED, "model-route")
    for pt in pts:
        frame = build_frame(case, pt, order=3)
        assert frame.case.name == name
        res = kahler_residuals(frame.g, frame.omega, frame.jmat)
        assert max(res.values()) < 1e-9, (name, res)


def test_forbidden_shape_parameters_are_rejected():
    for name in ("L2", "C2", "D2b"):
        with pytest.raises(ValueError):
            make_case(name, beta=1.0)
    with pytest.raises(ValueError):
        make_case("D2b", beta=-2.0)
    # the same values stay legal where the construction allows them
    assert make_case("L4", beta=1.0).params["beta"] == 1.0
    assert make_case("L2", beta=-2.0).params["beta"] == -2.0
