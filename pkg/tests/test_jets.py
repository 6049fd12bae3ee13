import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import JET_LIB, RandomProgram, fd_partial, jet_partial, sample_alphas
from cprojective.jets import (
    ComplexJet,
    Jet,
    arith,
    complex_seed,
    constant_jet,
    elementary,
    extract_partial,
    multi_indices,
    partial_derivative,
    seed_variable,
    table_size,
)


def test_table_sizes():
    # binomial(n + d, d) entries for n vars, order d
    assert table_size(1, 4) == 5
    assert table_size(2, 4) == 15
    assert table_size(4, 4) == 70
    assert table_size(4, 2) == 15


def test_graded_order_truncation_is_prefix():
    idx = multi_indices(3, 3)
    degs = [sum(a) for a in idx]
    assert degs == sorted(degs)
    assert idx[: table_size(3, 2)] == multi_indices(3, 2)


def test_seed_and_constant():
    x = seed_variable(3, 2, 1, 2.5)
    assert x.value == 2.5
    assert x.coefficient((0, 1, 0)) == 1.0
    assert x.coefficient((1, 0, 0)) == 0.0
    c = constant_jet(3, 2, -4.0)
    assert c.value == -4.0
    assert np.count_nonzero(c.coeffs) == 1


def test_monomial_partial_exact():
    # f = x^2 y at (a, b): coefficients are exact integers, and the partial
    # extraction shift c'_alpha = c_{alpha+e} (alpha_e + 1) must be exact.
    x = seed_variable(2, 4, 0, 1.5)
    y = seed_variable(2, 4, 1, -2.0)
    f = x * x * y
    fx = extract_partial(f, 0)
    assert fx.order == 3
    assert fx.value == 2 * 1.5 * -2.0
    assert fx.coefficient((1, 0)) == 2 * -2.0
    assert fx.coefficient((0, 1)) == 1.5 * 2
    fxy = extract_partial(fx, 1)
    assert fxy.coefficient((1, 0)) == 2.0
    assert partial_derivative(f, (2, 1)) == 2.0


# Frozen high-precision values (50-digit arithmetic) for
# f(x, y) = exp(x*y) * sin(x) / sqrt(1 + y^2) at (0.3, 0.7).
FROZEN_F = {
    (0, 0): 0.29867294813456967,
    (1, 0): 1.1745995089103335,
    (0, 1): -0.050714265689963843,
    (2, 0): 1.199416619753958,
    (1, 1): 0.099227528165231171,
    (2, 1): 2.1455396857416391,
    (3, 1): 3.6103004701055496,
    (2, 2): -0.44138394705161247,
    (4, 0): -1.8864887643025953,
    (0, 4): -0.79788245794389004,
}

# g(x, y, z) = tan(0.3*sin(x*y)) + ln(z^2 + 0.5) * cos(x - y)
# at (0.4, -0.6, 0.9).  The (1,1,2) and (0,0,2) values coincide because
# d_x d_y cos(x - y) = cos(x - y).
FROZEN_G = {
    (0, 0, 0): 0.074464373356164191,
    (1, 1, 0): 0.42450899729731372,
    (0, 0, 2): -0.1952027443845036,
    (2, 0, 1): -0.74240011493332175,
    (1, 1, 2): -0.1952027443845036,
    (0, 3, 0): -0.24330559332566216,
}


def test_frozen_composite_two_vars():
    x = seed_variable(2, 4, 0, 0.3)
    y = seed_variable(2, 4, 1, 0.7)
    f = (
        elementary(x * y, "exp")
        * elementary(x, "sin")
        / elementary(1 + y * y, "sqrt")
    )
    for alpha, want in FROZEN_F.items():
        got = partial_derivative(f, alpha)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-13), alpha


def test_frozen_composite_three_vars():
    x = seed_variable(3, 4, 0, 0.4)
    y = seed_variable(3, 4, 1, -0.6)
    z = seed_variable(3, 4, 2, 0.9)
    g = elementary(0.3 * elementary(x * y, "sin"), "tan") + elementary(
        z * z + 0.5, "ln"
    ) * elementary(x - y, "cos")
    for alpha, want in FROZEN_G.items():
        got = partial_derivative(g, alpha)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-13), alpha


def test_random_programs_match_fd_oracle():
    rng = np.random.default_rng(20260816)
    for _ in range(12):
        nvars = int(rng.integers(2, 4))
        prog = RandomProgram(rng, nvars, nsteps=int(rng.integers(4, 9)))
        point = rng.uniform(-1.0, 1.0, size=nvars)
        jet = prog.jet_at(point, order=4)
        for alpha in sample_alphas(rng, nvars, 4, 6):
            want = fd_partial(prog, point, alpha)
            got = jet_partial(jet, alpha)
            assert got == pytest.approx(want, rel=1e-6, abs=1e-8), (alpha, point)


def test_arith_dispatcher_and_scalars():
    x = seed_variable(2, 3, 0, 1.2)
    y = seed_variable(2, 3, 1, 0.4)
    assert arith(x, y, "add").value == pytest.approx(1.6)
    assert arith(x, 2.0, "mul").value == pytest.approx(2.4)
    assert arith(1.0, x, "div").value == pytest.approx(1 / 1.2)
    assert arith(x, y, "sub").value == pytest.approx(0.8)
    with pytest.raises(ValueError):
        arith(x, y, "mod")


def test_mixed_order_arithmetic_truncates():
    a = seed_variable(2, 4, 0, 1.0)
    b = seed_variable(2, 2, 1, 2.0)
    c = a * b
    assert c.order == 2
    assert c.value == 2.0


def test_integer_power_matches_repeated_mul():
    x = seed_variable(2, 4, 0, 0.8)
    y = seed_variable(2, 4, 1, -0.3)
    f = x + y * y
    assert np.allclose((f**3).coeffs, (f * f * f).coeffs, atol=1e-14)
    assert np.allclose((f**0).coeffs, constant_jet(2, 4, 1.0).coeffs)


def test_domain_errors():
    x = seed_variable(1, 3, 0, -1.0)
    with pytest.raises(ValueError):
        elementary(x, "ln")
    with pytest.raises(ValueError):
        elementary(x, "sqrt")
    with pytest.raises(ZeroDivisionError):
        constant_jet(1, 3, 0.0).reciprocal()
    near_pole = seed_variable(1, 3, 0, math.pi / 2)
    with pytest.raises(ValueError):
        elementary(near_pole, "tan")
    with pytest.raises(ValueError):
        elementary(x, "pow")
    with pytest.raises(ValueError):
        extract_partial(constant_jet(2, 0, 1.0), 0)


def test_negative_integer_exponent():
    x = seed_variable(1, 4, 0, 2.0)
    got = elementary(x, "pow", -2.0)
    want = 1.0 / (x * x)
    assert np.allclose(got.coeffs, want.coeffs, atol=1e-14)


coeff_arrays = st.lists(
    st.floats(min_value=-2.0, max_value=2.0, allow_nan=False), min_size=10, max_size=10
).map(lambda v: Jet(2, 3, np.array(v)))


@given(coeff_arrays, coeff_arrays)
@settings(max_examples=60, deadline=None)
def test_mul_commutes_and_add_associates(a, b):
    ab = a * b
    ba = b * a
    assert np.allclose(ab.coeffs, ba.coeffs, atol=1e-13)
    c = constant_jet(2, 3, 0.7)
    lhs = (a + b) + c
    rhs = a + (b + c)
    assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-13)


@given(coeff_arrays, coeff_arrays)
@settings(max_examples=60, deadline=None)
def test_leibniz_rule(a, b):
    prod = a * b
    for var in (0, 1):
        lhs = extract_partial(prod, var)
        rhs = extract_partial(a, var) * b.truncated(2) + a.truncated(2) * extract_partial(b, var)
        scale = 1.0 + np.max(np.abs(rhs.coeffs))
        assert np.max(np.abs(lhs.coeffs - rhs.coeffs)) / scale < 1e-12


@given(coeff_arrays)
@settings(max_examples=60, deadline=None)
def test_chain_rule_exp(a):
    e = elementary(a, "exp")
    for var in (0, 1):
        lhs = extract_partial(e, var)
        rhs = e.truncated(2) * extract_partial(a, var)
        scale = 1.0 + np.max(np.abs(rhs.coeffs))
        assert np.max(np.abs(lhs.coeffs - rhs.coeffs)) / scale < 1e-11


@given(coeff_arrays, coeff_arrays)
@settings(max_examples=60, deadline=None)
def test_div_mul_roundtrip(a, b):
    denom_coeffs = b.coeffs.copy()
    denom_coeffs[0] = 1.5 + abs(denom_coeffs[0])
    denom = Jet(2, 3, denom_coeffs)
    back = (a / denom) * denom
    scale = 1.0 + np.max(np.abs(a.coeffs))
    assert np.max(np.abs(back.coeffs - a.coeffs)) / scale < 1e-12


# ---------------------------------------------------------------------------
# complex jets
# ---------------------------------------------------------------------------


def test_complex_seed_and_conj():
    z = complex_seed(2, 3, 0, 1, 0.3 + 0.7j)
    assert z.value == 0.3 + 0.7j
    assert z.conj().value == 0.3 - 0.7j
    w = z * z.conj()
    assert np.max(np.abs(w.im.coeffs)) < 1e-15
    assert w.re.value == pytest.approx(0.3**2 + 0.7**2)


def test_complex_holomorphic_cauchy_riemann():
    # For w(z) built from z = x + iy alone, d_y w = i * d_x w.
    z = complex_seed(2, 4, 0, 1, 0.4 + 0.2j)
    w = elementary(z, "exp") * elementary(z * z + 2.0, "sqrt")
    wx = extract_partial(w, 0)
    wy = extract_partial(w, 1)
    assert np.allclose(wy.re.coeffs, -wx.im.coeffs, atol=1e-12)
    assert np.allclose(wy.im.coeffs, wx.re.coeffs, atol=1e-12)


def test_complex_division_roundtrip():
    z = complex_seed(2, 3, 0, 1, 0.5 - 0.8j)
    w = elementary(z, "sin") + 2.0
    q = (w / z) * z - w
    assert np.max(np.abs(q.re.coeffs)) < 1e-12
    assert np.max(np.abs(q.im.coeffs)) < 1e-12


def test_complex_elementary_against_cmath():
    import cmath

    z0 = 0.3 + 0.6j
    z = complex_seed(2, 3, 0, 1, z0)
    cases = {
        "exp": cmath.exp(z0),
        "ln": cmath.log(z0),
        "sin": cmath.sin(z0),
        "cos": cmath.cos(z0),
        "tan": cmath.tan(z0),
        "sqrt": cmath.sqrt(z0),
    }
    for name, want in cases.items():
        got = elementary(z, name).value
        assert got == pytest.approx(want, rel=1e-14)
    got = elementary(z, "pow", -1.5).value
    assert got == pytest.approx(z0**-1.5, rel=1e-13)


def test_complex_derivative_of_exp():
    # d/dx exp(x + iy) = exp(x + iy) exactly in jet coefficients.
    z = complex_seed(2, 4, 0, 1, -0.2 + 0.9j)
    e = elementary(z, "exp")
    ex = extract_partial(e, 0)
    assert np.allclose(ex.re.coeffs, e.truncated(3).re.coeffs, atol=1e-13)
    assert np.allclose(ex.im.coeffs, e.truncated(3).im.coeffs, atol=1e-13)
