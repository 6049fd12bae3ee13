"""Checks tying a metric to its companion: shared-tensor system and fields.

Given a family frame ``(g, omega, J, L)`` and its companion metric ``ghat``,
this module verifies the structures that make the pair geodesically
compatible in the complex sense:

* the distinguished endomorphism recovered from the pair, its trace
  one-form, and the first-order system its covariant derivative satisfies
  (``sinjukov_residuals``);
* scalar obstructions to a larger solution space, one per family group
  (``mobility_condition_liouville``, ``mobility_condition_degenerate``);
* the constancy decision for holomorphic sectional curvature
  (``hsc_classify``);
* the defining equations of symmetry vector fields with their four fitted
  constants, eigenvalue transport, and the Killing / homothetic / essential
  classification (``cproj_field_residual``, ``classify_field``);
* comparison of two Levi-Civita connections against the characteristic
  trace-pattern difference (``cproj_connection_check``).

Fitted constants use plain least squares over all retained jet
coefficients; every fit reports its design-matrix condition number so that
a degenerate pattern cannot silently produce a small residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .families import (
    CaseSpec,
    MetricFrame,
    _degenerate_profiles,
    build_companion,
    build_frame,
    recover_l_tensor,
    sample_points,
)
from .geometry import (
    christoffel,
    coeff_max,
    covariant_derivative_02,
    covariant_derivative_oneform,
    holomorphic_sectional_curvature,
    jet_matmul,
    jet_matrix_inverse,
    jet_trace,
    lie_derivative_endomorphism,
    lie_derivative_metric,
    relative_residual,
    riemann_down,
    riemann_up,
    value_array,
)
from .jets import (
    ComplexJet,
    Jet,
    constant_jet,
    extract_partial,
    partial_derivative,
    seed_variable,
)

__all__ = [
    "LTensorFrame",
    "l_tensor",
    "sinjukov_residuals",
    "mobility_condition_liouville",
    "mobility_condition_degenerate",
    "hsc_classify",
    "cproj_field_residual",
    "classify_field",
    "cproj_connection_check",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 20260816


# ---------------------------------------------------------------------------
# the distinguished endomorphism of a compatible pair
# ---------------------------------------------------------------------------


@dataclass
class LTensorFrame:
    """Distinguished (1,1)-tensor of a metric pair with derived scalars.

    Attributes
    ----------
    frame : MetricFrame
        Base frame the tensor was recovered on.
    endo : numpy.ndarray
        The recovered endomorphism ``L^i_j`` as a jet matrix.
    lowered : numpy.ndarray
        ``L_ij = g_ia L^a_j``; symmetric when the pair is compatible.
    lam : Jet
        Trace scalar ``tr(L) / 4``.
    lam_d : numpy.ndarray
        Gradient one-form of ``lam`` (jet order drops by one).
    lam_bar : numpy.ndarray
        Rotated gradient ``J^a_i lam_a``.
    selfadjoint_residual : float
        Asymmetry of ``lowered`` relative to its size.
    jcommute_residual : float
        Residual of ``J L - L J`` relative to ``L``.
    """

    frame: MetricFrame
    endo: np.ndarray
    lowered: np.ndarray
    lam: Jet
    lam_d: np.ndarray
    lam_bar: np.ndarray
    selfadjoint_residual: float
    jcommute_residual: float


def l_tensor(frame: MetricFrame, ghat) -> LTensorFrame:
    """Recover the distinguished endomorphism of ``(g, ghat)`` with scalars.

    Parameters
    ----------
    frame : MetricFrame
        Base metric frame (supplies ``g`` and ``J``).
    ghat : numpy.ndarray
        Companion metric jet matrix at the same point.

    Returns
    -------
    LTensorFrame
    """
    n = frame.g.shape[0]
    endo = recover_l_tensor(frame.g, ghat)
    lowered = jet_matmul(frame.g, endo)
    lam = 0.25 * jet_trace(endo)
    lam_d = np.empty(n, dtype=object)
    for i in range(n):
        lam_d[i] = extract_partial(lam, i)
    lam_bar = np.empty(n, dtype=object)
    for i in range(n):
        acc = frame.jmat[0, i] * lam_d[0]
        for a in range(1, n):
            acc = acc + frame.jmat[a, i] * lam_d[a]
        lam_bar[i] = acc

    sym_worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            sym_worst = max(
                sym_worst, relative_residual(lowered[i, j] - lowered[j, i], lowered[i, j])
            )
    jl = jet_matmul(frame.jmat, endo)
    lj = jet_matmul(endo, frame.jmat)
    comm_worst = 0.0
    for i in range(n):
        for j in range(n):
            comm_worst = max(comm_worst, relative_residual(jl[i, j] - lj[i, j], endo[i, j]))
    return LTensorFrame(frame, endo, lowered, lam, lam_d, lam_bar, sym_worst, comm_worst)


# ---------------------------------------------------------------------------
# the first-order compatibility system
# ---------------------------------------------------------------------------


def sinjukov_residuals(frame: MetricFrame, ghat) -> dict:
    """Residuals of the three-tier linear system satisfied by the pair.

    The covariant derivative of the lowered distinguished tensor must be the
    symmetrized product of the metric, the 2-form, and the trace gradient;
    the covariant derivative of that gradient must be a combination of the
    metric and the lowered tensor with constants ``(mu, B)``; the gradient of
    ``mu`` must be proportional to the trace gradient with factor ``2 B``.

    The first equation is assembled twice from its two equivalent printed
    arrangements so a transcription slip in either cannot pass silently.
    ``(mu, B)`` are fitted from the 16 value-level components of the second
    equation at the frame's base point; ``mu`` is then promoted to a jet via
    the trace projection of the same equation to evaluate the third.

    Returns
    -------
    dict
        Keys ``nabla_l``, ``nabla_l_alt``, ``nabla_lambda``, ``nabla_mu``
        (relative residuals) and the fitted constants ``B`` and ``mu``.
    """
    lt = l_tensor(frame, ghat)
    n = frame.g.shape[0]
    g = frame.g
    w = frame.omega
    gamma = christoffel(g)
    nab_l = covariant_derivative_02(lt.lowered, gamma)

    ref = max(coeff_max(nab_l[k, i, j]) for k in range(n) for i in range(n) for j in range(n))
    worst_main = 0.0
    worst_alt = 0.0
    for k in range(n):
        for i in range(n):
            for j in range(n):
                rhs_main = (
                    g[i, k] * lt.lam_d[j]
                    + g[j, k] * lt.lam_d[i]
                    + w[i, k] * lt.lam_bar[j]
                    + w[j, k] * lt.lam_bar[i]
                )
                rhs_alt = (
                    lt.lam_d[i] * g[j, k]
                    + lt.lam_d[j] * g[i, k]
                    + lt.lam_bar[i] * w[j, k]
                    + lt.lam_bar[j] * w[i, k]
                )
                worst_main = max(worst_main, coeff_max(nab_l[k, i, j] - rhs_main))
                worst_alt = max(worst_alt, coeff_max(nab_l[k, i, j] - rhs_alt))
    r_main = worst_main / (1.0 + ref)
    r_alt = worst_alt / (1.0 + ref)

    hess = covariant_derivative_oneform(lt.lam_d, gamma)
    hess_val = value_array(hess)
    g_val = value_array(g)
    l_val = value_array(lt.lowered)
    design = np.stack([g_val.ravel(), l_val.ravel()], axis=1)
    sol, _, _, _ = np.linalg.lstsq(design, hess_val.ravel(), rcond=None)
    mu, big_b = float(sol[0]), float(sol[1])
    fit = mu * g_val + big_b * l_val
    r_grad = float(np.max(np.abs(hess_val - fit)) / (1.0 + np.max(np.abs(hess_val))))

    ginv = jet_matrix_inverse(g)
    trace_h = None
    for i in range(n):
        for j in range(n):
            term = ginv[i, j] * hess[i, j]
            trace_h = term if trace_h is None else trace_h + term
    tr_l = jet_trace(lt.endo)
    mu_jet = 0.25 * (trace_h - big_b * tr_l.truncated(trace_h.order))
    ref3 = max(coeff_max(lt.lam_d[k]) for k in range(n))
    worst3 = max(
        coeff_max(extract_partial(mu_jet, k) - (2.0 * big_b) * lt.lam_d[k]) for k in range(n)
    )
    r_mu = worst3 / (1.0 + ref3)

    return {
        "nabla_l": r_main,
        "nabla_l_alt": r_alt,
        "nabla_lambda": r_grad,
        "nabla_mu": r_mu,
        "B": big_b,
        "mu": mu,
    }


# ---------------------------------------------------------------------------
# mobility obstructions
# ---------------------------------------------------------------------------


def mobility_condition_liouville(case: CaseSpec, point, order: int = 3) -> float:
    """Higher-mobility obstruction scalar of the non-degenerate families.

    The second-tier equation pins its two coefficients pointwise; a solution
    space larger than two forces the tensor coefficient to be constant.  The
    coefficient is solved for in jet arithmetic by least squares over all 16
    components of the equation, and the returned scalar is the largest first
    derivative of that solved coefficient.  It vanishes exactly on the
    parameter loci where higher mobility (equivalently constant curvature)
    is attainable and is bounded away from zero otherwise.

    Parameters
    ----------
    case : CaseSpec
        A Liouville-group or complex-group case.
    point : sequence of float
        Base point.
    order : int
        Jet order of the underlying frame; 3 keeps one derivative of the
        solved coefficient exact.

    Returns
    -------
    float
        ``max_k |d_k B|`` for the pointwise-solved coefficient ``B``.
    """
    frame = build_frame(case, point, order=order)
    ghat, _ = build_companion(frame)
    lt = l_tensor(frame, ghat)
    gamma = christoffel(frame.g)
    hess = covariant_derivative_oneform(lt.lam_d, gamma)
    n = 4
    gl = jet_matmul(frame.g, lt.endo)
    a11 = a12 = a22 = b1 = b2 = None
    for i in range(n):
        for j in range(n):
            gij, mij, hij = frame.g[i, j], gl[i, j], hess[i][j]
            t11, t12, t22 = gij * gij, gij * mij, mij * mij
            u1, u2 = gij * hij, mij * hij
            if a11 is None:
                a11, a12, a22, b1, b2 = t11, t12, t22, u1, u2
            else:
                a11, a12, a22 = a11 + t11, a12 + t12, a22 + t22
                b1, b2 = b1 + u1, b2 + u2
    det = a11 * a22 - a12 * a12
    bjet = (a11 * b2 - a12 * b1) * det.reciprocal()
    return max(abs(extract_partial(bjet, k).value) for k in range(n))


def mobility_condition_degenerate(case: CaseSpec, x0: float) -> float:
    """Profile-derivative obstruction scalar of the degenerate families.

    The single off-diagonal component of the second-tier equation pins the
    constant ``B``; differentiating the solved-for ``B`` along ``x0`` leaves
    a polynomial in the profile pair ``(rho, F)`` and their derivatives that
    must vanish identically when the solution space is larger:

    ``3 rho^2 F'^2 rho' - F rho^2 F'' rho' + 4 F rho F' rho'^2
    + 3 F^2 rho'^3 - 3 F rho^2 F' rho'' - 4 F^2 rho rho' rho''
    + F^2 rho^2 rho'''``.

    Parameters
    ----------
    case : CaseSpec
        A degenerate-group case.
    x0 : float
        Profile coordinate value.

    Returns
    -------
    float
        The obstruction polynomial evaluated at ``x0``.
    """
    x = seed_variable(1, 3, 0, float(x0))
    rho_jet, f_jet = _degenerate_profiles(case, x)
    rho = rho_jet.value
    rho1 = partial_derivative(rho_jet, (1,))
    rho2 = partial_derivative(rho_jet, (2,))
    rho3 = partial_derivative(rho_jet, (3,))
    f = f_jet.value
    f1 = partial_derivative(f_jet, (1,))
    f2 = partial_derivative(f_jet, (2,))
    return float(
        3.0 * rho**2 * f1**2 * rho1
        - f * rho**2 * f2 * rho1
        + 4.0 * f * rho * f1 * rho1**2
        + 3.0 * f**2 * rho1**3
        - 3.0 * f * rho**2 * f1 * rho2
        - 4.0 * f**2 * rho * rho1 * rho2
        + f**2 * rho**2 * rho3
    )


# ---------------------------------------------------------------------------
# holomorphic sectional curvature classification
# ---------------------------------------------------------------------------


def hsc_classify(
    case: CaseSpec,
    master_seed: int = DEFAULT_SEED,
    tol: float = 1e-8,
    pairs: int = 30,
) -> dict:
    """Decide whether a case has constant holomorphic sectional curvature.

    Curvature of the plane spanned by ``(v, J v)`` is evaluated at sampled
    (point, direction) pairs; the case counts as constant when the spread of
    the sampled values stays below ``tol * (1 + |mean|)``.

    Parameters
    ----------
    case : CaseSpec
        Family case or model name.
    master_seed : int
        Seed of the deterministic sampling streams.
    tol : float
        Relative spread tolerance.
    pairs : int
        Number of (point, direction) samples; two directions per point.

    Returns
    -------
    dict
        ``constant`` (bool), ``mean``, ``spread``, ``values``, and
        ``witness``: the extreme (point, direction, value) samples that
        certify non-constancy (``None`` when constant).
    """
    npts = (pairs + 1) // 2
    pts = sample_points(case, npts, master_seed, "hsc")
    rng = np.random.Generator(
        np.random.PCG64(
            np.random.SeedSequence([int(master_seed), _crc(case.key), _crc("hsc_directions")])
        )
    )
    samples = []
    for pt in pts:
        frame = build_frame(case, pt, order=2)
        gamma = christoffel(frame.g)
        rdown = riemann_down(frame.g, riemann_up(gamma))
        g_val = value_array(frame.g)
        floor = 0.1 * max(1.0, float(np.max(np.abs(g_val))))
        got = 0
        attempts = 0
        while got < 2:
            attempts += 1
            if attempts > 500:
                raise RuntimeError("direction sampler kept hitting null vectors")
            v = rng.uniform(-1.0, 1.0, size=4)
            norm = float(v @ g_val @ v)
            if abs(norm) < floor:
                continue
            k = holomorphic_sectional_curvature(frame.g, frame.jmat, rdown, v)
            samples.append((pt, v, float(k.value)))
            got += 1
        if len(samples) >= pairs:
            break
    values = np.array([s[2] for s in samples])
    mean = float(values.mean())
    spread = float(values.max() - values.min())
    constant = spread < tol * (1.0 + abs(mean))
    witness = None
    if not constant:
        lo = samples[int(values.argmin())]
        hi = samples[int(values.argmax())]
        witness = {
            "low": {"point": list(lo[0]), "direction": list(lo[1]), "value": lo[2]},
            "high": {"point": list(hi[0]), "direction": list(hi[1]), "value": hi[2]},
        }
    return {
        "constant": bool(constant),
        "mean": mean,
        "spread": spread,
        "values": values.tolist(),
        "witness": witness,
    }


def _crc(text: str) -> int:
    import zlib

    return zlib.crc32(text.encode())


# ---------------------------------------------------------------------------
# symmetry field equations
# ---------------------------------------------------------------------------


def _field_jets(field, point, order):
    """Evaluate a vector field to jets; accepts callables or jet arrays."""
    if callable(field):
        return field(point, order)
    return field


def _eigen_jets(frame: MetricFrame):
    """Non-constant eigenvalue functions of the frame's distinguished tensor.

    Returns a list of (jet_or_complexjet, is_complex) pairs.  The constant
    eigenvalue of the degenerate group is included since the transport
    identity must hold on it with zero left-hand side.
    """
    name = frame.case.name
    lm = frame.lmat
    if name.startswith("L"):
        return [(lm[0, 0], False), (lm[1, 1], False)]
    if name.startswith("C"):
        re = 0.5 * (lm[0, 0] + lm[1, 1])
        im = 0.5 * (lm[1, 0] - lm[0, 1])
        return [(ComplexJet(re, im), True)]
    if name.startswith("D"):
        proto = lm[0, 0]
        minus_one = constant_jet(proto.nvars, proto.order, -1.0)
        return [(lm[0, 0], False), (minus_one, False)]
    return []


def _directional(v_jets, f):
    """``v(f)`` for a scalar jet or complex jet ``f``."""
    if isinstance(f, ComplexJet):
        return ComplexJet(_directional(v_jets, f.re), _directional(v_jets, f.im))
    acc = None
    for a in range(len(v_jets)):
        term = v_jets[a] * extract_partial(f, a)
        acc = term if acc is None else acc + term
    return acc


def cproj_field_residual(frames, field, a=None) -> dict:
    """Residual of the symmetry field equations with fitted constants.

    A candidate field ``v`` must satisfy, jointly over all supplied frames,

    * ``L_v L = -a01 L^2 + (a11 - a00) L + a10 Id`` and
    * ``L_v g + 5 a00 g + a01 (g L + tr(L)/2 g) = 0``

    for a single constant vector ``a = (a00, a01, a10, a11)``.  When ``a``
    is not supplied it is fitted by least squares over every retained jet
    coefficient of both equations.  The transport identity
    ``v(f) = -a01 f^2 + (a11 - a00) f + a10`` is then checked on each
    eigenvalue function of the distinguished tensor.

    Parameters
    ----------
    frames : sequence of MetricFrame
        Frames of one case at several points (order 4 recommended).
    field : callable
        ``field(point, order) -> length-4 jet array``.
    a : tuple of float, optional
        Evaluate with these constants instead of fitting.

    Returns
    -------
    dict
        ``residual`` (worst row-relative residual of both equations), ``a``
        (the constants used), ``transport`` (eigenvalue transport
        residual), ``condition`` (design-matrix condition number; only for
        fitted runs), and ``classification`` from :func:`classify_field`.
    """
    assembled = []
    for frame in frames:
        n = frame.g.shape[0]
        v_jets = _field_jets(field, frame.point, frame.order)
        lvg = lie_derivative_metric(v_jets, frame.g)
        lvl = lie_derivative_endomorphism(v_jets, frame.lmat)
        l2 = jet_matmul(frame.lmat, frame.lmat)
        gl = jet_matmul(frame.g, frame.lmat)
        tr_l = jet_trace(frame.lmat)
        ident = np.empty((n, n), dtype=object)
        proto = frame.g[0, 0]
        one = constant_jet(proto.nvars, proto.order, 1.0)
        zero = constant_jet(proto.nvars, proto.order, 0.0)
        for i in range(n):
            for j in range(n):
                ident[i, j] = one if i == j else zero
        rows = []
        # metric equation: columns multiply (a00, a01, a10, a11)
        for i in range(n):
            for j in range(i, n):
                col0 = 5.0 * frame.g[i, j]
                col1 = gl[i, j] + 0.5 * (tr_l * frame.g[i, j].truncated(tr_l.order))
                rows.append((lvg[i, j], col0, col1, zero, zero))
        # endomorphism equation
        for i in range(n):
            for j in range(n):
                rows.append(
                    (lvl[i, j], frame.lmat[i, j], l2[i, j], -ident[i, j], -frame.lmat[i, j])
                )
        assembled.append((frame, v_jets, lvg, lvl, rows))

    if a is None:
        mat = []
        rhs = []
        for _, _, _, _, rows in assembled:
            for lhs, c0, c1, c2, c3 in rows:
                order = min(lhs.order, c0.order, c1.order, c2.order, c3.order)
                ncoef = lhs.truncated(order).coeffs.size
                mat.append(
                    np.stack(
                        [
                            c0.truncated(order).coeffs[:ncoef],
                            c1.truncated(order).coeffs[:ncoef],
                            c2.truncated(order).coeffs[:ncoef],
                            c3.truncated(order).coeffs[:ncoef],
                        ],
                        axis=1,
                    )
                )
                rhs.append(-lhs.truncated(order).coeffs[:ncoef])
        design = np.concatenate(mat, axis=0)
        target = np.concatenate(rhs)
        sol, _, _, sv = np.linalg.lstsq(design, target, rcond=None)
        condition = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
        a_used = tuple(float(c) for c in sol)
    else:
        condition = None
        a_used = tuple(float(c) for c in a)

    a00, a01, a10, a11 = a_used
    worst = 0.0
    transport_worst = 0.0
    for frame, v_jets, lvg, lvl, rows in assembled:
        for lhs, c0, c1, c2, c3 in rows:
            resid = lhs + a00 * c0 + a01 * c1 + a10 * c2 + a11 * c3
            scale = max(coeff_max(lhs), coeff_max(c0), coeff_max(c1), coeff_max(c3))
            worst = max(worst, coeff_max(resid) / (1.0 + scale))
        for f, _ in _eigen_jets(frame):
            lhs_t = _directional(v_jets, f)
            f_t = f.truncated(lhs_t.order) if not isinstance(f, ComplexJet) else ComplexJet(
                f.re.truncated(lhs_t.re.order), f.im.truncated(lhs_t.im.order)
            )
            rhs_t = -a01 * (f_t * f_t) + (a11 - a00) * f_t + a10
            diff = lhs_t - rhs_t
            if isinstance(diff, ComplexJet):
                amount = max(coeff_max(diff.re), coeff_max(diff.im))
                scale = max(coeff_max(f.re), coeff_max(f.im))
            else:
                amount = coeff_max(diff)
                scale = coeff_max(f)
            transport_worst = max(transport_worst, amount / (1.0 + scale))

    out = {
        "residual": worst,
        "a": a_used,
        "transport": transport_worst,
        "classification": classify_field(a_used),
    }
    if condition is not None:
        out["condition"] = condition
    return out


def classify_field(a, tol: float = 1e-6) -> str:
    """Symmetry type from the fitted equation constants.

    ``essential`` when the quadratic coefficient is present, ``homothetic``
    when only the pure-trace metric coefficient survives, ``killing`` when
    both vanish.
    """
    a00, a01, _, _ = a
    scale = max(1.0, max(abs(c) for c in a))
    if abs(a01) > tol * scale:
        return "essential"
    if abs(a00) > tol * scale:
        return "homothetic"
    return "killing"


# ---------------------------------------------------------------------------
# connection comparison
# ---------------------------------------------------------------------------


def cproj_connection_check(frame_a: MetricFrame, frame_b: MetricFrame) -> dict:
    """Fit the difference of two connections to the trace pattern.

    Two metrics share their complex-line path structure exactly when the
    difference of their Levi-Civita connections has the form
    ``D^k_ij = d^k_i psi_j + d^k_j psi_i - J^k_i phi_j - J^k_j phi_i`` for
    one-forms ``psi, phi``.  The fit runs at the shared base point on the
    value level; its remainder is the obstruction.

    Parameters
    ----------
    frame_a, frame_b : MetricFrame
        Frames at the same point with the same complex structure.

    Returns
    -------
    dict
        ``residual`` (relative remainder), ``psi``, ``phi`` (fitted
        one-forms), and ``j_mismatch`` (value-level difference of the two
        complex structures; the fit is meaningless unless this is small).
    """
    n = frame_a.g.shape[0]
    gamma_a = christoffel(frame_a.g)
    gamma_b = christoffel(frame_b.g)
    diff = np.empty((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                diff[k, i, j] = gamma_a[k, i, j].value - gamma_b[k, i, j].value
    j_a = value_array(frame_a.jmat)
    j_b = value_array(frame_b.jmat)
    j_mismatch = float(np.max(np.abs(j_a - j_b)))

    rows = []
    rhs = []
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                cols = np.zeros(2 * n)
                # psi block
                if k == i:
                    cols[j] += 1.0
                if k == j:
                    cols[i] += 1.0
                # phi block
                cols[n + j] -= j_a[k, i]
                cols[n + i] -= j_a[k, j]
                rows.append(cols)
                rhs.append(diff[k, i, j])
    design = np.array(rows)
    target = np.array(rhs)
    sol, _, _, _ = np.linalg.lstsq(design, target, rcond=None)
    fit = design @ sol
    resid = float(np.max(np.abs(target - fit)) / (1.0 + np.max(np.abs(target))))
    return {
        "residual": resid,
        "psi": sol[:n].tolist(),
        "phi": sol[n:].tolist(),
        "j_mismatch": j_mismatch,
    }
