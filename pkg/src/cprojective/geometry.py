"""Pointwise tensor calculus on jet-valued fields.

Tensors at a point are numpy object arrays whose entries are jets; index
loops are explicit (dimension is 2 or 4 throughout).  Conventions, fixed once
and used by every caller:

* Christoffel symbols ``Gamma^k_ij = 1/2 g^{kl} (d_i g_lj + d_j g_il - d_l g_ij)``.
* Curvature ``R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik
  + Gamma^l_ia Gamma^a_jk - Gamma^l_ja Gamma^a_ik``; lowered form
  ``R_mkij = g_ml R^l_kij``.  The round unit 2-sphere then has
  ``R_0101 / det g = +1``.
* Exterior derivative of a 2-form ``(dw)_ijk = d_i w_jk + d_j w_ki + d_k w_ij``.
* Lie derivatives ``(L_v g)_ij = v^a d_a g_ij + g_aj d_i v^a + g_ia d_j v^a``
  and ``(L_v N)^i_j = v^a d_a N^i_j - N^a_j d_a v^i + N^i_a d_j v^a``.
* Relative residuals scale the largest offending jet coefficient by
  ``1 + max |reference coefficient|``.

Differentiating a jet lowers its order by one, so a metric sampled at order
``N`` yields Christoffel symbols at order ``N - 1`` and curvature at order
``N - 2``; mixed-order arithmetic truncates automatically.
"""

from __future__ import annotations

import numpy as np

from .jets import ComplexJet, Jet, constant_jet, extract_partial

__all__ = [
    "jet_matrix_inverse",
    "jet_det",
    "jet_matmul",
    "jet_trace",
    "value_array",
    "coeff_max",
    "relative_residual",
    "christoffel",
    "riemann_up",
    "riemann_down",
    "ricci",
    "scalar_curvature",
    "gauss_curvature_2d",
    "holomorphic_sectional_curvature",
    "exterior_derivative_2form",
    "covariant_derivative_oneform",
    "covariant_derivative_02",
    "covariant_derivative_11",
    "lie_derivative_scalar",
    "lie_derivative_metric",
    "lie_derivative_endomorphism",
    "kahler_residuals",
]


def _zero_like(a):
    if isinstance(a, ComplexJet):
        z = constant_jet(a.nvars, a.order, 0.0)
        return ComplexJet(z, z)
    return constant_jet(a.nvars, a.order, 0.0)


def _one_like(a):
    if isinstance(a, ComplexJet):
        return ComplexJet(
            constant_jet(a.nvars, a.order, 1.0), constant_jet(a.nvars, a.order, 0.0)
        )
    return constant_jet(a.nvars, a.order, 1.0)


def jet_matrix_inverse(m):
    """Invert a square jet matrix by Gauss-Jordan elimination.

    Pivots on the largest constant term in each column, which is enough for
    the well-conditioned frames this engine samples (sampler margins keep
    determinants away from zero).

    Parameters
    ----------
    m : numpy.ndarray
        Square object array of jets.

    Returns
    -------
    numpy.ndarray
        Object array with ``m @ out = Id`` exactly on retained coefficients.
    """
    n = m.shape[0]
    a = np.array(m, dtype=object)
    inv = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            inv[i, j] = _one_like(a[0, 0]) if i == j else _zero_like(a[0, 0])
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r, col].value))
        if abs(a[piv, col].value) < 1e-13:
            raise ZeroDivisionError("jet matrix is singular at the base point")
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            inv[[col, piv]] = inv[[piv, col]]
        scale = a[col, col].reciprocal()
        for j in range(n):
            a[col, j] = a[col, j] * scale
            inv[col, j] = inv[col, j] * scale
        for r in range(n):
            if r == col:
                continue
            f = a[r, col]
            if isinstance(f, Jet) and not np.any(f.coeffs):
                continue
            for j in range(n):
                a[r, j] = a[r, j] - f * a[col, j]
                inv[r, j] = inv[r, j] - f * inv[col, j]
    return inv


def jet_det(m):
    """Determinant of a square jet matrix via fraction-free expansion.

    Uses cofactor expansion; fine for the 2x2 and 4x4 matrices this engine
    handles.
    """
    n = m.shape[0]
    if n == 1:
        return m[0, 0]
    if n == 2:
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    total = None
    for j in range(n):
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        term = m[0, j] * jet_det(minor)
        if j % 2 == 1:
            term = -term
        total = term if total is None else total + term
    return total


def jet_matmul(a, b):
    """Matrix product of two square jet matrices."""
    n = a.shape[0]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            acc = a[i, 0] * b[0, j]
            for k in range(1, n):
                acc = acc + a[i, k] * b[k, j]
            out[i, j] = acc
    return out


def jet_trace(m):
    """Trace of a square jet matrix."""
    acc = m[0, 0]
    for k in range(1, m.shape[0]):
        acc = acc + m[k, k]
    return acc


def value_array(t):
    """Constant terms of a jet array, as a float array of the same shape."""
    flat = np.asarray(t, dtype=object).reshape(-1)
    vals = [entry.value for entry in flat]
    return np.array(vals).reshape(np.shape(t))


def coeff_max(t) -> float:
    """Largest absolute jet coefficient appearing anywhere in ``t``."""
    flat = np.asarray(t, dtype=object).reshape(-1)
    worst = 0.0
    for entry in flat:
        if isinstance(entry, ComplexJet):
            worst = max(
                worst,
                float(np.max(np.abs(entry.re.coeffs))),
                float(np.max(np.abs(entry.im.coeffs))),
            )
        elif isinstance(entry, Jet):
            worst = max(worst, float(np.max(np.abs(entry.coeffs))))
        else:
            worst = max(worst, abs(float(entry)))
    return worst


def relative_residual(diff, reference) -> float:
    """Scaled residual ``max|diff coefficients| / (1 + max|reference coefficients|)``.

    Both arguments may be single jets or object arrays of jets.  All retained
    coefficients participate, so a residual of zero certifies the identity
    together with its partial derivatives up to the working order.
    """
    return coeff_max(diff) / (1.0 + coeff_max(reference))


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------


def christoffel(g, ginv=None):
    """Levi-Civita connection coefficients ``Gamma[k][i][j] = Gamma^k_ij``.

    Parameters
    ----------
    g : numpy.ndarray
        Symmetric (0,2) jet matrix.
    ginv : numpy.ndarray, optional
        Its inverse; computed if missing.
    """
    n = g.shape[0]
    if ginv is None:
        ginv = jet_matrix_inverse(g)
    dg = np.empty((n, n, n), dtype=object)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                dg[k, i, j] = extract_partial(g[i, j], k)
    gamma = np.empty((n, n, n), dtype=object)
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                acc = None
                for l in range(n):
                    term = ginv[k, l] * (dg[i, l, j] + dg[j, i, l] - dg[l, i, j])
                    acc = term if acc is None else acc + term
                gamma[k, i, j] = 0.5 * acc
                gamma[k, j, i] = gamma[k, i, j]
    return gamma


def riemann_up(gamma):
    """Curvature ``R[l][k][i][j] = R^l_kij`` of a connection array."""
    n = gamma.shape[0]
    dgamma = np.empty((n, n, n, n), dtype=object)
    for a in range(n):
        for l in range(n):
            for i in range(n):
                for j in range(n):
                    dgamma[a, l, i, j] = extract_partial(gamma[l, i, j], a)
    riem = np.empty((n, n, n, n), dtype=object)
    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    acc = dgamma[i, l, j, k] - dgamma[j, l, i, k]
                    for a in range(n):
                        acc = acc + gamma[l, i, a] * gamma[a, j, k]
                        acc = acc - gamma[l, j, a] * gamma[a, i, k]
                    riem[l, k, i, j] = acc
    return riem


def riemann_down(g, riem_up):
    """Lowered curvature ``R[m][k][i][j] = g_ml R^l_kij``."""
    n = g.shape[0]
    out = np.empty((n, n, n, n), dtype=object)
    for m in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    acc = g[m, 0] * riem_up[0, k, i, j]
                    for l in range(1, n):
                        acc = acc + g[m, l] * riem_up[l, k, i, j]
                    out[m, k, i, j] = acc
    return out


def ricci(riem_up):
    """Ricci tensor ``Ric_kj = R^i_kij``."""
    n = riem_up.shape[0]
    out = np.empty((n, n), dtype=object)
    for k in range(n):
        for j in range(n):
            acc = riem_up[0, k, 0, j]
            for i in range(1, n):
                acc = acc + riem_up[i, k, i, j]
            out[k, j] = acc
    return out


def scalar_curvature(ginv, ric):
    """Scalar curvature ``g^{kj} Ric_kj``."""
    n = ginv.shape[0]
    acc = None
    for k in range(n):
        for j in range(n):
            term = ginv[k, j] * ric[k, j]
            acc = term if acc is None else acc + term
    return acc


def gauss_curvature_2d(g):
    """Gauss curvature ``R_0101 / det g`` of a 2-dimensional metric."""
    gamma = christoffel(g)
    rdown = riemann_down(g, riemann_up(gamma))
    return rdown[0, 1, 0, 1] / jet_det(g).truncated(rdown[0, 1, 0, 1].order)


def holomorphic_sectional_curvature(g, jmat, rdown, v):
    """Sectional curvature of the complex line spanned by ``v`` and ``J v``.

    ``K = R(v, Jv, v, Jv) / g(v, v)^2`` where ``R`` is the lowered curvature
    and ``v`` a (constant or jet-valued) tangent vector.  The local complex
    projective plane normalization returns the constant +4.

    Parameters
    ----------
    g : numpy.ndarray
        Metric jet matrix.
    jmat : numpy.ndarray
        Complex structure as the matrix ``J[i][j] = J^i_j``.
    rdown : numpy.ndarray
        Lowered curvature from :func:`riemann_down`.
    v : sequence
        Tangent vector components (floats or jets).

    Returns
    -------
    Jet
        The sectional curvature as a jet (constancy can be probed through
        its derivative coefficients).
    """
    n = g.shape[0]
    proto = g[0, 0]
    vv = [
        entry if isinstance(entry, (Jet, ComplexJet)) else constant_jet(proto.nvars, proto.order, float(entry))
        for entry in v
    ]
    jv = []
    for i in range(n):
        acc = jmat[i, 0] * vv[0]
        for a in range(1, n):
            acc = acc + jmat[i, a] * vv[a]
        jv.append(acc)
    num = None
    for m in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    term = rdown[m, k, i, j] * vv[m] * jv[k] * vv[i] * jv[j]
                    num = term if num is None else num + term
    norm = None
    for i in range(n):
        for j in range(n):
            term = g[i, j] * vv[i] * vv[j]
            norm = term if norm is None else norm + term
    norm2 = norm * norm
    return num / norm2.truncated(num.order)


# ---------------------------------------------------------------------------
# derivatives of tensor fields
# ---------------------------------------------------------------------------


def exterior_derivative_2form(w):
    """Components ``(dw)[i][j][k]`` of the exterior derivative of a 2-form."""
    n = w.shape[0]
    out = np.empty((n, n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                out[i, j, k] = (
                    extract_partial(w[j, k], i)
                    + extract_partial(w[k, i], j)
                    + extract_partial(w[i, j], k)
                )
    return out


def covariant_derivative_oneform(w, gamma):
    """``D[k][i] = nabla_k w_i = d_k w_i - Gamma^a_ki w_a``."""
    n = len(w)
    out = np.empty((n, n), dtype=object)
    for k in range(n):
        for i in range(n):
            acc = extract_partial(w[i], k)
            for a in range(n):
                acc = acc - gamma[a, k, i] * w[a]
            out[k, i] = acc
    return out


def covariant_derivative_02(t, gamma):
    """``D[k][i][j] = nabla_k T_ij`` for a (0,2) tensor."""
    n = t.shape[0]
    out = np.empty((n, n, n), dtype=object)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                acc = extract_partial(t[i, j], k)
                for a in range(n):
                    acc = acc - gamma[a, k, i] * t[a, j]
                    acc = acc - gamma[a, k, j] * t[i, a]
                out[k, i, j] = acc
    return out


def covariant_derivative_11(t, gamma):
    """``D[k][i][j] = nabla_k T^i_j`` for a (1,1) tensor."""
    n = t.shape[0]
    out = np.empty((n, n, n), dtype=object)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                acc = extract_partial(t[i, j], k)
                for a in range(n):
                    acc = acc + gamma[i, k, a] * t[a, j]
                    acc = acc - gamma[a, k, j] * t[i, a]
                out[k, i, j] = acc
    return out


def lie_derivative_scalar(v, f):
    """``L_v f = v^a d_a f``."""
    acc = None
    for a in range(len(v)):
        term = v[a] * extract_partial(f, a)
        acc = term if acc is None else acc + term
    return acc


def lie_derivative_metric(v, g):
    """``(L_v g)_ij = v^a d_a g_ij + g_aj d_i v^a + g_ia d_j v^a``."""
    n = g.shape[0]
    dv = np.empty((n, n), dtype=object)
    for i in range(n):
        for a in range(n):
            dv[i, a] = extract_partial(v[a], i)
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(i, n):
            acc = None
            for a in range(n):
                term = v[a] * extract_partial(g[i, j], a)
                acc = term if acc is None else acc + term
                acc = acc + g[a, j] * dv[i, a] + g[i, a] * dv[j, a]
            out[i, j] = acc
            out[j, i] = acc
    return out


def lie_derivative_endomorphism(v, t):
    """``(L_v T)^i_j = v^a d_a T^i_j - T^a_j d_a v^i + T^i_a d_j v^a``."""
    n = t.shape[0]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            acc = None
            for a in range(n):
                term = v[a] * extract_partial(t[i, j], a)
                acc = term if acc is None else acc + term
                acc = acc - t[a, j] * extract_partial(v[i], a)
                acc = acc + t[i, a] * extract_partial(v[a], j)
            out[i, j] = acc
    return out


# ---------------------------------------------------------------------------
# structure compatibility
# ---------------------------------------------------------------------------


def kahler_residuals(g, omega, jmat, gamma=None):
    """Residuals of the compatibility identities of a Kahler frame.

    Parameters
    ----------
    g, omega, jmat : numpy.ndarray
        Metric, fundamental 2-form, and complex structure (``J^i_j``) at a
        point, as jet matrices.
    gamma : numpy.ndarray, optional
        Christoffel array; computed from ``g`` if missing.

    Returns
    -------
    dict
        Relative residuals keyed by identity name: metric symmetry,
        2-form antisymmetry, ``J^2 + Id``, ``g(J.,J.) - g``, the pairing
        ``omega_ij - J^a_i g_aj``, closedness ``d omega``, and parallelism
        ``nabla J``.
    """
    n = g.shape[0]
    if gamma is None:
        gamma = christoffel(g)
    out = {}

    sym = np.empty((n, n), dtype=object)
    antisym = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            sym[i, j] = g[i, j] - g[j, i]
            antisym[i, j] = omega[i, j] + omega[j, i]
    out["metric_symmetric"] = relative_residual(sym, g)
    out["form_antisymmetric"] = relative_residual(antisym, omega)

    j2 = jet_matmul(jmat, jmat)
    for i in range(n):
        j2[i, i] = j2[i, i] + 1.0
    out["j_squared"] = relative_residual(j2, jmat)

    # g(JX, JY) = g(X, Y)  <=>  J^a_i g_ab J^b_j = g_ij
    herm = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            acc = None
            for a in range(n):
                for b in range(n):
                    term = jmat[a, i] * g[a, b] * jmat[b, j]
                    acc = term if acc is None else acc + term
            herm[i, j] = acc - g[i, j]
    out["j_orthogonal"] = relative_residual(herm, g)

    pair = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            acc = None
            for a in range(n):
                term = jmat[a, i] * g[a, j]
                acc = term if acc is None else acc + term
            pair[i, j] = omega[i, j] - acc
    out["form_pairing"] = relative_residual(pair, omega)

    out["form_closed"] = relative_residual(exterior_derivative_2form(omega), omega)
    out["j_parallel"] = relative_residual(covariant_derivative_11(jmat, gamma), jmat)
    return out
