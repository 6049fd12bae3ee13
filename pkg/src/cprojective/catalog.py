"""Catalogued symmetry content of the metric families.

This module stores, per family case, the expected symmetry algebra of the
metric: explicit generator fields, the algebra dimension, the homothety
fields of the two-coordinate base metric for the degenerate families
(together with their homothety constants), and the point-symmetry data of
the companion path equations.  Everything here is plain data; the checks
live in :mod:`cprojective.verify` and in the test suite.

Some generator components exist in two candidate forms that differ by a
sign or a coefficient.  The catalog stores the form that passes the
residual checks in the main generator set and keeps the failing candidate
in a ``rejected`` slot so that verification runs can report both verdicts
side by side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebras import GeneratorSet, OdeSystem, VectorFieldExpr
from .families import CaseSpec, default_case, make_case
from .jets import elementary

__all__ = [
    "AlgebraEntry",
    "ScenarioEntry",
    "liouville_entries",
    "complex_entries",
    "scenario_entries",
    "algebra_entries",
    "entry_by_key",
    "model_field_set",
    "model_field_rejected",
    "ode_systems",
    "ode_algebras",
    "ode_rejected",
    "PENCIL_WEIGHTS",
]


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraEntry:
    """One non-degenerate family case with its expected symmetry algebra.

    ``rejected`` holds candidate fields that must fail the vector-field
    residual check on this case's frames (transcription variants kept for
    reporting).
    """

    key: str
    case: CaseSpec
    generators: GeneratorSet
    dimension: int
    rejected: tuple = ()
    notes: str = ""


@dataclass(frozen=True)
class ScenarioEntry:
    """One degenerate-family scenario.

    ``base_fields`` are homothety fields of the two-coordinate base metric
    (component builders over ``(s0, s1)``), ``base_constants`` their exact
    homothety constants.  ``generators`` is the expected symmetry algebra
    of the four-coordinate metric in closed form.  ``liftable`` marks which
    base fields extend to symmetries of the full metric (the family with a
    vanishing-constant restriction refuses proper homotheties).
    """

    key: str
    case: CaseSpec
    base_fields: GeneratorSet
    base_constants: tuple
    liftable: tuple
    generators: GeneratorSet
    dimension: int
    rejected: tuple = ()
    rejected_base: tuple = ()
    notes: str = ""


def _f(label, expression, core, ncoords=4):
    return VectorFieldExpr(label, expression, core, ncoords)


# ---------------------------------------------------------------------------
# two-profile (real pair) cases
# ---------------------------------------------------------------------------


def _translations(prefix):
    return (
        _f("%s.t0" % prefix, "d_s0", lambda c: (0.0, 0.0, 1.0, 0.0)),
        _f("%s.t1" % prefix, "d_s1", lambda c: (0.0, 0.0, 0.0, 1.0)),
    )


def liouville_entries() -> tuple:
    """Catalog rows for the real two-profile cases."""
    entries = []

    l1 = default_case("L1")
    g1 = _f("L1.g1", "d_x0 + d_x1 - s1 d_s0", lambda c: (1.0, 1.0, -c[3], 0.0))
    g2 = _f(
        "L1.g2",
        "x0 d_x0 + x1 d_x1 + 2 s0 d_s0 + s1 d_s1",
        lambda c: (c[0], c[1], 2.0 * c[2], c[3]),
    )
    entries.append(
        AlgebraEntry("L1", l1, GeneratorSet("L1", (g1, g2) + _translations("L1"), 4), 4)
    )

    l2 = default_case("L2")
    b = l2.params["beta"]
    g1 = _f(
        "L2i.g1",
        "d_x0 + d_x1 - (beta+2) s0 d_s0 - (2 beta+1) s1 d_s1",
        lambda c, b=b: (1.0, 1.0, -(b + 2.0) * c[2], -(2.0 * b + 1.0) * c[3]),
    )
    entries.append(
        AlgebraEntry("L2i", l2, GeneratorSet("L2i", (g1,) + _translations("L2i"), 3), 3)
    )

    l2z = make_case("L2", label="beta0", beta=0.0)
    c0, c1 = l2z.params["c0"], l2z.params["c1"]
    g1 = _f(
        "L2ii.g1",
        "d_x0 + d_x1 - 2 s0 d_s0 - s1 d_s1",
        lambda c: (1.0, 1.0, -2.0 * c[2], -c[3]),
    )

    def _l2_exp(sign):
        def core(c, c0=c0, c1=c1, sign=sign):
            return (
                elementary(c[0], "exp") * (1.0 / c0),
                elementary(c[1], "exp") * (1.0 / c1),
                sign * c[3],
                0.0,
            )

        return core

    g2 = _f(
        "L2ii.g2",
        "(1/c0) exp(x0) d_x0 + (1/c1) exp(x1) d_x1 + s1 d_s0",
        _l2_exp(1.0),
    )
    g2_minus = _f(
        "L2ii.g2-minus",
        "(1/c0) exp(x0) d_x0 + (1/c1) exp(x1) d_x1 - s1 d_s0",
        _l2_exp(-1.0),
    )
    entries.append(
        AlgebraEntry(
            "L2ii",
            l2z,
            GeneratorSet("L2ii", (g1, g2) + _translations("L2ii"), 4),
            4,
            rejected=(g2_minus,),
            notes="sign of the s1 d_s0 term in g2 carries two candidates",
        )
    )

    l3 = default_case("L3")
    g1 = _f(
        "L3.g1",
        "d_x0 + d_x1 - (3 s0 + s1) d_s0 - 3 s1 d_s1",
        lambda c: (1.0, 1.0, -(3.0 * c[2] + c[3]), -3.0 * c[3]),
    )
    entries.append(
        AlgebraEntry("L3", l3, GeneratorSet("L3", (g1,) + _translations("L3"), 3), 3)
    )

    l4 = default_case("L4")
    b = l4.params["beta"]
    g1 = _f(
        "L4.g1",
        "d_x0 + d_x1 - (3 beta s0 - s1) d_s0 - (s0 + 3 beta s1) d_s1",
        lambda c, b=b: (
            1.0,
            1.0,
            -(3.0 * b * c[2] - c[3]),
            -(c[2] + 3.0 * b * c[3]),
        ),
    )
    entries.append(
        AlgebraEntry("L4", l4, GeneratorSet("L4", (g1,) + _translations("L4"), 3), 3)
    )

    l4z = make_case("L4", label="beta0", beta=0.0)
    g1 = _f(
        "L4z.g1",
        "d_x0 + d_x1 + s1 d_s0 - s0 d_s1",
        lambda c: (1.0, 1.0, c[3], -c[2]),
    )
    entries.append(
        AlgebraEntry("L4z", l4z, GeneratorSet("L4z", (g1,) + _translations("L4z"), 3), 3)
    )

    return tuple(entries)


# ---------------------------------------------------------------------------
# one-profile (complex pair) cases, written in the real coordinates
# ---------------------------------------------------------------------------


def complex_entries() -> tuple:
    """Catalog rows for the complex-profile cases.

    The holomorphic generators are written out in the real coordinates:
    ``d_z + d_zbar`` is ``d_x0``, ``z d_z + zbar d_zbar`` is
    ``x0 d_x0 + x1 d_x1``, and ``exp(z) d_z + exp(zbar) d_zbar`` becomes
    ``exp(x0) (cos(x1) d_x0 + sin(x1) d_x1)``.
    """
    entries = []

    cc1 = default_case("C1")
    g1 = _f("C1.g1", "d_x0 - s1 d_s0", lambda c: (1.0, 0.0, -c[3], 0.0))
    g2 = _f(
        "C1.g2",
        "x0 d_x0 + x1 d_x1 + 2 s0 d_s0 + s1 d_s1",
        lambda c: (c[0], c[1], 2.0 * c[2], c[3]),
    )
    entries.append(
        AlgebraEntry("C1", cc1, GeneratorSet("C1", (g1, g2) + _translations("C1"), 4), 4)
    )

    cc2 = default_case("C2")
    b = cc2.params["beta"]
    g1 = _f(
        "C2i.g1",
        "d_x0 - (beta+2) s0 d_s0 - (2 beta+1) s1 d_s1",
        lambda c, b=b: (1.0, 0.0, -(b + 2.0) * c[2], -(2.0 * b + 1.0) * c[3]),
    )
    entries.append(
        AlgebraEntry("C2i", cc2, GeneratorSet("C2i", (g1,) + _translations("C2i"), 3), 3)
    )

    cc2z = make_case("C2", label="beta0", beta=0.0)
    g1 = _f(
        "C2ii.g1",
        "d_x0 - 2 s0 d_s0 - s1 d_s1",
        lambda c: (1.0, 0.0, -2.0 * c[2], -c[3]),
    )

    def _c2_exp(sign):
        def core(c, sign=sign):
            ex = elementary(c[0], "exp")
            return (
                ex * elementary(c[1], "cos"),
                ex * elementary(c[1], "sin"),
                sign * c[3],
                0.0,
            )

        return core

    g2 = _f(
        "C2ii.g2",
        "exp(x0) cos(x1) d_x0 + exp(x0) sin(x1) d_x1 + s1 d_s0",
        _c2_exp(1.0),
    )
    g2_minus = _f(
        "C2ii.g2-minus",
        "exp(x0) cos(x1) d_x0 + exp(x0) sin(x1) d_x1 - s1 d_s0",
        _c2_exp(-1.0),
    )
    entries.append(
        AlgebraEntry(
            "C2ii",
            cc2z,
            GeneratorSet("C2ii", (g1, g2) + _translations("C2ii"), 4),
            4,
            rejected=(g2_minus,),
            notes="sign of the s1 d_s0 term in g2 carries two candidates",
        )
    )

    cc3 = default_case("C3")
    g1 = _f(
        "C3.g1",
        "d_x0 - (3 s0 + s1) d_s0 - 3 s1 d_s1",
        lambda c: (1.0, 0.0, -(3.0 * c[2] + c[3]), -3.0 * c[3]),
    )
    entries.append(
        AlgebraEntry("C3", cc3, GeneratorSet("C3", (g1,) + _translations("C3"), 3), 3)
    )

    cc4 = default_case("C4")
    b = cc4.params["beta"]
    g1 = _f(
        "C4.g1",
        "d_x0 - (3 beta s0 - s1) d_s0 - (s0 + 3 beta s1) d_s1",
        lambda c, b=b: (
            1.0,
            0.0,
            -(3.0 * b * c[2] - c[3]),
            -(c[2] + 3.0 * b * c[3]),
        ),
    )
    g1_copy = _f(
        "C4.g1-uncoupled",
        "d_x0 - (3 s0 + s1) d_s0 - 3 s1 d_s1",
        lambda c: (1.0, 0.0, -(3.0 * c[2] + c[3]), -3.0 * c[3]),
    )
    entries.append(
        AlgebraEntry(
            "C4",
            cc4,
            GeneratorSet("C4", (g1,) + _translations("C4"), 3),
            3,
            rejected=(g1_copy,),
            notes="g1 carries two candidates: the coupled form and an "
            "uncoupled copy of the C3 row",
        )
    )

    return tuple(entries)


# ---------------------------------------------------------------------------
# degenerate scenarios
# ---------------------------------------------------------------------------

_POWER_PROFILE = {"kind": "power", "kappa": 1.0, "m1": 0.5, "m2": 2.0}
_QUAD_POS = {"kind": "quadratic", "kappa": 1.0, "m1": 4.0, "m2": 3.0}
_QUAD_NEG = {"kind": "quadratic", "kappa": 1.0, "m1": 0.0, "m2": 1.0}
_QUAD_ZERO = {"kind": "quadratic", "kappa": 1.0, "m1": 2.0, "m2": 1.0}
_LINEAR_PROFILE = {"kind": "poly", "coeffs": [1.6, 0.7]}
_SIN_FREQ, _SIN_PHASE, _SIN_AMP = 0.8, math.pi / 2.0, 1.1
_EXP_M1 = 0.7


def _sinpow_profile(lam: float) -> dict:
    return {
        "kind": "sinpow",
        "amp": _SIN_AMP,
        "freq": _SIN_FREQ,
        "phase": _SIN_PHASE,
        "expo": (lam - 2.0 * _SIN_FREQ) / _SIN_FREQ,
    }


def _dx0(prefix):
    return _f("%s.ax0" % prefix, "d_x0", lambda c: (1.0, 0.0, 0.0, 0.0))


def _dx1(prefix):
    return _f("%s.ax1" % prefix, "d_x1", lambda c: (0.0, 1.0, 0.0, 0.0))


def _shear(prefix):
    return _f(
        "%s.shear" % prefix,
        "s1 d_x1 + d_s0",
        lambda c: (0.0, c[3], 1.0, 0.0),
    )


def _base_translation(prefix):
    return _f("%s.u0" % prefix, "d_s0", lambda c: (1.0, 0.0), ncoords=2)


def _pack_ambient(comp, fcomp):
    """Ambient field (0, f, u0, u1) from surface component builders."""

    def core(c):
        u0, u1 = comp(c[2], c[3])
        return (0.0, fcomp(c[2], c[3]), u0, u1)

    return core


# -- closed forms for the quadratic base profiles ---------------------------


def _quad_parts(profile):
    kappa = profile["kappa"]
    m1, m2 = profile["m1"], profile["m2"]

    def parts(s1):
        gee = kappa * s1 * s1 + m1 * s1 + m2
        gp = 2.0 * kappa * s1 + m1
        return gee, gp

    return kappa, m1, m2, parts


def _quad_pos_fields(prefix, profile):
    """Rotation-type homothety pair and its extensions (positive branch)."""
    kappa, m1, m2, parts = _quad_parts(profile)
    disc = m1 * m1 - 4.0 * kappa * m2
    omega = math.sqrt(disc)

    def u1_comp(s0, s1):
        gee, gp = parts(s1)
        sq = elementary(gee, "sqrt")
        ang = 0.5 * omega * s0
        return gp * elementary(ang, "cos") / (sq * omega), elementary(ang, "sin") * sq

    def u1_f(s0, s1):
        gee, _ = parts(s1)
        sq = elementary(gee, "sqrt")
        ang = 0.5 * omega * s0
        return sq * (
            (2.0 / omega) * elementary(ang, "cos") + s0 * elementary(ang, "sin")
        )

    def u2_comp(s0, s1):
        gee, gp = parts(s1)
        sq = elementary(gee, "sqrt")
        ang = 0.5 * omega * s0
        return -gp * elementary(ang, "sin") / (sq * omega), elementary(ang, "cos") * sq

    def u2_f(s0, s1):
        gee, _ = parts(s1)
        sq = elementary(gee, "sqrt")
        ang = 0.5 * omega * s0
        return sq * (
            s0 * elementary(ang, "cos") - (2.0 / omega) * elementary(ang, "sin")
        )

    base = (
        _base_translation(prefix),
        _f(
            "%s.u1" % prefix,
            "G'/(sqrt(G) w) cos(w s0/2) d_s0 + sqrt(G) sin(w s0/2) d_s1",
            lambda c: u1_comp(c[0], c[1]),
            ncoords=2,
        ),
        _f(
            "%s.u2" % prefix,
            "-G'/(sqrt(G) w) sin(w s0/2) d_s0 + sqrt(G) cos(w s0/2) d_s1",
            lambda c: u2_comp(c[0], c[1]),
            ncoords=2,
        ),
    )
    lifted = (
        _f(
            "%s.v1" % prefix,
            "sqrt(G) (2/w cos(w s0/2) + s0 sin(w s0/2)) d_x1 + u1",
            _pack_ambient(u1_comp, u1_f),
        ),
        _f(
            "%s.v2" % prefix,
            "sqrt(G) (s0 cos(w s0/2) - 2/w sin(w s0/2)) d_x1 + u2",
            _pack_ambient(u2_comp, u2_f),
        ),
    )
    return base, lifted


def _quad_neg_fields(prefix, profile):
    """Boost-type homothety pair and its extensions (negative branch)."""
    kappa, m1, m2, parts = _quad_parts(profile)
    disc = m1 * m1 - 4.0 * kappa * m2
    omega = math.sqrt(-disc)

    def u_comp(sign):
        def comp(s0, s1):
            gee, gp = parts(s1)
            sq = elementary(gee, "sqrt")
            ex = elementary(sign * 0.5 * omega * s0, "exp")
            return -sign * gp * ex / (sq * omega), ex * sq

        return comp

    def u_f(sign):
        def fcomp(s0, s1):
            gee, _ = parts(s1)
            sq = elementary(gee, "sqrt")
            ex = elementary(sign * 0.5 * omega * s0, "exp")
            return (s0 - sign * 2.0 / omega) * sq * ex

        return fcomp

    def u_f_swapped(sign):
        def fcomp(s0, s1):
            gee, _ = parts(s1)
            sq = elementary(gee, "sqrt")
            ex = elementary(sign * 0.5 * omega * s0, "exp")
            return (s0 + sign * 2.0 / omega) * sq * ex

        return fcomp

    base = (
        _base_translation(prefix),
        _f(
            "%s.u1" % prefix,
            "-G'/(sqrt(G) w) exp(w s0/2) d_s0 + sqrt(G) exp(w s0/2) d_s1",
            lambda c: u_comp(1.0)(c[0], c[1]),
            ncoords=2,
        ),
        _f(
            "%s.u2" % prefix,
            "G'/(sqrt(G) w) exp(-w s0/2) d_s0 + sqrt(G) exp(-w s0/2) d_s1",
            lambda c: u_comp(-1.0)(c[0], c[1]),
            ncoords=2,
        ),
    )
    lifted = (
        _f(
            "%s.v1" % prefix,
            "(s0 - 2/w) sqrt(G) exp(w s0/2) d_x1 + u1",
            _pack_ambient(u_comp(1.0), u_f(1.0)),
        ),
        _f(
            "%s.v2" % prefix,
            "(s0 + 2/w) sqrt(G) exp(-w s0/2) d_x1 + u2",
            _pack_ambient(u_comp(-1.0), u_f(-1.0)),
        ),
    )
    rejected = (
        _f(
            "%s.v1-swapped" % prefix,
            "(s0 + 2/w) sqrt(G) exp(w s0/2) d_x1 + u1",
            _pack_ambient(u_comp(1.0), u_f_swapped(1.0)),
        ),
        _f(
            "%s.v2-swapped" % prefix,
            "(s0 - 2/w) sqrt(G) exp(-w s0/2) d_x1 + u2",
            _pack_ambient(u_comp(-1.0), u_f_swapped(-1.0)),
        ),
    )
    return base, lifted, rejected


def _quad_zero_fields(prefix, profile):
    """Parabolic-type homothety pair and its extensions (zero branch)."""
    kappa, m1, m2, parts = _quad_parts(profile)

    def u1_comp(s0, s1):
        _, gp = parts(s1)
        return -kappa * s0 * s0 + 4.0 * kappa * gp.reciprocal() ** 2, s0 * gp

    def u1_f(s0, s1):
        _, gp = parts(s1)
        return 0.5 * s0 * s0 * gp - 2.0 * gp.reciprocal()

    def u2_comp(s0, s1):
        _, gp = parts(s1)
        return -2.0 * kappa * s0 + 0.0 * s1, gp

    base = (
        _base_translation(prefix),
        _f(
            "%s.u1" % prefix,
            "(-kappa s0^2 + 4 kappa/G'^2) d_s0 + s0 G' d_s1",
            lambda c: u1_comp(c[0], c[1]),
            ncoords=2,
        ),
        _f(
            "%s.u2" % prefix,
            "-2 kappa s0 d_s0 + G' d_s1",
            lambda c: u2_comp(c[0], c[1]),
            ncoords=2,
        ),
    )
    lifted = (
        _f(
            "%s.v1" % prefix,
            "(s0^2 G'/2 - 2/G') d_x1 + u1",
            _pack_ambient(u1_comp, u1_f),
        ),
        _f(
            "%s.v2" % prefix,
            "-2 kappa s0 d_s0 + G' d_s1",
            lambda c: (0.0, 0.0) + u2_comp(c[2], c[3]),
        ),
    )
    return base, lifted


def _power_base(prefix, profile):
    m1, m2 = profile["m1"], profile["m2"]
    return (
        _base_translation(prefix),
        _f(
            "%s.u1" % prefix,
            "(m1+2) s0 d_s0 - (m1 s1 + m2) d_s1",
            lambda c, m1=m1, m2=m2: ((m1 + 2.0) * c[0], -(m1 * c[1] + m2)),
            ncoords=2,
        ),
    )


def _linear_base(prefix, profile):
    m2, m1 = profile["coeffs"]

    def trig_comp(which):
        def comp(s0, s1):
            lin = m1 * s1 + m2
            sq = elementary(lin, "sqrt")
            ang = 0.5 * m1 * s0
            sn, cs = elementary(ang, "sin"), elementary(ang, "cos")
            if which == 1:
                return sn / sq, -cs * sq
            return cs / sq, sn * sq

        return comp

    def trig_f(which):
        def fcomp(s0, s1):
            lin = m1 * s1 + m2
            sq = elementary(lin, "sqrt")
            ang = 0.5 * m1 * s0
            sn, cs = elementary(ang, "sin"), elementary(ang, "cos")
            if which == 2:
                return (m1 * s0 * sn + 2.0 * cs) * sq
            return (m1 * s0 * cs - 2.0 * sn) * sq

        return fcomp

    base = (
        _base_translation(prefix),
        _f(
            "%s.u1" % prefix,
            "sin(m1 s0/2)/sqrt(m1 s1+m2) d_s0 - cos(m1 s0/2) sqrt(m1 s1+m2) d_s1",
            lambda c: trig_comp(1)(c[0], c[1]),
            ncoords=2,
        ),
        _f(
            "%s.u2" % prefix,
            "cos(m1 s0/2)/sqrt(m1 s1+m2) d_s0 + sin(m1 s0/2) sqrt(m1 s1+m2) d_s1",
            lambda c: trig_comp(2)(c[0], c[1]),
            ncoords=2,
        ),
        _f(
            "%s.up" % prefix,
            "(m1 s1 + m2) d_s1",
            lambda c, m1=m1, m2=m2: (0.0 * c[0], m1 * c[1] + m2),
            ncoords=2,
        ),
    )

    lifted = (
        _f(
            "%s.v1" % prefix,
            "(m1 s0 sin(m1 s0/2) + 2 cos(m1 s0/2)) sqrt(m1 s1+m2) d_x1 + m1 u2",
            lambda c: (
                0.0,
                trig_f(2)(c[2], c[3]),
                m1 * trig_comp(2)(c[2], c[3])[0],
                m1 * trig_comp(2)(c[2], c[3])[1],
            ),
        ),
        _f(
            "%s.v2" % prefix,
            "(m1 s0 cos(m1 s0/2) - 2 sin(m1 s0/2)) sqrt(m1 s1+m2) d_x1 - m1 u1",
            lambda c: (
                0.0,
                trig_f(1)(c[2], c[3]),
                -m1 * trig_comp(1)(c[2], c[3])[0],
                -m1 * trig_comp(1)(c[2], c[3])[1],
            ),
        ),
    )
    return base, lifted


def _conformal_scale_field(prefix, bfac):
    """First generator of the conformally-scaled families: the extension of
    the proper homothety d_s0 (constant ``-bfac``)."""
    return _f(
        "%s.g1" % prefix,
        "d_x0 - %g x1 d_x1 + d_s0" % bfac,
        lambda c, bfac=bfac: (1.0, -bfac * c[1], 1.0, 0.0),
    )


def _conformal_scale_field_plus(prefix, bfac):
    return _f(
        "%s.g1-plus" % prefix,
        "d_x0 + %g x1 d_x1 + d_s0" % bfac,
        lambda c, bfac=bfac: (1.0, bfac * c[1], 1.0, 0.0),
    )


def _sinpow_fields(prefix, bfac):
    """Rotation-type base field and its extension for the sine-power profile."""
    k1, k2, k3 = _SIN_FREQ, _SIN_PHASE, _SIN_AMP

    def w_comp(s0, s1):
        theta = k1 * s1 + k2
        damp = elementary(-k1 * s0, "exp")
        return damp * elementary(theta, "cos"), -(damp * elementary(theta, "sin"))

    def w_f(s0, s1):
        theta = k1 * s1 + k2
        amp = k1 * k3 / ((k1 + bfac) * bfac)
        sn = elementary(theta, "sin")
        return (
            amp
            * elementary(sn, "pow", -(k1 + bfac) / k1)
            * elementary(-(k1 + bfac) * s0, "exp")
        )

    base_w = _f(
        "%s.w" % prefix,
        "exp(-k1 s0) (cos(k1 s1+k2) d_s0 - sin(k1 s1+k2) d_s1)",
        lambda c: w_comp(c[0], c[1]),
        ncoords=2,
    )
    lifted_w = _f(
        "%s.gw" % prefix,
        "k1 k3/((k1+b)b) sin(k1 s1+k2)^(-(k1+b)/k1) exp(-(k1+b)s0) d_x1 + w",
        _pack_ambient(w_comp, w_f),
    )
    return base_w, lifted_w


def _flat_conformal_fields(prefix, bfac):
    """Homothety fields of the flat conformal profile and their extensions."""
    m1 = _EXP_M1
    den = (bfac * bfac + m1 * m1) * bfac

    def phase(s0, s1):
        return 0.5 * m1 * s0 + 0.5 * bfac * s1

    def grow(s0, s1):
        return elementary(0.5 * bfac * s0 - 0.5 * m1 * s1, "exp")

    def decay(s0, s1):
        return elementary(0.5 * m1 * s1 - 0.5 * bfac * s0, "exp")

    def t_comp(which):
        def comp(s0, s1):
            w = phase(s0, s1)
            e = grow(s0, s1)
            sn, cs = elementary(w, "sin"), elementary(w, "cos")
            if which == 2:
                return e * sn, -(e * cs)
            return e * cs, e * sn

        return comp

    def t_f(which):
        def fcomp(s0, s1):
            w = phase(s0, s1)
            e = decay(s0, s1)
            sn, cs = elementary(w, "sin"), elementary(w, "cos")
            if which == 2:
                return e * (2.0 * m1 * bfac * sn - (bfac * bfac - m1 * m1) * cs) * (
                    1.0 / den
                )
            return e * (2.0 * m1 * bfac * cs - (m1 * m1 - bfac * bfac) * sn) * (
                1.0 / den
            )

        return fcomp

    def t3_unhalved(s0, s1):
        w = phase(s0, s1)
        e = grow(s0, s1)
        return e * elementary(m1 * s0 + 0.5 * bfac * s1, "cos"), e * elementary(
            w, "sin"
        )

    base = (
        _f(
            "%s.k" % prefix,
            "m1 d_s0 + %g d_s1" % bfac,
            lambda c, m1=m1, bfac=bfac: (m1 + 0.0 * c[0], bfac + 0.0 * c[1]),
            ncoords=2,
        ),
        _f(
            "%s.t2" % prefix,
            "E (sin(w) d_s0 - cos(w) d_s1), E=exp(b s0/2 - m1 s1/2)",
            lambda c: t_comp(2)(c[0], c[1]),
            ncoords=2,
        ),
        _f(
            "%s.t3" % prefix,
            "E (cos(w) d_s0 + sin(w) d_s1), E=exp(b s0/2 - m1 s1/2)",
            lambda c: t_comp(3)(c[0], c[1]),
            ncoords=2,
        ),
    )
    lifted = (
        _f(
            "%s.gk" % prefix,
            "m1 d_s0 + %g d_s1" % bfac,
            lambda c, m1=m1, bfac=bfac: (0.0, 0.0, m1 + 0.0 * c[2], bfac + 0.0 * c[3]),
        ),
        _f(
            "%s.g2" % prefix,
            "V2(s0,s1) d_x1 + t2",
            _pack_ambient(t_comp(2), t_f(2)),
        ),
        _f(
            "%s.g3" % prefix,
            "V3(s0,s1) d_x1 + t3",
            _pack_ambient(t_comp(3), t_f(3)),
        ),
    )
    rejected_base = (
        _f(
            "%s.t3-unhalved" % prefix,
            "E (cos(m1 s0 + b s1/2) d_s0 + sin(w) d_s1)",
            lambda c: t3_unhalved(c[0], c[1]),
            ncoords=2,
        ),
    )
    return base, lifted, rejected_base


def scenario_entries() -> tuple:
    """Catalog rows for the degenerate-family scenarios."""
    entries = []

    # -- first family: base metric G ds0^2 + ds1^2/G, unrestricted lifts ----
    d1 = default_case("D1")
    pre = "D1.s1"
    entries.append(
        ScenarioEntry(
            "D1.s1",
            d1,
            GeneratorSet(pre + ".base", (_base_translation(pre),)),
            (0.0,),
            (True,),
            GeneratorSet(pre, (_dx0(pre), _dx1(pre), _shear(pre)), 3),
            3,
        )
    )

    d1p = make_case("D1", label="power", G=_POWER_PROFILE)
    pre = "D1.s2"
    base = _power_base(pre, _POWER_PROFILE)
    m1, m2 = _POWER_PROFILE["m1"], _POWER_PROFILE["m2"]
    dil = _f(
        pre + ".dil",
        "2 x0 d_x0 + 2 x1 d_x1 + (m1+2) s0 d_s0 - (m1 s1+m2) d_s1",
        lambda c, m1=m1, m2=m2: (
            2.0 * c[0],
            2.0 * c[1],
            (m1 + 2.0) * c[2],
            -(m1 * c[3] + m2),
        ),
    )
    entries.append(
        ScenarioEntry(
            "D1.s2",
            d1p,
            GeneratorSet(pre + ".base", base),
            (0.0, 2.0),
            (True, True),
            GeneratorSet(pre, (_dx0(pre), _dx1(pre), _shear(pre), dil), 4),
            4,
        )
    )

    for tag, profile, builder in (
        ("D1.s3p", _QUAD_POS, _quad_pos_fields),
        ("D1.s3n", _QUAD_NEG, _quad_neg_fields),
        ("D1.s3z", _QUAD_ZERO, _quad_zero_fields),
    ):
        case = make_case("D1", label=tag.split(".")[1], G=profile)
        built = builder(tag, profile)
        base, lifted = built[0], built[1]
        rejected = built[2] if len(built) > 2 else ()
        entries.append(
            ScenarioEntry(
                tag,
                case,
                GeneratorSet(tag + ".base", base),
                (0.0, 0.0, 0.0),
                (True, True, True),
                GeneratorSet(tag, (_dx0(tag), _dx1(tag), _shear(tag)) + lifted, 5),
                5,
                rejected=rejected,
            )
        )

    # -- second family: same base metric, Killing-only lifts ----------------
    d2a = default_case("D2a")
    pre = "D2a.s1"
    entries.append(
        ScenarioEntry(
            "D2a.s1",
            d2a,
            GeneratorSet(pre + ".base", (_base_translation(pre),)),
            (0.0,),
            (True,),
            GeneratorSet(pre, (_dx0(pre), _dx1(pre), _shear(pre)), 3),
            3,
        )
    )

    d2ap = make_case("D2a", label="power", G=_POWER_PROFILE)
    pre = "D2a.s2"
    base = _power_base(pre, _POWER_PROFILE)
    entries.append(
        ScenarioEntry(
            "D2a.s2",
            d2ap,
            GeneratorSet(pre + ".base", base),
            (0.0, 2.0),
            (True, False),
            GeneratorSet(pre, (_dx0(pre), _dx1(pre), _shear(pre)), 3),
            3,
            notes="the proper homothety does not extend: this family only "
            "lifts fields with vanishing homothety constant",
        )
    )

    pre = "D2a.s3"
    d2aq = make_case("D2a", label="quad", G=_QUAD_POS)
    base, lifted = _quad_pos_fields(pre, _QUAD_POS)
    entries.append(
        ScenarioEntry(
            "D2a.s3",
            d2aq,
            GeneratorSet(pre + ".base", base),
            (0.0, 0.0, 0.0),
            (True, True, True),
            GeneratorSet(pre, (_dx0(pre), _dx1(pre), _shear(pre)) + lifted, 5),
            5,
        )
    )

    pre = "D2a.s4"
    d2al = make_case("D2a", label="linear", G=_LINEAR_PROFILE)
    base, lifted = _linear_base(pre, _LINEAR_PROFILE)
    m1 = _LINEAR_PROFILE["coeffs"][1]
    entries.append(
        ScenarioEntry(
            "D2a.s4",
            d2al,
            GeneratorSet(pre + ".base", base),
            (0.0, 0.0, 0.0, m1),
            (True, True, True, False),
            GeneratorSet(pre, (_dx0(pre), _dx1(pre), _shear(pre)) + lifted, 5),
            5,
            notes="flat base profile; the proper homothety (linear dilation) "
            "does not extend",
        )
    )

    # -- conformally scaled families ----------------------------------------
    for name in ("D2b", "D3"):
        case = default_case(name)
        bfac = case.params["beta"] + 2.0 if name == "D2b" else 3.0
        lam = -bfac
        pre = "%s.s1" % name
        entries.append(
            ScenarioEntry(
                pre,
                case,
                GeneratorSet(pre + ".base", (_base_translation(pre),)),
                (lam,),
                (True,),
                GeneratorSet(
                    pre, (_conformal_scale_field(pre, bfac), _dx1(pre)), 2
                ),
                2,
                rejected=(_conformal_scale_field_plus(pre, bfac),),
                notes="the x1 coefficient of g1 carries two sign candidates",
            )
        )

        pre = "%s.s2" % name
        case_s = make_case(name, label="sinpow", G=_sinpow_profile(lam))
        base_w, lifted_w = _sinpow_fields(pre, bfac)
        entries.append(
            ScenarioEntry(
                pre,
                case_s,
                GeneratorSet(pre + ".base", (_base_translation(pre), base_w)),
                (lam, 0.0),
                (True, True),
                GeneratorSet(
                    pre,
                    (_conformal_scale_field(pre, bfac), _dx1(pre), lifted_w),
                    3,
                ),
                3,
            )
        )

        pre = "%s.s3" % name
        case_f = make_case(name, label="flat", G={"kind": "exp", "m1": _EXP_M1})
        base, lifted, rejected_base = _flat_conformal_fields(pre, bfac)
        entries.append(
            ScenarioEntry(
                pre,
                case_f,
                GeneratorSet(
                    pre + ".base", (_base_translation(pre),) + base
                ),
                (lam, 0.0, 0.0, 0.0),
                (True, True, True, True),
                GeneratorSet(
                    pre,
                    (_conformal_scale_field(pre, bfac), _dx1(pre)) + lifted,
                    5,
                ),
                5,
                rejected_base=rejected_base,
                notes="flat base profile; all four homothety fields extend, "
                "giving five independent generators",
            )
        )

    return tuple(entries)


def algebra_entries() -> tuple:
    """All catalog rows: the non-degenerate cases, then the scenarios."""
    return liouville_entries() + complex_entries() + scenario_entries()


def entry_by_key(key: str):
    """Look up a catalog row by its key."""
    for entry in algebra_entries():
        if entry.key == key:
            return entry
    raise KeyError(key)


# ---------------------------------------------------------------------------
# projective fields of the constant-curvature model
# ---------------------------------------------------------------------------


def model_field_set() -> GeneratorSet:
    """The sixteen projective fields of the constant-curvature model.

    Coordinates are ``(x, y, s, t)``: the two real pairs of the model's
    complex coordinates.  The set is closed under the bracket and has a
    nondegenerate trace form.
    """
    fields = (
        _f(
            "model.f1",
            "(x^2-y^2) d_x + 2xy d_y + (xs-yt) d_s + (xt+ys) d_t",
            lambda c: (
                c[0] * c[0] - c[1] * c[1],
                2.0 * c[0] * c[1],
                c[0] * c[2] - c[1] * c[3],
                c[0] * c[3] + c[1] * c[2],
            ),
        ),
        _f("model.f2", "y d_x - x d_y", lambda c: (c[1], -c[0], 0.0, 0.0)),
        _f("model.f3", "x d_x + y d_y", lambda c: (c[0], c[1], 0.0, 0.0)),
        _f("model.f4", "d_x", lambda c: (1.0, 0.0, 0.0, 0.0)),
        _f(
            "model.f5",
            "-2xy d_x + (x^2-y^2) d_y - (xt+ys) d_s + (xs-yt) d_t",
            lambda c: (
                -2.0 * c[0] * c[1],
                c[0] * c[0] - c[1] * c[1],
                -(c[0] * c[3] + c[1] * c[2]),
                c[0] * c[2] - c[1] * c[3],
            ),
        ),
        _f("model.f6", "y d_s - x d_t", lambda c: (0.0, 0.0, c[1], -c[0])),
        _f("model.f7", "x d_s + y d_t", lambda c: (0.0, 0.0, c[0], c[1])),
        _f("model.f8", "d_y", lambda c: (0.0, 1.0, 0.0, 0.0)),
        _f(
            "model.f9",
            "-(xt+ys) d_x + (xs-yt) d_y - 2st d_s + (s^2-t^2) d_t",
            lambda c: (
                -(c[0] * c[3] + c[1] * c[2]),
                c[0] * c[2] - c[1] * c[3],
                -2.0 * c[2] * c[3],
                c[2] * c[2] - c[3] * c[3],
            ),
        ),
        _f("model.f10", "t d_s - s d_t", lambda c: (0.0, 0.0, c[3], -c[2])),
        _f("model.f11", "s d_s + t d_t", lambda c: (0.0, 0.0, c[2], c[3])),
        _f("model.f12", "d_s", lambda c: (0.0, 0.0, 1.0, 0.0)),
        _f(
            "model.f13",
            "(xs-yt) d_x + (xt+ys) d_y + (s^2-t^2) d_s + 2st d_t",
            lambda c: (
                c[0] * c[2] - c[1] * c[3],
                c[0] * c[3] + c[1] * c[2],
                c[2] * c[2] - c[3] * c[3],
                2.0 * c[2] * c[3],
            ),
        ),
        _f("model.f14", "t d_x - s d_y", lambda c: (c[3], -c[2], 0.0, 0.0)),
        _f("model.f15", "s d_x + t d_y", lambda c: (c[2], c[3], 0.0, 0.0)),
        _f("model.f16", "d_t", lambda c: (0.0, 0.0, 0.0, 1.0)),
    )
    return GeneratorSet("model", fields, 16)


def model_field_rejected() -> tuple:
    """Rejected transcription candidate for the first model field."""
    return (
        _f(
            "model.f1-conjugated",
            "(x^2-y^2) d_x + 2xy d_y + (xs-yt) d_s + (xt-ys) d_t",
            lambda c: (
                c[0] * c[0] - c[1] * c[1],
                2.0 * c[0] * c[1],
                c[0] * c[2] - c[1] * c[3],
                c[0] * c[3] - c[1] * c[2],
            ),
        ),
    )


# ---------------------------------------------------------------------------
# path equations and their point symmetries
# ---------------------------------------------------------------------------


def ode_systems() -> dict:
    """The catalogued second-order path equations."""

    def rhs_a(x, y, p):
        return -(elementary(-2.0 * x, "exp") * p * p * p)

    def rhs_b(x, y, p):
        return 0.5 * p - 0.5 * (elementary(-2.0 * x, "exp") * p * p * p)

    def rhs_flat(x, y, p):
        return 0.0 * p

    return {
        "surface_a": OdeSystem("surface_a", "scalar", rhs_a),
        "surface_b": OdeSystem("surface_b", "scalar", rhs_b),
        "flat": OdeSystem("flat", "scalar", rhs_flat),
        "model_pair": OdeSystem("model_pair", "planar_pair"),
    }


def ode_algebras() -> dict:
    """Expected point-symmetry algebras of the catalogued path equations."""
    two = GeneratorSet(
        "surface_a",
        (
            _f("surface_a.g1", "d_y", lambda c: (0.0, 1.0), ncoords=2),
            _f("surface_a.g2", "d_x + y d_y", lambda c: (1.0, c[1]), ncoords=2),
        ),
        2,
    )
    three = GeneratorSet(
        "surface_b",
        (
            _f("surface_b.g1", "d_y", lambda c: (0.0, 1.0), ncoords=2),
            _f("surface_b.g2", "d_x + y d_y", lambda c: (1.0, c[1]), ncoords=2),
            _f(
                "surface_b.g3",
                "y d_x + y^2/2 d_y",
                lambda c: (c[1], 0.5 * c[1] * c[1]),
                ncoords=2,
            ),
        ),
        3,
    )
    eight = GeneratorSet(
        "flat",
        (
            _f("flat.g1", "d_x", lambda c: (1.0, 0.0), ncoords=2),
            _f("flat.g2", "d_y", lambda c: (0.0, 1.0), ncoords=2),
            _f("flat.g3", "x d_x", lambda c: (c[0], 0.0), ncoords=2),
            _f("flat.g4", "x d_y", lambda c: (0.0, c[0]), ncoords=2),
            _f("flat.g5", "y d_x", lambda c: (c[1], 0.0), ncoords=2),
            _f("flat.g6", "y d_y", lambda c: (0.0, c[1]), ncoords=2),
            _f(
                "flat.g7",
                "x^2 d_x + xy d_y",
                lambda c: (c[0] * c[0], c[0] * c[1]),
                ncoords=2,
            ),
            _f(
                "flat.g8",
                "xy d_x + y^2 d_y",
                lambda c: (c[0] * c[1], c[1] * c[1]),
                ncoords=2,
            ),
        ),
        8,
    )
    return {
        "surface_a": two,
        "surface_b": three,
        "flat": eight,
        "model_pair": model_field_set(),
    }


def ode_rejected() -> dict:
    """Fields that must fail the symmetry check on the named equation."""
    return {
        "surface_a": (
            _f(
                "surface_a.extra",
                "y d_x + y^2/2 d_y",
                lambda c: (c[1], 0.5 * c[1] * c[1]),
                ncoords=2,
            ),
        ),
        "model_pair": model_field_rejected(),
    }


# ---------------------------------------------------------------------------
# pencil weights used by the closedness checks
# ---------------------------------------------------------------------------

PENCIL_WEIGHTS = ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (0.3, 1.7), (-0.6, 1.2))
