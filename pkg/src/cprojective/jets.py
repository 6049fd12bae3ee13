"""Truncated multivariate Taylor arithmetic.

A jet stores the normalized Taylor coefficients ``c_alpha = d^alpha f / alpha!``
of a smooth function at a base point, for every multi-index ``alpha`` with
``|alpha| <= order``, over a small number of real variables.  All arithmetic
(ring operations, division, elementary functions, partial-derivative
extraction) is exact on the retained coefficients, so a jet of order ``N``
carries the exact partial derivatives of the represented expression up to
total order ``N``.

Coefficients live in a dense 1-d float array indexed by the graded
lexicographic multi-index table for ``(nvars, order)``.  Because the table is
graded, truncation to a lower order is a prefix slice, and binary operations
between jets of different orders silently truncate to the smaller order (a
derivative of an order-``N`` jet is only trustworthy to order ``N - 1``).

Complex-valued jets over real variables are represented as a (real, imag)
pair and support the same operations with complex derivative sequences.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "Jet",
    "ComplexJet",
    "multi_indices",
    "index_of",
    "table_size",
    "seed_variable",
    "constant_jet",
    "arith",
    "elementary",
    "extract_partial",
    "partial_derivative",
]


@lru_cache(maxsize=None)
def multi_indices(nvars: int, order: int) -> tuple[tuple[int, ...], ...]:
    """Graded-lexicographic multi-index table for ``(nvars, order)``.

    Indices are grouped by total degree (ascending); within a degree they are
    ordered lexicographically with the first variable most significant.

    Parameters
    ----------
    nvars : int
        Number of variables (1 to 4 in practice).
    order : int
        Maximum total degree retained.

    Returns
    -------
    tuple of tuple of int
        All multi-indices ``alpha`` with ``|alpha| <= order``.
    """
    if nvars < 1:
        raise ValueError("nvars must be >= 1")
    if order < 0:
        raise ValueError("order must be >= 0")

    def degree_block(deg: int, n: int):
        if n == 1:
            yield (deg,)
            return
        for first in range(deg, -1, -1):
            for rest in degree_block(deg - first, n - 1):
                yield (first,) + rest

    out: list[tuple[int, ...]] = []
    for deg in range(order + 1):
        out.extend(degree_block(deg, nvars))
    return tuple(out)


@lru_cache(maxsize=None)
def index_of(nvars: int, order: int) -> dict[tuple[int, ...], int]:
    """Position lookup for the graded-lex table of ``(nvars, order)``."""
    return {a: i for i, a in enumerate(multi_indices(nvars, order))}


@lru_cache(maxsize=None)
def table_size(nvars: int, order: int) -> int:
    """Number of multi-indices with ``|alpha| <= order`` in ``nvars`` variables."""
    return len(multi_indices(nvars, order))


@lru_cache(maxsize=None)
def _mul_table(nvars: int, order: int):
    """Index triples (I, J, K) with alpha_I + alpha_J = alpha_K, all degrees <= order."""
    idx = multi_indices(nvars, order)
    pos = index_of(nvars, order)
    degs = [sum(a) for a in idx]
    ii: list[int] = []
    jj: list[int] = []
    kk: list[int] = []
    for i, a in enumerate(idx):
        da = degs[i]
        for j, b in enumerate(idx):
            if da + degs[j] > order:
                continue
            ii.append(i)
            jj.append(j)
            kk.append(pos[tuple(x + y for x, y in zip(a, b))])
    return np.asarray(ii), np.asarray(jj), np.asarray(kk)


@lru_cache(maxsize=None)
def _partial_table(nvars: int, order: int, var: int):
    """Source positions and scale factors for d/d(var): target order is order - 1.

    For each alpha with |alpha| <= order - 1 the derivative coefficient is
    ``c'_alpha = c_{alpha + e_var} * (alpha_var + 1)``.
    """
    src_pos = index_of(nvars, order)
    tgt = multi_indices(nvars, order - 1)
    src = np.empty(len(tgt), dtype=np.intp)
    scale = np.empty(len(tgt), dtype=np.float64)
    for t, a in enumerate(tgt):
        shifted = tuple(x + (1 if k == var else 0) for k, x in enumerate(a))
        src[t] = src_pos[shifted]
        scale[t] = a[var] + 1
    return src, scale


@dataclass(frozen=True, eq=False)
class Jet:
    """Real-valued truncated Taylor expansion at a point.

    Parameters
    ----------
    nvars : int
        Number of independent variables.
    order : int
        Maximum retained total degree.
    coeffs : numpy.ndarray
        Normalized coefficients ``c_alpha`` in graded-lex order; length must
        equal ``table_size(nvars, order)``.  The array is frozen on
        construction.
    """

    nvars: int
    order: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.float64)
        if arr.shape != (table_size(self.nvars, self.order),):
            raise ValueError(
                "coefficient array has length %d, expected %d for nvars=%d order=%d"
                % (arr.size, table_size(self.nvars, self.order), self.nvars, self.order)
            )
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    # -- basic accessors ---------------------------------------------------

    @property
    def value(self) -> float:
        """Constant term (the function value at the base point)."""
        return float(self.coeffs[0])

    def coefficient(self, alpha: tuple[int, ...]) -> float:
        """Normalized coefficient ``c_alpha``; zero if ``|alpha| > order``."""
        if sum(alpha) > self.order:
            return 0.0
        return float(self.coeffs[index_of(self.nvars, self.order)[tuple(alpha)]])

    def truncated(self, order: int) -> "Jet":
        """Copy truncated to a lower (or equal) order."""
        if order > self.order:
            raise ValueError("cannot raise jet order by truncation")
        if order == self.order:
            return self
        return Jet(self.nvars, order, self.coeffs[: table_size(self.nvars, order)])

    # -- ring operations ----------------------------------------------------

    def _align(self, other: "Jet") -> tuple["Jet", "Jet"]:
        if self.nvars != other.nvars:
            raise ValueError("jets over different variable counts")
        n = min(self.order, other.order)
        return self.truncated(n), other.truncated(n)

    def _coerce(self, other) -> "Jet | None":
        if isinstance(other, Jet):
            return other
        if isinstance(other, (int, float, np.integer, np.floating)):
            return constant_jet(self.nvars, self.order, float(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        return Jet(a.nvars, a.order, a.coeffs + b.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.nvars, self.order, -self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        return Jet(a.nvars, a.order, a.coeffs - b.coeffs)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return Jet(self.nvars, self.order, self.coeffs * float(other))
        if not isinstance(other, Jet):
            return NotImplemented
        a, b = self._align(other)
        ii, jj, kk = _mul_table(a.nvars, a.order)
        prod = np.bincount(
            kk, weights=a.coeffs[ii] * b.coeffs[jj], minlength=table_size(a.nvars, a.order)
        )
        return Jet(a.nvars, a.order, prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return Jet(self.nvars, self.order, self.coeffs / float(other))
        if not isinstance(other, Jet):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.reciprocal()

    def __pow__(self, k):
        if isinstance(k, (int, np.integer)) and k >= 0:
            out = constant_jet(self.nvars, self.order, 1.0)
            base = self
            k = int(k)
            while k:
                if k & 1:
                    out = out * base
                base = base * base
                k >>= 1
            return out
        return elementary(self, "pow", float(k))

    def reciprocal(self) -> "Jet":
        """Multiplicative inverse; requires a nonzero constant term."""
        b0 = self.value
        if b0 == 0.0:
            raise ZeroDivisionError("jet with zero constant term")
        derivs = [(-1.0) ** m * math.factorial(m) / b0 ** (m + 1) for m in range(self.order + 1)]
        return _apply_series(self, derivs)


def constant_jet(nvars: int, order: int, value: float) -> Jet:
    """Jet of the constant function ``value``."""
    c = np.zeros(table_size(nvars, order))
    c[0] = value
    return Jet(nvars, order, c)


def seed_variable(nvars: int, order: int, index: int, value: float) -> Jet:
    """Jet of the coordinate function ``x_index`` based at ``x_index = value``.

    Parameters
    ----------
    nvars, order : int
        Jet space parameters.
    index : int
        Which variable this jet represents (0-based).
    value : float
        Coordinate value at the base point.

    Returns
    -------
    Jet
        Constant term ``value``, unit linear coefficient in slot ``index``.
    """
    if not 0 <= index < nvars:
        raise ValueError("variable index out of range")
    c = np.zeros(table_size(nvars, order))
    c[0] = value
    if order >= 1:
        e = tuple(1 if k == index else 0 for k in range(nvars))
        c[index_of(nvars, order)[e]] = 1.0
    return Jet(nvars, order, c)


def _apply_series(a: Jet, derivs: list[float]) -> Jet:
    """Compose a univariate analytic germ with a jet.

    ``derivs[m]`` must be the m-th derivative of the outer function at the
    constant term of ``a``.  Evaluates ``sum_m derivs[m]/m! (a - a0)^m`` by
    Horner's scheme; exact through the jet order because ``a - a0`` has no
    constant term.
    """
    n = a.order
    dw_coeffs = a.coeffs.copy()
    dw_coeffs[0] = 0.0
    dw = Jet(a.nvars, n, dw_coeffs)
    out = constant_jet(a.nvars, n, derivs[n] / math.factorial(n))
    for m in range(n - 1, -1, -1):
        out = out * dw + derivs[m] / math.factorial(m)
    return out


def _falling_power_derivs(r: float, base: float, order: int) -> list[float]:
    """Derivative sequence of w**r at w = base (base > 0 unless r is integral)."""
    out = []
    coef = 1.0
    for m in range(order + 1):
        out.append(coef * base ** (r - m))
        coef *= r - m
    return out


_REAL_SERIES = {}


def _series_exp(a0: float, order: int) -> list[float]:
    v = math.exp(a0)
    return [v] * (order + 1)


def _series_ln(a0: float, order: int) -> list[float]:
    if a0 <= 0.0:
        raise ValueError("ln requires a positive constant term")
    out = [math.log(a0)]
    for m in range(1, order + 1):
        out.append((-1.0) ** (m - 1) * math.factorial(m - 1) / a0**m)
    return out


def _series_sin(a0: float, order: int) -> list[float]:
    s, c = math.sin(a0), math.cos(a0)
    cycle = [s, c, -s, -c]
    return [cycle[m % 4] for m in range(order + 1)]


def _series_cos(a0: float, order: int) -> list[float]:
    s, c = math.sin(a0), math.cos(a0)
    cycle = [c, -s, -c, s]
    return [cycle[m % 4] for m in range(order + 1)]


_REAL_SERIES["exp"] = _series_exp
_REAL_SERIES["ln"] = _series_ln
_REAL_SERIES["sin"] = _series_sin
_REAL_SERIES["cos"] = _series_cos


def elementary(a: "Jet | ComplexJet", name: str, exponent: float | None = None):
    """Apply an elementary function to a jet.

    Parameters
    ----------
    a : Jet or ComplexJet
        Argument jet.
    name : str
        One of ``exp``, ``ln``, ``sin``, ``cos``, ``tan``, ``sqrt``, ``pow``.
    exponent : float, optional
        Required when ``name == "pow"``; the real exponent ``r`` of ``a**r``.
        Non-integer exponents need a positive (real case) or nonzero (complex
        case) constant term.

    Returns
    -------
    Jet or ComplexJet
        Same type and shape parameters as ``a``.
    """
    if isinstance(a, ComplexJet):
        return _elementary_complex(a, name, exponent)
    if not isinstance(a, Jet):
        raise TypeError("elementary expects a Jet or ComplexJet")

    if name == "tan":
        c = elementary(a, "cos")
        if abs(c.value) < 1e-12:
            raise ValueError("tan evaluated too close to a pole")
        return elementary(a, "sin") / c
    if name == "sqrt":
        return elementary(a, "pow", 0.5)
    if name == "pow":
        if exponent is None:
            raise ValueError("pow requires an exponent")
        r = float(exponent)
        if r == round(r) and r >= 0:
            return a ** int(round(r))
        a0 = a.value
        if a0 <= 0.0:
            raise ValueError("fractional power requires a positive constant term")
        return _apply_series(a, _falling_power_derivs(r, a0, a.order))
    try:
        series = _REAL_SERIES[name]
    except KeyError:
        raise ValueError("unknown elementary function %r" % name) from None
    return _apply_series(a, series(a.value, a.order))


def arith(a, b, kind: str):
    """Binary jet arithmetic dispatcher.

    Parameters
    ----------
    a, b : Jet, ComplexJet, or scalar
        Operands; at least one must be a jet.
    kind : str
        One of ``add``, ``sub``, ``mul``, ``div``.
    """
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError("unknown arithmetic kind %r" % kind)


def extract_partial(a: "Jet | ComplexJet", var: int):
    """Partial derivative of a jet with respect to variable ``var``.

    The result has order reduced by one: an order-``N`` jet determines its
    derivative's coefficients only through total degree ``N - 1``.

    Parameters
    ----------
    a : Jet or ComplexJet
        Jet of order >= 1.
    var : int
        Variable index (0-based).

    Returns
    -------
    Jet or ComplexJet
        Jet of order ``a.order - 1`` representing ``d a / d x_var``.
    """
    if isinstance(a, ComplexJet):
        return ComplexJet(extract_partial(a.re, var), extract_partial(a.im, var))
    if a.order < 1:
        raise ValueError("cannot differentiate an order-0 jet")
    if not 0 <= var < a.nvars:
        raise ValueError("variable index out of range")
    src, scale = _partial_table(a.nvars, a.order, var)
    return Jet(a.nvars, a.order - 1, a.coeffs[src] * scale)


def partial_derivative(a: Jet, alpha: tuple[int, ...]) -> float:
    """Unnormalized partial derivative ``d^alpha f`` read off a jet.

    Equals ``c_alpha * alpha!``; requires ``|alpha| <= a.order``.
    """
    if sum(alpha) > a.order:
        raise ValueError("requested derivative order exceeds jet order")
    fact = 1
    for k in alpha:
        fact *= math.factorial(k)
    return a.coefficient(alpha) * fact


# ---------------------------------------------------------------------------
# complex-valued jets over real variables
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ComplexJet:
    """Complex-valued jet over real variables, stored as a (re, im) pair."""

    re: Jet
    im: Jet

    def __post_init__(self):
        if self.re.nvars != self.im.nvars:
            raise ValueError("mismatched variable counts")
        if self.re.order != self.im.order:
            n = min(self.re.order, self.im.order)
            object.__setattr__(self, "re", self.re.truncated(n))
            object.__setattr__(self, "im", self.im.truncated(n))

    @property
    def nvars(self) -> int:
        return self.re.nvars

    @property
    def order(self) -> int:
        return self.re.order

    @property
    def value(self) -> complex:
        return complex(self.re.value, self.im.value)

    def conj(self) -> "ComplexJet":
        return ComplexJet(self.re, -self.im)

    def truncated(self, order: int) -> "ComplexJet":
        """Copy truncated to a lower (or equal) order."""
        return ComplexJet(self.re.truncated(order), self.im.truncated(order))

    def _coerce(self, other) -> "ComplexJet | None":
        if isinstance(other, ComplexJet):
            return other
        if isinstance(other, Jet):
            return ComplexJet(other, constant_jet(other.nvars, other.order, 0.0))
        if isinstance(other, (int, float, complex, np.integer, np.floating, np.complexfloating)):
            z = complex(other)
            return ComplexJet(
                constant_jet(self.nvars, self.order, z.real),
                constant_jet(self.nvars, self.order, z.imag),
            )
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexJet(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexJet(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexJet(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexJet(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "ComplexJet":
        mag2 = self.re * self.re + self.im * self.im
        if mag2.value == 0.0:
            raise ZeroDivisionError("complex jet with zero constant term")
        inv = mag2.reciprocal()
        return ComplexJet(self.re * inv, -(self.im * inv))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.reciprocal()

    def __pow__(self, k):
        if isinstance(k, (int, np.integer)) and k >= 0:
            one = constant_jet(self.nvars, self.order, 1.0)
            zero = constant_jet(self.nvars, self.order, 0.0)
            out = ComplexJet(one, zero)
            base = self
            k = int(k)
            while k:
                if k & 1:
                    out = out * base
                base = base * base
                k >>= 1
            return out
        return _elementary_complex(self, "pow", float(k))


def complex_seed(nvars: int, order: int, re_index: int, im_index: int, value: complex) -> ComplexJet:
    """Jet of ``x_re + i x_im`` (a complex coordinate split into real variables)."""
    z = complex(value)
    return ComplexJet(
        seed_variable(nvars, order, re_index, z.real),
        seed_variable(nvars, order, im_index, z.imag),
    )


def _apply_series_c(a: ComplexJet, derivs: list[complex]) -> ComplexJet:
    """Complex Horner composition; mirrors :func:`_apply_series`."""
    n = a.order
    re_c = a.re.coeffs.copy()
    im_c = a.im.coeffs.copy()
    re_c[0] = 0.0
    im_c[0] = 0.0
    dw = ComplexJet(Jet(a.nvars, n, re_c), Jet(a.nvars, n, im_c))
    top = derivs[n] / math.factorial(n)
    out = ComplexJet(
        constant_jet(a.nvars, n, top.real), constant_jet(a.nvars, n, top.imag)
    )
    for m in range(n - 1, -1, -1):
        out = out * dw + derivs[m] / math.factorial(m)
    return out


def _elementary_complex(a: ComplexJet, name: str, exponent: float | None) -> ComplexJet:
    w0 = a.value
    n = a.order
    if name == "exp":
        v = cmath.exp(w0)
        return _apply_series_c(a, [v] * (n + 1))
    if name == "ln":
        if w0 == 0:
            raise ValueError("ln of a complex jet with zero constant term")
        derivs = [cmath.log(w0)]
        for m in range(1, n + 1):
            derivs.append((-1.0) ** (m - 1) * math.factorial(m - 1) / w0**m)
        return _apply_series_c(a, derivs)
    if name in ("sin", "cos"):
        s, c = cmath.sin(w0), cmath.cos(w0)
        if name == "sin":
            cycle = [s, c, -s, -c]
        else:
            cycle = [c, -s, -c, s]
        return _apply_series_c(a, [cycle[m % 4] for m in range(n + 1)])
    if name == "tan":
        cj = _elementary_complex(a, "cos", None)
        if abs(cj.value) < 1e-12:
            raise ValueError("tan evaluated too close to a pole")
        return _elementary_complex(a, "sin", None) / cj
    if name == "sqrt":
        return _elementary_complex(a, "pow", 0.5)
    if name == "pow":
        if exponent is None:
            raise ValueError("pow requires an exponent")
        r = float(exponent)
        if r == round(r) and r >= 0:
            return a ** int(round(r))
        if w0 == 0:
            raise ValueError("fractional power of a complex jet with zero constant term")
        derivs = []
        coef = 1.0 + 0.0j
        for m in range(n + 1):
            derivs.append(coef * w0 ** complex(r - m))
            coef *= r - m
        return _apply_series_c(a, derivs)
    raise ValueError("unknown elementary function %r" % name)
