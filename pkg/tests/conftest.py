"""Shared test helpers: random composite expressions and a high-precision
finite-difference derivative oracle.

The oracle evaluates expressions with 50-digit mpmath arithmetic, so central
differences at step 1e-5 stay reliable for derivative orders 3 and 4 where
float64 stencils lose all significant digits.
"""

import itertools
import math

import mpmath
import numpy as np

from cprojective.jets import elementary, multi_indices, seed_variable

mpmath.mp.dps = 50

FD_STEP = mpmath.mpf("1e-5")


class _JetLib:
    @staticmethod
    def exp(a):
        return elementary(a, "exp")

    @staticmethod
    def ln(a):
        return elementary(a, "ln")

    @staticmethod
    def sin(a):
        return elementary(a, "sin")

    @staticmethod
    def cos(a):
        return elementary(a, "cos")

    @staticmethod
    def tan(a):
        return elementary(a, "tan")

    @staticmethod
    def sqrt(a):
        return elementary(a, "sqrt")

    @staticmethod
    def pow(a, r):
        return elementary(a, "pow", r)


class _MpLib:
    exp = staticmethod(mpmath.exp)
    ln = staticmethod(mpmath.log)
    sin = staticmethod(mpmath.sin)
    cos = staticmethod(mpmath.cos)
    tan = staticmethod(mpmath.tan)
    sqrt = staticmethod(mpmath.sqrt)

    @staticmethod
    def pow(a, r):
        return mpmath.power(a, mpmath.mpf(r))


JET_LIB = _JetLib()
MP_LIB = _MpLib()

# Each op builds one new slot from earlier slots.  Guarded ops keep every
# argument inside the domain of the outer function for any real input.
_UNARY_OPS = [
    ("exp_s", lambda lib, a: lib.exp(0.5 * a)),
    ("sin", lambda lib, a: lib.sin(a)),
    ("cos", lambda lib, a: lib.cos(a)),
    ("tan_b", lambda lib, a: lib.tan(0.3 * lib.sin(a))),
    ("ln_pos", lambda lib, a: lib.ln(a * a + 0.5)),
    ("sqrt_pos", lambda lib, a: lib.sqrt(a * a + 0.5)),
    ("pow_m15", lambda lib, a: lib.pow(a * a + 0.5, -1.5)),
    ("pow_p25", lambda lib, a: lib.pow(a * a + 0.5, 2.5)),
    ("square", lambda lib, a: a * a),
]
_BINARY_OPS = [
    ("add", lambda lib, a, b: a + b),
    ("sub", lambda lib, a, b: a - b),
    ("mul", lambda lib, a, b: a * b),
    ("div_g", lambda lib, a, b: a / (b * b + 0.5)),
]


class RandomProgram:
    """Straight-line composite expression over ``nvars`` real variables."""

    def __init__(self, rng: np.random.Generator, nvars: int, nsteps: int):
        self.nvars = nvars
        self.steps = []
        nslots = nvars
        for _ in range(nsteps):
            if rng.random() < 0.55:
                name, fn = _BINARY_OPS[rng.integers(len(_BINARY_OPS))]
                args = (int(rng.integers(nslots)), int(rng.integers(nslots)))
            else:
                name, fn = _UNARY_OPS[rng.integers(len(_UNARY_OPS))]
                args = (int(rng.integers(nslots)),)
            self.steps.append((name, fn, args))
            nslots += 1

    def run(self, lib, variables):
        slots = list(variables)
        for _name, fn, args in self.steps:
            slots.append(fn(lib, *(slots[k] for k in args)))
        return slots[-1]

    def jet_at(self, point, order):
        seeds = [seed_variable(self.nvars, order, i, float(point[i])) for i in range(self.nvars)]
        return self.run(JET_LIB, seeds)

    def mp_at(self, point):
        # Keep mpf inputs exact: a float64 round trip would wipe out the
        # FD offsets relative to h^3 and h^4 denominators.
        vals = [p if isinstance(p, mpmath.mpf) else mpmath.mpf(float(p)) for p in point]
        return self.run(MP_LIB, vals)


def fd_partial(program: RandomProgram, point, alpha) -> float:
    """Central finite-difference partial derivative d^alpha f at ``point``.

    Tensor product of one-dimensional central stencils, one per variable,
    evaluated in 50-digit arithmetic with step ``FD_STEP``.
    """
    axes = []
    for k in alpha:
        stencil = [((-1) ** j * math.comb(k, j), mpmath.mpf(k) / 2 - j) for j in range(k + 1)]
        axes.append(stencil)
    total = mpmath.mpf(0)
    base = [mpmath.mpf(float(p)) for p in point]
    for combo in itertools.product(*axes):
        weight = mpmath.mpf(1)
        shifted = list(base)
        for var, (w, offset) in enumerate(combo):
            weight *= w
            shifted[var] = shifted[var] + offset * FD_STEP
        total += weight * program.mp_at(shifted)
    return float(total / FD_STEP ** sum(alpha))


def jet_partial(jet, alpha) -> float:
    """Unnormalized partial derivative read off a jet coefficient."""
    fact = 1
    for k in alpha:
        fact *= math.factorial(k)
    return jet.coefficient(tuple(alpha)) * fact


def sample_alphas(rng: np.random.Generator, nvars: int, order: int, count: int):
    """Deterministic selection of derivative multi-indices, covering each
    total degree from 1 to ``order`` at least once."""
    table = [a for a in multi_indices(nvars, order) if sum(a) >= 1]
    by_degree = {}
    for a in table:
        by_degree.setdefault(sum(a), []).append(a)
    picks = []
    for deg in range(1, order + 1):
        opts = by_degree[deg]
        picks.append(opts[rng.integers(len(opts))])
    while len(picks) < count:
        picks.append(table[rng.integers(len(table))])
    return picks[:count]
