"""Scalar kernels shared by the rest of the package.

Pochhammer symbols, roots of unity, the Gauss hypergeometric series on
``[0, 1/2]`` and terminating balanced ``4F3`` sums.  Everything is plain
double precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
import numpy as np

from .exceptions import ConvergenceError, ParameterError

#: relative truncation tolerance for the 2F1 series
SERIES_TOL = 1e-15
#: hard cap on the number of 2F1 terms
SERIES_MAX_TERMS = 10_000
#: largest argument the direct 2F1 series is trusted on
V_SPLIT = 0.5

#: default comparison tolerances (atol, rtol)
ATOL = 1e-12
RTOL = 1e-10


def close(x, y, atol=ATOL, rtol=RTOL):
    """``|x - y| <= atol + rtol * max(|x|, |y|)``."""
    return abs(x - y) <= atol + rtol * max(abs(x), abs(y))


@dataclass(frozen=True)
class Params:
    """Configuration ``(m, ell, kappa)`` of the standard module.

    ``m`` is the order of the rotation subgroup of I2(m), ``ell`` labels the
    two-dimensional representation and ``kappa`` is the Dunkl parameter.
    """

    m: int
    ell: int
    kappa: float = 0.0
    _omega_powers: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 3:
            raise ParameterError(f"m must be an integer >= 3, got {self.m}")
        if int(self.ell) != self.ell or not 1 <= self.ell <= (self.m - 1) // 2:
            raise ParameterError(
                f"ell must satisfy 1 <= ell <= floor((m-1)/2) = {(self.m - 1) // 2}, "
                f"got {self.ell}"
            )
        if not math.isfinite(self.kappa):
            raise ParameterError("kappa must be finite")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "ell", int(self.ell))
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "_omega_powers", _root_table(self.m))

    @property
    def omega(self) -> complex:
        return self._omega_powers[1]

    def omega_pow(self, k: int) -> complex:
        """``omega**k`` read from the exact-index table."""
        return self._omega_powers[k % self.m]

    @property
    def lambda1(self) -> float:
        return (self.m - self.ell) / self.m

    @property
    def lambda2(self) -> float:
        return self.ell / self.m

    @property
    def delta(self) -> float:
        return 0.5 - self.ell / self.m

    @property
    def positive_regime(self) -> bool:
        """True when the form is positive-definite, ``|kappa| < ell/m``."""
        return abs(self.kappa) < self.ell / self.m

    @property
    def integrable(self) -> bool:
        return abs(self.kappa) < 0.5

    def require_integrable(self):
        if not self.integrable:
            raise ParameterError(
                f"|kappa| = {abs(self.kappa)} violates the integrability bound |kappa| < 1/2"
            )

    def with_kappa(self, kappa: float) -> "Params":
        return Params(self.m, self.ell, kappa)


def _root_table(m: int) -> tuple:
    table = []
    for j in range(m):
        # exact values on the axes keep small-m tables free of 1e-17 noise
        if (4 * j) % m == 0:
            table.append((1, 1j, -1, -1j)[(4 * j) // m])
        else:
            table.append(cmath.exp(2j * math.pi * j / m))
    return tuple(complex(w) for w in table)


def root_of_unity_powers(params: Params) -> tuple:
    """Table ``(omega**0, ..., omega**(m-1))``."""
    return params._omega_powers


def pochhammer(a, n: int):
    """Rising factorial ``a (a+1) ... (a+n-1)`` by forward product."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = 1.0
    for k in range(n):
        out *= a + k
    return out


def gauss_2f1(a, b, c, v, limit=V_SPLIT):
    """Gauss series ``2F1(a, b; c; v)`` summed directly.

    ``v`` may be a scalar or an array in ``[0, limit]``.  The default keeps
    the series on ``[0, 1/2]`` where it converges fast; larger arguments are
    normally handled by the connection formulas in :mod:`dunkl_dihedral.weight`.
    Raising ``limit`` (below 1) is meant for cross-checking those formulas.

    Raises
    ------
    ConvergenceError
        if the relative tolerance is not reached within the term cap.
    """
    if c <= 0 and float(c).is_integer():
        raise ParameterError(f"c = {c} is a nonpositive integer")
    scalar = np.ndim(v) == 0
    x = np.asarray(v, dtype=float)
    if not limit < 1:
        raise ParameterError("the series diverges at v = 1")
    if np.any(x < 0) or np.any(x > limit):
        raise ParameterError(f"gauss_2f1 is only evaluated on 0 <= v <= {limit}")
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(SERIES_MAX_TERMS):
        term = term * ((a + k) * (b + k) / ((c + k) * (k + 1))) * x
        total = total + term
        if np.all(np.abs(term) <= SERIES_TOL * np.abs(total)):
            break
    else:
        raise ConvergenceError(
            f"2F1({a}, {b}; {c}) did not converge in {SERIES_MAX_TERMS} terms",
            last_term=float(np.max(np.abs(term))),
        )
    return float(total) if scalar else total


def hypergeometric_terminating(upper, lower, max_terms=None) -> float:
    """Sum a pFq series at argument 1 that terminates.

    One upper parameter must be a nonpositive integer ``-N``; the sum runs to
    ``k = N`` exactly.  Passing ``max_terms`` overrides that stopping index
    (terms past ``N`` are exact zeros), which lets tests confirm termination.
    """
    stops = [-int(round(u)) for u in upper if float(u) <= 0 and float(u).is_integer()]
    if not stops:
        raise ParameterError("series does not terminate")
    last = min(stops) if max_terms is None else max_terms
    total = 0.0
    term = 1.0
    for k in range(last + 1):
        total += term
        if k == last:
            break
        num = 1.0
        den = float(k + 1)
        for u in upper:
            num *= u + k
        for d in lower:
            if d + k == 0:
                raise ParameterError(
                    f"denominator parameter {d} hits zero at k = {k} before termination"
                )
            den *= d + k
        term = term * num / den
    return total


def balanced_4f3(j: int, n: int, kappa: float, lam: float, variant: str) -> float:
    """Terminating balanced 4F3 at 1 used by the Q-coefficient closed forms.

    ``variant="coeff1"``: 4F3(1-j, j-n, 1-kappa, 1+kappa; 2, lam+1, -lam-n+1; 1)

    ``variant="coeff2"``: 4F3(-j, j-n, -kappa, kappa; 1, lam, -lam-n; 1)
    """
    if not 0 <= j <= n:
        raise ParameterError(f"need 0 <= j <= n, got j={j}, n={n}")
    if variant == "coeff1":
        upper = (1 - j, j - n, 1 - kappa, 1 + kappa)
        lower = (2, lam + 1, -lam - n + 1)
    elif variant == "coeff2":
        upper = (-j, j - n, -kappa, kappa)
        lower = (1, lam, -lam - n)
    else:
        raise ParameterError(f"unknown variant {variant!r}")
    return hypergeometric_terminating(upper, lower)
