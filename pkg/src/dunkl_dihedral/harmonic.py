"""Harmonic basis of the standard module.

Family 1 starts from ``z^n t`` and family 2 from ``z^n tbar``.  Past the
trivial range every basis element is ``z^r P_k`` where ``P_k`` is assembled
from the coupled ``Q`` polynomials in ``w = z^m``.  At the exceptional
degrees ``p`` and ``sigma0 p`` are not orthogonal; the sum/difference pair
(or ``f_n = p + (m kappa / n) sigma0 p``) is used instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .exceptions import ParameterError
from .polyalg import ScalarPoly, VectorPoly, sigma0
from .scalars import Params, balanced_4f3, pochhammer

COMBOS = (None, "sum", "diff", "f")


@dataclass(frozen=True)
class HarmonicLabel:
    """Which basis polynomial: ``p_n`` of a family, its mirror, or a combination.

    ``combo`` is ``None`` for ``p_n`` itself (or ``sigma0 p_n`` when
    ``mirrored``), ``"sum"``/``"diff"`` for ``p_n +- sigma0 p_n`` and ``"f"``
    for ``f_n``.  Degree 0 uses family 1: ``t`` and its mirror ``tbar``.
    """

    family: int
    n: int
    mirrored: bool = False
    combo: Optional[str] = None

    def __post_init__(self):
        if self.family not in (1, 2):
            raise ParameterError(f"family must be 1 or 2, got {self.family}")
        if self.n < 0:
            raise ParameterError("degree must be nonnegative")
        if self.combo not in COMBOS:
            raise ParameterError(f"unknown combination {self.combo!r}")
        if self.combo is not None and self.mirrored:
            raise ParameterError("combinations are not mirrored")

    @property
    def name(self) -> str:
        base = f"p{self.family}[{self.n}]"
        if self.combo == "sum":
            return f"{base}+s0{base}"
        if self.combo == "diff":
            return f"{base}-s0{base}"
        if self.combo == "f":
            return f"f{self.family}[{self.n}]"
        return f"s0{base}" if self.mirrored else base


def family_lambda(family: int, params: Params) -> float:
    return params.lambda1 if family == 1 else params.lambda2


def family_edge(family: int, params: Params) -> int:
    """Top of the trivial range: ``m - ell`` for family 1, ``ell`` for family 2."""
    return params.m - params.ell if family == 1 else params.ell


def classify(family: int, n: int, params: Params):
    """``(k, r)`` with ``p_n = z^r P_k``; ``k = -1`` marks the trivial range ``z^n``."""
    e = family_edge(family, params)
    if n <= e:
        return -1, n
    k, r = divmod(n - e - 1, params.m)
    return k, r


def is_exceptional(family: int, n: int, params: Params) -> bool:
    """Degrees ``n = m(k + 1 + lambda_j)``, ``k >= -1``, where ``p`` and ``sigma0 p`` couple."""
    e = family_edge(family, params)
    return n >= e and (n - e) % params.m == 0


def exceptional_k(family: int, n: int, params: Params) -> int:
    if n < 1 or not is_exceptional(family, n, params):
        raise ParameterError(f"n = {n} is not an exceptional degree of family {family}")
    return (n - family_edge(family, params)) // params.m - 1


# --------------------------------------------------------------------------
# Q polynomials
# --------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _q_coeffs(n: int, kappa: float, lam: float) -> tuple:
    """Coefficient lists ``(a, b)`` of ``Q^(1)_n, Q^(2)_n`` on ``w^(n-j) wbar^j``."""
    if n == 0:
        return (1.0,), (kappa / lam,)
    a, b = _q_coeffs(n - 1, kappa, lam)
    c = kappa / (lam + n)
    # the coupled term is evaluated at swapped arguments (wbar, w)
    a_new = [(a[j] if j < n else 0.0) + (c * b[n - j] if j >= 1 else 0.0) for j in range(n + 1)]
    b_new = [(b[j] if j < n else 0.0) + (c * a[n - j] if j >= 1 else 0.0) for j in range(n + 1)]
    return tuple(a_new), tuple(b_new)


def q_poly(kind: int, n: int, kappa: float, lam: float) -> ScalarPoly:
    """``Q^(kind)_n(kappa, lam; w, wbar)`` from the coupled recurrence.

    The result is a :class:`ScalarPoly` whose ``(a, b)`` exponents refer to
    ``w`` and ``wbar``.
    """
    if lam <= 0:
        raise ParameterError("lambda must be positive")
    coeffs = _q_coeffs(n, float(kappa), float(lam))[kind - 1]
    return ScalarPoly({(n - j, j): c for j, c in enumerate(coeffs)})


def q_coeff_closed(kind: int, n: int, j: int, kappa: float, lam: float) -> float:
    """Coefficient of ``w^(n-j) wbar^j`` in ``Q^(kind)_n`` from the 4F3 closed form."""
    if not 0 <= j <= n:
        raise ParameterError(f"need 0 <= j <= n, got j={j}, n={n}")
    if kind == 1:
        if j == 0:
            return 1.0
        pre = kappa**2 * (n - j + 1) / (lam * (lam + n))
        return pre * balanced_4f3(j, n, kappa, lam, "coeff1")
    if kind == 2:
        return kappa / (lam + j) * balanced_4f3(j, n, kappa, lam, "coeff2")
    raise ParameterError(f"kind must be 1 or 2, got {kind}")


def q_at_one(kind: int, n: int, kappa: float, lam: float) -> float:
    """``Q^(kind)_n`` at ``w = wbar = 1`` via Pochhammer ratios."""
    if lam <= 0:
        raise ParameterError("lambda must be positive")
    up = pochhammer(lam + kappa, n + 1)
    down = pochhammer(lam - kappa, n + 1)
    sign = 1.0 if kind == 1 else -1.0
    return (up + sign * down) / (2.0 * pochhammer(lam, n + 1))


# --------------------------------------------------------------------------
# P_n, p_n, f_n
# --------------------------------------------------------------------------


@lru_cache(maxsize=2048)
def big_p(family: int, n: int, params: Params) -> VectorPoly:
    """``P^(family)_n``, harmonic of degree ``m(n+1) + 1``."""
    if n < 0:
        raise ParameterError("n must be nonnegative")
    m = params.m
    e = family_edge(family, params)
    lam = family_lambda(family, params)
    q1 = q_poly(1, n, params.kappa, lam).subs_power(m)
    q2 = q_poly(2, n, params.kappa, lam).subs_power(m)
    lead = ScalarPoly.monomial(e + 1, 0) * q1
    side = ScalarPoly.monomial(1, e) * q2
    if family == 1:
        return VectorPoly(lead, side)
    return VectorPoly(side, lead)


def _z_power(r: int, f: VectorPoly) -> VectorPoly:
    return ScalarPoly.monomial(r, 0) * f


def small_p(family: int, n: int, params: Params) -> VectorPoly:
    """``p^(family)_n`` from the closed classification ``p_n = z^r P_k``."""
    if n < 0:
        raise ParameterError("n must be nonnegative")
    k, r = classify(family, n, params)
    if k < 0:
        comp = "t" if family == 1 else "tbar"
        return VectorPoly.monomial(n, 0, comp)
    return _z_power(r, big_p(family, k, params))


def divide_by_z(f: VectorPoly) -> VectorPoly:
    """Exact division by ``z``; every term must carry a factor ``z``."""
    terms = []
    for a, b, comp, c in f.terms():
        if a == 0:
            raise ParameterError("polynomial is not divisible by z")
        terms.append((a - 1, b, comp, c))
    return VectorPoly.from_terms(terms)


def f_basis(family: int, n: int, params: Params) -> VectorPoly:
    """``f_n = p_n + (m kappa / n) sigma0 p_n`` at an exceptional degree."""
    exceptional_k(family, n, params)
    p = small_p(family, n, params)
    return p + (params.m * params.kappa / n) * sigma0(p)


def f_basis_from_big_p(family: int, n: int, params: Params) -> VectorPoly:
    """Second route to ``f_n``: ``P_(k+1) / z``."""
    k = exceptional_k(family, n, params)
    return divide_by_z(big_p(family, k + 1, params))


def eval_at_one(family: int, n: int, params: Params):
    """``p_n(1)`` as the pair of ``(t, tbar)`` coefficients.

    Uses ``n = m(k + lambda_j) + r`` with ``1 <= r <= m`` and ``k >= -1``.
    """
    e = family_edge(family, params)
    if n < 1:
        raise ParameterError("n must be positive")
    k = (n - e - 1) // params.m
    if k < -1:
        raise ParameterError(f"n = {n} is outside the evaluation range")
    lam = family_lambda(family, params)
    kap = params.kappa
    base = pochhammer(lam, k + 1)
    up = pochhammer(lam + kap, k + 1) / base
    down = pochhammer(lam - kap, k + 1) / base
    if family == 1:
        return complex((up + down) / 2), complex((up - down) / 2)
    return complex((up - down) / 2), complex((up + down) / 2)


def label_poly(label: HarmonicLabel, params: Params) -> VectorPoly:
    """Polynomial named by a :class:`HarmonicLabel`."""
    if label.combo == "f":
        return f_basis(label.family, label.n, params)
    p = small_p(label.family, label.n, params)
    if label.combo == "sum":
        return p + sigma0(p)
    if label.combo == "diff":
        return p - sigma0(p)
    return sigma0(p) if label.mirrored else p


def degree_labels(n: int, params: Params, style: str = "orthogonal") -> list:
    """Labels of the degree-``n`` harmonic basis (4 entries, 2 when ``n = 0``).

    ``style="raw"`` returns ``p, sigma0 p`` for both families.  ``"orthogonal"``
    swaps in the sum/difference pair at an exceptional degree.
    """
    if style not in ("raw", "orthogonal"):
        raise ParameterError(f"unknown style {style!r}")
    if n == 0:
        return [HarmonicLabel(1, 0), HarmonicLabel(1, 0, mirrored=True)]
    out = []
    for fam in (1, 2):
        if style == "orthogonal" and is_exceptional(fam, n, params):
            out += [HarmonicLabel(fam, n, combo="sum"), HarmonicLabel(fam, n, combo="diff")]
        else:
            out += [HarmonicLabel(fam, n), HarmonicLabel(fam, n, mirrored=True)]
    return out


def degree_basis(n: int, params: Params, style: str = "orthogonal") -> list:
    return [label_poly(lab, params) for lab in degree_labels(n, params, style)]


def harmonic_labels(max_degree: int, params: Params, style: str = "orthogonal") -> list:
    out = []
    for n in range(max_degree + 1):
        out += degree_labels(n, params, style)
    return out
