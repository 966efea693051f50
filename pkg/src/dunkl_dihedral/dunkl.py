"""Dunkl operators on the standard module and the derived Laplacian.

``apply_D`` works monomial by monomial.  For ``z**a zbar**b t`` with ``a > b``
the difference quotient factors as a geometric sum and the root-of-unity
average keeps only the indices ``i = -ell (mod m)``:

    D(z^a zbar^b t) = a z^(a-1) zbar^b t
                      + kappa m tbar sum_{0 <= i < a-b, i = -ell (m)} z^(a-1-i) zbar^(b+i)

For ``a < b`` the sign flips and the selection becomes ``i = b-a-ell``; the
``tbar`` rule is the same with ``ell -> -ell``.  The formula is checked against
:func:`pointwise_D_oracle`, a literal evaluation of the difference quotients.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .exceptions import MirrorLineError
from .polyalg import GroupElement, ScalarPoly, VectorPoly, apply_group, sigma0
from .scalars import Params

MIRROR_MARGIN = 1e-8


@lru_cache(maxsize=65536)
def _reflection_part(a: int, b: int, shift: int, m: int) -> tuple:
    """Exponents of the kappa-term of D on ``z^a zbar^b`` and its sign.

    ``shift`` is ``ell`` for the t component and ``-ell`` for tbar.  Returns
    ``(sign, ((a', b'), ...))``.
    """
    if a == b:
        return 0, ()
    if a > b:
        first = (-shift) % m
        keys = tuple((a - 1 - i, b + i) for i in range(first, a - b, m))
        return 1, keys
    first = (b - a - shift) % m
    keys = tuple((b - 1 - i, a + i) for i in range(first, b - a, m))
    return -1, keys


def apply_D(f: VectorPoly, params: Params) -> VectorPoly:
    """``D f`` computed exactly from the monomial closed form."""
    m, ell, kappa = params.m, params.ell, params.kappa
    out = {"t": {}, "tbar": {}}
    for a, b, comp, c in f.terms():
        other = "tbar" if comp == "t" else "t"
        if a:
            d = out[comp]
            d[(a - 1, b)] = d.get((a - 1, b), 0) + a * c
        if kappa == 0:
            continue
        sign, keys = _reflection_part(a, b, ell if comp == "t" else -ell, m)
        if not keys:
            continue
        d = out[other]
        scale = sign * kappa * m * c
        for key in keys:
            d[key] = d.get(key, 0) + scale
    return VectorPoly(ScalarPoly(out["t"]), ScalarPoly(out["tbar"]))


def apply_Dbar(f: VectorPoly, params: Params) -> VectorPoly:
    """``Dbar = sigma0 D sigma0``."""
    return sigma0(apply_D(sigma0(f), params))


def T_z(f: VectorPoly, params: Params) -> VectorPoly:
    """``sum_j sigma_j f``."""
    out = VectorPoly.zero()
    for j in range(params.m):
        out = out + apply_group(GroupElement("reflection", j, params.m), f, params)
    return out


def T_zbar(f: VectorPoly, params: Params) -> VectorPoly:
    """``sum_j omega^j sigma_j f``."""
    out = VectorPoly.zero()
    for j in range(params.m):
        g = apply_group(GroupElement("reflection", j, params.m), f, params)
        out = out + params.omega_pow(j) * g
    return out


def laplacian(f: VectorPoly, params: Params) -> VectorPoly:
    return 4.0 * apply_D(apply_Dbar(f, params), params)


def exp_half_laplacian(f: VectorPoly, params: Params) -> VectorPoly:
    """``sum_k Delta^k f / (2^k k!)``; terminates since Delta lowers degree by 2."""
    out = f
    term = f
    k = 0
    while not term.is_zero():
        k += 1
        term = laplacian(term, params) / (2.0 * k)
        out = out + term
    return out


# --------------------------------------------------------------------------
# pointwise oracle
# --------------------------------------------------------------------------


def check_off_mirror(z, m: int, margin: float = MIRROR_MARGIN):
    """Raise :class:`MirrorLineError` if any ``z`` is 0 or within ``margin`` rad of a mirror."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(z == 0):
        raise MirrorLineError("z = 0 lies on every mirror")
    width = math.pi / m
    frac = np.angle(z) % width
    if np.any(np.minimum(frac, width - frac) < margin):
        raise MirrorLineError(f"a point is within {margin} rad of a mirror line")


def _reflection_sum(f: VectorPoly, z, params: Params, with_omega: bool):
    ell = params.ell
    h1, h2 = f.comp_t(z), f.comp_tbar(z)
    s1 = s2 = 0j
    for j in range(params.m):
        w = params.omega_pow(j)
        zeta = np.conj(z) * w
        r1, r2 = f.comp_t(zeta), f.comp_tbar(zeta)
        # spin slots after t -> w^{lj} tbar, tbar -> w^{-lj} t
        up, down = params.omega_pow(-ell * j), params.omega_pow(ell * j)
        factor = (w if with_omega else 1.0) / (z - zeta)
        s1 = s1 + (h2 - r2) * up * factor
        s2 = s2 + (h1 - r1) * down * factor
    return s1, s2


def pointwise_D_oracle(f: VectorPoly, z, params: Params):
    """``(D f)(z)`` by evaluating the defining difference quotients at ``z``.

    ``z`` may be a scalar or an array; returns the ``(t, tbar)`` values.
    """
    check_off_mirror(z, params.m)
    s1, s2 = _reflection_sum(f, z, params, with_omega=False)
    k = params.kappa
    return f.comp_t.dz()(z) + k * s1, f.comp_tbar.dz()(z) + k * s2


def pointwise_Dbar_oracle(f: VectorPoly, z, params: Params):
    """``(Dbar f)(z)`` from the conjugate defining formula."""
    check_off_mirror(z, params.m)
    s1, s2 = _reflection_sum(f, z, params, with_omega=True)
    k = params.kappa
    return f.comp_t.dzbar()(z) - k * s1, f.comp_tbar.dzbar()(z) - k * s2


def random_off_mirror_points(rng: np.random.Generator, n: int, m: int, margin: float = 0.05):
    """Points with modulus in [0.5, 1.5] whose angle stays ``margin`` rad off the mirrors."""
    width = math.pi / m
    r = rng.uniform(0.5, 1.5, size=n)
    chamber = rng.integers(0, 2 * m, size=n)
    frac = rng.uniform(margin, width - margin, size=n)
    return r * np.exp(1j * (chamber * width + frac))
