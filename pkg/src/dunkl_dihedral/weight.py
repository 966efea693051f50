"""The matrix weight ``K`` for the Gaussian form.

On the fundamental chamber ``0 < theta < pi/m`` put ``phi = m theta`` and
``v = sin^2(phi/2)``.  With ``f1, f2`` built from Gauss series,

    K_real(phi) = c * L(phi)^T diag(H(-kappa), H(kappa)) L(phi),
    L(phi) = M_f(v) M_delta(phi),

and in the ``(t, tbar)`` basis ``K_complex = B K_real B^*``.  Other chambers
follow from equivariance.  Everything below accepts numpy arrays for the
angle so quadrature can evaluate all nodes at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import MirrorLineError, ParameterError
from .polyalg import B, B_ADJ, GroupElement, tau_matrix
from .scalars import V_SPLIT, Params, gauss_2f1

#: angular distance from a mirror below which chamber resolution refuses
CHAMBER_MARGIN = 1e-10


def H(kappa: float, delta: float) -> float:
    """``Gamma(1/2+kappa)^2 / (Gamma(1/2+kappa+delta) Gamma(1/2+kappa-delta))``."""
    a = 0.5 + kappa
    return math.gamma(a) ** 2 * _rgamma(a + delta) * _rgamma(a - delta)


def _rgamma(x: float) -> float:
    # 1/Gamma is entire; its zeros at the poles occur when |kappa| = ell/m
    if x <= 0 and float(x).is_integer():
        return 0.0
    return 1.0 / math.gamma(x)


def connection_sine(kappa: float, delta: float) -> float:
    """``sin(pi delta) / cos(pi kappa)``."""
    return math.sin(math.pi * delta) / math.cos(math.pi * kappa)


def c_norm(params: Params) -> float:
    """Normalizing constant ``cos(pi kappa) / (2 pi cos(pi delta))``."""
    return math.cos(math.pi * params.kappa) / (2 * math.pi * math.cos(math.pi * params.delta))


def det_K_closed(params: Params) -> float:
    s = math.sin(math.pi * params.kappa) / math.sin(math.pi * params.ell / params.m)
    return (1.0 - s * s) / (4 * math.pi**2)


def M_H(kappa: float, delta: float) -> np.ndarray:
    s = connection_sine(kappa, delta)
    return np.array([[H(kappa, delta), s], [-s, H(-kappa, delta)]])


M_SIGMA = np.array([[0.0, 1.0], [1.0, 0.0]])


# --------------------------------------------------------------------------
# f1, f2
# --------------------------------------------------------------------------


def _f12_direct(kappa, delta, v, w, limit=V_SPLIT):
    # v <= limit; w = 1 - v passed separately to keep it accurate
    g1 = gauss_2f1(delta, -delta, 0.5 + kappa, v, limit)
    g2 = gauss_2f1(1 + delta, 1 - delta, 1.5 + kappa, v, limit)
    f1 = v ** (kappa / 2) * w ** (-kappa / 2) * g1
    f2 = delta / (0.5 + kappa) * v ** ((kappa + 1) / 2) * w ** ((1 - kappa) / 2) * g2
    return f1, f2


def f12_pair(kappa: float, delta: float, v, w=None):
    """``(f1(kappa, delta; v), f2(kappa, delta; v))`` for ``v`` in (0, 1).

    ``w`` is ``1 - v``; pass it when it is known more accurately than the
    subtraction.  Arguments above 1/2 go through the connection formulas so
    the Gauss series is only ever summed on ``[0, 1/2]``.
    """
    v = np.asarray(v, dtype=float)
    w = 1.0 - v if w is None else np.asarray(w, dtype=float)
    if np.any(v <= 0) or np.any(w <= 0):
        raise ParameterError("v must lie strictly inside (0, 1)")
    scalar = v.ndim == 0
    v, w = np.atleast_1d(v), np.atleast_1d(w)
    f1 = np.empty_like(v)
    f2 = np.empty_like(v)
    low = v <= V_SPLIT
    if np.any(low):
        f1[low], f2[low] = _f12_direct(kappa, delta, v[low], w[low])
    high = ~low
    if np.any(high):
        h = H(kappa, delta)
        s = connection_sine(kappa, delta)
        a1, a2 = _f12_direct(-kappa, delta, w[high], v[high])
        b1, b2 = _f12_direct(kappa, delta, w[high], v[high])
        f1[high] = h * a1 + s * b2
        f2[high] = s * b1 - h * a2
    if scalar:
        return float(f1[0]), float(f2[0])
    return f1, f2


def f12_series(kappa: float, delta: float, v, limit: float = 0.9):
    """``(f1, f2)`` from the Gauss series alone, up to ``v <= limit``.

    Independent of the connection formulas; used to cross-check them.
    """
    v = np.asarray(v, dtype=float)
    return _f12_direct(kappa, delta, v, 1.0 - v, limit)


def f1(kappa: float, delta: float, v):
    return f12_pair(kappa, delta, v)[0]


def f2(kappa: float, delta: float, v):
    return f12_pair(kappa, delta, v)[1]


def _v_w(phi):
    phi = np.asarray(phi, dtype=float)
    return np.sin(phi / 2) ** 2, np.cos(phi / 2) ** 2


def _check_phi(phi):
    phi = np.asarray(phi, dtype=float)
    if np.any(phi <= 0) or np.any(phi >= math.pi):
        raise ParameterError("phi must lie in (0, pi)")


# --------------------------------------------------------------------------
# K in real and complex coordinates
# --------------------------------------------------------------------------


def _mf(params: Params, v, w):
    k, d = params.kappa, params.delta
    p1, p2 = f12_pair(k, d, v, w)
    m1, m2 = f12_pair(-k, d, v, w)
    return np.stack([np.stack([p1, p2], -1), np.stack([-m2, m1], -1)], -2)


def _rotation(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def L_matrix(phi, params: Params) -> np.ndarray:
    """``M_f(v) M_delta(phi)`` with ``v = sin^2(phi/2)``; shape ``(..., 2, 2)``."""
    _check_phi(phi)
    v, w = _v_w(phi)
    return _mf(params, v, w) @ _rotation(params.delta * np.asarray(phi, dtype=float))


def _k_real(params: Params, phi, v, w):
    k, d = params.kappa, params.delta
    L = _mf(params, v, w) @ _rotation(d * np.asarray(phi, dtype=float))
    M0 = np.diag([H(-k, d), H(k, d)])
    return c_norm(params) * np.swapaxes(L, -1, -2) @ M0 @ L


def K_real(phi, params: Params) -> np.ndarray:
    """Real symmetric weight on the chamber, ``phi = m theta`` in (0, pi)."""
    _check_phi(phi)
    v, w = _v_w(phi)
    return _k_real(params, phi, v, w)


def G1_G2(params: Params, v, w=None):
    """The two scalar profiles of the complex-basis kernel."""
    k, d = params.kappa, params.delta
    p1, p2 = f12_pair(k, d, v, w)
    m1, m2 = f12_pair(-k, d, v, w)
    hp, hm = H(k, d), H(-k, d)
    g1 = (p1**2 + p2**2) * hm + (m1**2 + m2**2) * hp
    g2 = (p1 + 1j * p2) ** 2 * hm - (m1 + 1j * m2) ** 2 * hp
    return g1, g2


def K_complex(theta, params: Params) -> np.ndarray:
    """Hermitian kernel in the ``(t, tbar)`` basis on the fundamental chamber."""
    theta = np.asarray(theta, dtype=float)
    phi = params.m * theta
    _check_phi(phi)
    v, w = _v_w(phi)
    g1, g2 = G1_G2(params, v, w)
    c = c_norm(params)
    k12 = np.exp(-2j * params.delta * phi) * c * g2
    k11 = np.asarray(c * g1, dtype=complex)
    return np.stack([np.stack([k11, k12], -1), np.stack([k12.conj(), k11], -1)], -2)


def K_complex_via_real(theta, params: Params) -> np.ndarray:
    """Same kernel by conjugating ``K_real`` with ``B``."""
    return B @ K_real(params.m * np.asarray(theta, dtype=float), params) @ B_ADJ


# --------------------------------------------------------------------------
# chambers and equivariance
# --------------------------------------------------------------------------


def spin_matrix(w: GroupElement, params: Params) -> np.ndarray:
    """``T(w)`` with ``(w f)(x) = f(x w) T(w)`` for row vectors ``(f1, f2)``."""
    return tau_matrix(w, params).T


@dataclass(frozen=True)
class ChamberPoint:
    """``z = (r e^{i theta0}) w`` with ``theta0`` in the fundamental chamber."""

    z: complex
    chamber_index: int
    canonical_angle: float
    group_element: GroupElement

    @classmethod
    def resolve(cls, z: complex, m: int, margin: float = CHAMBER_MARGIN) -> "ChamberPoint":
        z = complex(z)
        if z == 0:
            raise MirrorLineError("the origin lies on every mirror")
        width = math.pi / m
        theta = math.atan2(z.imag, z.real) % (2 * math.pi)
        frac = theta % width
        if min(frac, width - frac) < margin:
            raise MirrorLineError(f"z = {z} lies on or next to a mirror line")
        j = math.ceil(theta / width)
        p, odd = divmod(j, 2)
        if odd:
            theta0 = theta - 2 * p * width
            w = GroupElement("rotation", p, m)
        else:
            theta0 = 2 * p * width - theta
            w = GroupElement("reflection", p, m)
        return cls(z, j, theta0, w)

    def canonical_point(self) -> complex:
        return abs(self.z) * complex(math.cos(self.canonical_angle), math.sin(self.canonical_angle))


def conjugate_by(K: np.ndarray, w: GroupElement, params: Params) -> np.ndarray:
    """``T(w) K T(w)^*``: the kernel at ``x w`` from the kernel at ``x``."""
    T = spin_matrix(w, params)
    return T @ K @ T.conj().T


def K_at(z: complex, params: Params) -> np.ndarray:
    """Kernel at any off-mirror point of the plane (degree-0 homogeneous)."""
    pt = ChamberPoint.resolve(z, params.m)
    return conjugate_by(K_complex(pt.canonical_angle, params), pt.group_element, params)


# --------------------------------------------------------------------------
# boundary behaviour
# --------------------------------------------------------------------------


def wall_functions(psi, params: Params):
    """``|K12(psi)|`` near the wall ``phi = 0`` and ``|q(pi - psi)|`` near ``phi = pi``."""
    psi = np.asarray(psi, dtype=float)
    v, w = _v_w(psi)
    near0 = _k_real(params, psi, v, w)
    # at phi = pi - psi the roles of v and w swap exactly
    nearpi = _k_real(params, math.pi - psi, w, v)
    a = 2 * math.pi * params.ell / params.m
    q = (nearpi[..., 0, 0] - nearpi[..., 1, 1]) * math.sin(a) - 2 * nearpi[..., 0, 1] * math.cos(a)
    return np.abs(near0[..., 0, 1]), np.abs(q)


def dyadic_grid(smallest: float = 1e-4, largest: float = 0.1) -> np.ndarray:
    """Decreasing grid ``largest, largest/2, ...`` down to ``smallest``."""
    count = int(math.floor(math.log2(largest / smallest))) + 1
    return largest / 2.0 ** np.arange(count)


def fitted_exponent(psi, values, tail: int = 6) -> float:
    """Log-log slope through the ``tail`` smallest-``psi`` samples."""
    order = np.argsort(psi)[:tail]
    return float(np.polyfit(np.log(psi[order]), np.log(values[order]), 1)[0])


def boundary_residuals(params: Params, psi_grid=None) -> dict:
    """Wall diagnostics: residual values, monotone decay and fitted exponents."""
    psi = dyadic_grid() if psi_grid is None else np.asarray(psi_grid, dtype=float)
    k12, q = wall_functions(psi, params)
    order = np.argsort(psi)[::-1]

    def monotone(vals):
        s = vals[order]
        return bool(np.all(np.diff(s) <= 0))

    out = {
        "psi": psi,
        "k12": k12,
        "q": q,
        "expected_exponent": 1 - 2 * abs(params.kappa),
        "k12_monotone": monotone(k12),
        "q_monotone": monotone(q),
    }
    # at kappa = 0 both vanish identically and there is nothing to fit
    out["k12_exponent"] = fitted_exponent(psi, k12) if np.all(k12 > 0) else None
    out["q_exponent"] = fitted_exponent(psi, q) if np.all(q > 0) else None
    return out
