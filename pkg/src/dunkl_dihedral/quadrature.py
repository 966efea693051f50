"""Numerical integration against the matrix weight.

The radial direction is done exactly (Gaussian moments after splitting into
homogeneous parts).  Angular integrals use a tanh-sinh rule on each chamber:
the weight has integrable algebraic singularities at the walls, which the
double-exponential node clustering absorbs without special casing.  Nodes are
kept as the pair ``(u, 1 - u)`` so wall distances never suffer cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError
from .polyalg import VectorPoly, group_elements, homogeneous_components
from .scalars import Params
from .weight import G1_G2, c_norm, f12_pair, spin_matrix

DEFAULT_ANGULAR_LEVEL = 10
DEFAULT_SINGULAR_LEVEL = 10
#: nodes closer than this (in the unit variable) to an endpoint are dropped
ENDPOINT_CUTOFF = 1e-140


@dataclass(frozen=True)
class SingularRule:
    """Tanh-sinh nodes on (0, 1): ``u = 1/(1 + exp(-pi sinh s))``.

    ``u`` and ``one_minus_u`` are both stored to full relative precision.
    The step is ``h = 2**(1 - level/2)``.
    """

    u: np.ndarray
    one_minus_u: np.ndarray
    weights: np.ndarray
    level: int

    @classmethod
    def build(cls, level: int = DEFAULT_SINGULAR_LEVEL) -> "SingularRule":
        if level < 1:
            raise ParameterError("level must be positive")
        h = 2.0 ** (1 - level / 2)
        # past |s| = s_max both endpoint distances drop below the cutoff
        s_max = math.asinh(-math.log(ENDPOINT_CUTOFF) / math.pi)
        n = int(s_max / h)
        s = h * np.arange(-n, n + 1)
        e = np.pi * np.sinh(s)
        u = 1.0 / (1.0 + np.exp(-e))
        one_minus_u = 1.0 / (1.0 + np.exp(e))
        weights = h * np.pi * np.cosh(s) * u * one_minus_u
        return cls(u, one_minus_u, weights, level)

    def __len__(self):
        return len(self.u)

    def integrate(self, func) -> float:
        """``int_0^1 func(u, 1 - u) du``; ``func`` is vectorized over nodes."""
        return float(np.sum(self.weights * func(self.u, self.one_minus_u)))


@dataclass(frozen=True)
class AngularRule:
    """Nodes ``theta`` in ``(0, pi/m)`` with positive weights summing to ``pi/m``."""

    m: int
    u: np.ndarray
    one_minus_u: np.ndarray
    weights: np.ndarray

    @classmethod
    def build(cls, m: int, level: int = DEFAULT_ANGULAR_LEVEL) -> "AngularRule":
        base = SingularRule.build(level)
        return cls(m, base.u, base.one_minus_u, base.weights * (math.pi / m))

    @property
    def nodes(self) -> np.ndarray:
        return self.u * (math.pi / self.m)

    def __len__(self):
        return len(self.u)


def radial_moment(d) -> float:
    """``int_0^inf r^(d+1) exp(-r^2/2) dr = 2^(d/2) Gamma(d/2 + 1)``."""
    if d < 0:
        raise ParameterError("moment order must be nonnegative")
    return 2.0 ** (d / 2) * math.gamma(d / 2 + 1)


# --------------------------------------------------------------------------
# kernel on the nodes of one chamber
# --------------------------------------------------------------------------


def chamber_kernel(params: Params, rule: AngularRule) -> np.ndarray:
    """``K_complex`` at the nodes of the fundamental chamber, shape ``(N, 2, 2)``."""
    if rule.m != params.m:
        raise ParameterError("rule was built for a different m")
    params.require_integrable()
    phi = np.pi * rule.u
    v = np.sin(np.pi * rule.u / 2) ** 2
    w = np.sin(np.pi * rule.one_minus_u / 2) ** 2
    g1, g2 = G1_G2(params, v, w)
    c = c_norm(params)
    k12 = np.exp(-2j * params.delta * phi) * c * g2
    k11 = np.asarray(c * g1, dtype=complex)
    return np.stack([np.stack([k11, k12], -1), np.stack([k12.conj(), k11], -1)], -2)


@dataclass
class _PlaneSamples:
    """All chambers' node points on the unit circle with the matching kernels."""

    points: np.ndarray  # (2m * N,)
    kernel: np.ndarray  # (2m * N, 2, 2)
    weights: np.ndarray  # (2m * N,)


def plane_samples(params: Params, rule: AngularRule) -> _PlaneSamples:
    """Nodes of every chamber with the kernel carried over by equivariance."""
    base = np.exp(1j * rule.nodes)
    k0 = chamber_kernel(params, rule)
    pts, ks, ws = [], [], []
    for g in group_elements(params.m):
        pts.append(g.act_point(base))
        T = spin_matrix(g, params)
        ks.append(T @ k0 @ T.conj().T)
        ws.append(rule.weights)
    return _PlaneSamples(np.concatenate(pts), np.concatenate(ks), np.concatenate(ws))


def _values(f: VectorPoly, z: np.ndarray) -> np.ndarray:
    out = np.zeros((len(z), 2), dtype=complex)
    if not f.comp_t.is_zero():
        out[:, 0] = f.comp_t(z)
    if not f.comp_tbar.is_zero():
        out[:, 1] = f.comp_tbar(z)
    return out


def _angular(fv: np.ndarray, gv: np.ndarray, samples: _PlaneSamples) -> complex:
    # sum_x weight * g(x) K(x) f(x)^*
    kf = np.einsum("xab,xb->xa", samples.kernel, fv.conj())
    return complex(np.sum(samples.weights * np.einsum("xa,xa->x", gv, kf)))


def gaussian_pairing_numeric(f: VectorPoly, g: VectorPoly, params: Params, rule: AngularRule,
                             samples: _PlaneSamples | None = None) -> complex:
    """``int g K f^* exp(-|z|^2/2) dm2`` with exact radial moments."""
    samples = samples or plane_samples(params, rule)
    fparts = [(d, _values(p, samples.points)) for d, p in homogeneous_components(f)]
    gparts = [(d, _values(p, samples.points)) for d, p in homogeneous_components(g)]
    total = 0j
    for d1, fv in fparts:
        for d2, gv in gparts:
            total += radial_moment(d1 + d2) * _angular(fv, gv, samples)
    return total


def gram_numeric(polys, params: Params, rule: AngularRule) -> np.ndarray:
    """Gaussian Gram matrix ``G[i, j] = <polys[i], polys[j]>_G`` by quadrature.

    Every input must be homogeneous (or zero).
    """
    samples = plane_samples(params, rule)
    degs = []
    vals = []
    for p in polys:
        if not p.is_zero() and not p.is_homogeneous():
            raise ParameterError("gram_numeric expects homogeneous polynomials")
        degs.append(p.degree() or 0)
        vals.append(_values(p, samples.points))
    V = np.array(vals)  # (P, X, 2)
    KV = np.einsum("xab,pxb->pxa", samples.kernel, V.conj())
    ang = np.einsum("jxa,ixa,x->ij", V, KV, samples.weights)
    deg = np.array(degs)
    moments = np.vectorize(radial_moment)(deg[:, None] + deg[None, :])
    return ang * moments


def circle_pairing_numeric(f: VectorPoly, g: VectorPoly, params: Params, rule: AngularRule) -> complex:
    """Chamber-sum form of the circle pairing.

    Sums over the group of ``g(e^{i theta} w) T(w) K(theta) T(w)^* f(e^{i theta} w)^*``
    on the fundamental chamber only.
    """
    if f.is_zero() or g.is_zero():
        return 0j
    if not (f.is_homogeneous() and g.is_homogeneous()):
        raise ParameterError("circle pairing needs homogeneous polynomials")
    if (f.degree() + g.degree()) % 2:
        raise ParameterError("odd total degree")
    k0 = chamber_kernel(params, rule)
    base = np.exp(1j * rule.nodes)
    total = 0j
    for w in group_elements(params.m):
        z = w.act_point(base)
        fv = _values(f, z)
        gv = _values(g, z)
        T = spin_matrix(w, params)
        kf = np.einsum("xab,xb->xa", T @ k0 @ T.conj().T, fv.conj())
        total += np.sum(rule.weights * np.einsum("xa,xa->x", gv, kf))
    return complex(total)


def spin_normalization(params: Params, rule: AngularRule) -> float:
    """``<t, t>_S = 2 m int_0^{pi/m} K11 d theta`` (should be 2)."""
    k0 = chamber_kernel(params, rule)
    return float(2 * params.m * np.sum(rule.weights * k0[:, 0, 0].real))


# --------------------------------------------------------------------------
# one-dimensional singular integrals
# --------------------------------------------------------------------------


def _arcsine_weight(u, w):
    return 1.0 / np.sqrt(u * w)


def g1_integral(params: Params, rule: SingularRule | None = None, half: bool = False) -> float:
    """``int_0^1 G1(v) (v(1-v))^(-1/2) dv``.

    With ``half=True`` the integral over ``(0, 1/2)`` is doubled instead,
    which relies on ``G1`` being symmetric under ``v -> 1 - v``.
    """
    params.require_integrable()
    rule = rule or SingularRule.build()
    if not half:
        return rule.integrate(lambda u, w: G1_G2(params, u, w)[0] * _arcsine_weight(u, w))

    def integrand(u, w):
        v, vc = u / 2, 1 - u / 2
        return 0.5 * G1_G2(params, v, vc)[0] * _arcsine_weight(v, vc)

    return 2 * rule.integrate(integrand)


def g1_integral_closed(params: Params) -> float:
    return 2 * math.pi * math.cos(math.pi * params.delta) / math.cos(math.pi * params.kappa)


def f12_reflection_integrals(delta: float, rule: SingularRule | None = None):
    """``int f_i(0; v) f_i(0; 1-v) dv / sqrt(v(1-v))`` for ``i = 1, 2``."""
    rule = rule or SingularRule.build()

    def parts(u, w):
        a1, a2 = f12_pair(0.0, delta, u, w)
        b1, b2 = f12_pair(0.0, delta, w, u)
        return a1 * b1, a2 * b2

    first = rule.integrate(lambda u, w: parts(u, w)[0] * _arcsine_weight(u, w))
    second = rule.integrate(lambda u, w: parts(u, w)[1] * _arcsine_weight(u, w))
    return first, second


def f12_reflection_closed(delta: float):
    a = math.pi / 2 * math.cos(math.pi * delta)
    b = math.sin(math.pi * delta) / (2 * delta)
    return a + b, -a + b

