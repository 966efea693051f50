"""Bilinear forms on the standard module and closed-form norms.

The algebraic form pairs ``p = p1 t + p2 tbar`` with ``q`` by applying the
operator polynomial ``sum conj(a_jk) 2^(j+k) D^j Dbar^k`` (from ``p1``) to ``q``
and reading the ``t`` coefficient of the constant term, with ``<t, t> = 2``;
likewise for ``p2`` and ``tbar``.  The Gaussian form pairs ``e^(Delta/2) f``
and ``e^(Delta/2) g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dunkl import apply_D, apply_Dbar, exp_half_laplacian
from .exceptions import ParameterError
from .harmonic import (
    HarmonicLabel,
    classify,
    exceptional_k,
    family_lambda,
    is_exceptional,
    label_poly,
)
from .polyalg import VectorPoly
from .scalars import Params, pochhammer

#: <t, t> = <tbar, tbar>
SPIN_NORM = 2.0


class _DerivativeTable:
    """Lazily computed constant terms of ``D^j Dbar^k q``."""

    def __init__(self, q: VectorPoly, params: Params):
        self.params = params
        self.degree = q.degree()
        self.homogeneous = q.is_zero() or q.is_homogeneous()
        self._dbar = [q]  # Dbar^k q
        self._chains: dict = {}  # k -> [D^j Dbar^k q]

    def constant(self, j: int, k: int):
        """``(t, tbar)`` coefficients of the constant term of ``D^j Dbar^k q``."""
        if self.degree is None or j + k > self.degree:
            return 0j, 0j
        if self.homogeneous and j + k != self.degree:
            return 0j, 0j
        while len(self._dbar) <= k:
            self._dbar.append(apply_Dbar(self._dbar[-1], self.params))
        chain = self._chains.setdefault(k, [self._dbar[k]])
        while len(chain) <= j:
            chain.append(apply_D(chain[-1], self.params))
        g = chain[j]
        return g.comp_t.coef(0, 0), g.comp_tbar.coef(0, 0)


def pairing(p: VectorPoly, q: VectorPoly, params: Params, _table=None) -> complex:
    """Algebraic form ``<p, q>``: conjugate-linear in ``p``, linear in ``q``."""
    table = _table or _DerivativeTable(q, params)
    total = 0j
    for slot, part in enumerate((p.comp_t, p.comp_tbar)):
        for (j, k), c in part.items():
            const = table.constant(j, k)[slot]
            if const:
                total += c.conjugate() * 2.0 ** (j + k) * const
    return SPIN_NORM * total


def gaussian_pairing(f: VectorPoly, g: VectorPoly, params: Params) -> complex:
    return pairing(exp_half_laplacian(f, params), exp_half_laplacian(g, params), params)


def circle_pairing(f: VectorPoly, g: VectorPoly, params: Params) -> complex:
    """``<f, g>_G / (2^n n!)`` for homogeneous ``f, g`` with ``deg f + deg g = 2n``."""
    if f.is_zero() or g.is_zero():
        return 0j
    if not (f.is_homogeneous() and g.is_homogeneous()):
        raise ParameterError("circle pairing needs homogeneous polynomials")
    total = f.degree() + g.degree()
    if total % 2:
        raise ParameterError(f"odd total degree {total}")
    n = total // 2
    return gaussian_pairing(f, g, params) / (2.0**n * math.factorial(n))


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------


def _ratio(lam, kappa, i_minus, i_plus, i_base1, i_base2):
    return (
        pochhammer(lam - kappa, i_minus)
        * pochhammer(lam + kappa, i_plus)
        / (pochhammer(lam, i_base1) * pochhammer(lam, i_base2))
    )


def closed_norm(label: HarmonicLabel, params: Params) -> float:
    """Norm ``<p, p>`` of a labelled harmonic polynomial from the closed formulas."""
    n, fam, kap = label.n, label.family, params.kappa
    lam = family_lambda(fam, params)
    scale = 2.0 ** (n + 1) * math.factorial(n)
    if n == 0:
        return scale
    if label.combo is None:
        k, _ = classify(fam, n, params)
        return scale * _ratio(lam, kap, k + 1, k + 1, k + 1, k + 1)
    if not is_exceptional(fam, n, params):
        raise ParameterError(f"{label.name} needs an exceptional degree")
    k = exceptional_k(fam, n, params)
    if label.combo == "sum":
        return 2 * scale * _ratio(lam, kap, k + 2, k + 1, k + 2, k + 1)
    if label.combo == "diff":
        return 2 * scale * _ratio(lam, kap, k + 1, k + 2, k + 2, k + 1)
    return scale * _ratio(lam, kap, k + 2, k + 2, k + 2, k + 2)


def exceptional_coupling(family: int, n: int, params: Params) -> float:
    """``<sigma0 p_n, p_n> = -(m kappa / n) <p_n, p_n>`` at an exceptional degree."""
    exceptional_k(family, n, params)
    return -params.m * params.kappa / n * closed_norm(HarmonicLabel(family, n), params)


# --------------------------------------------------------------------------
# Gram matrices
# --------------------------------------------------------------------------


@dataclass
class GramMatrix:
    labels: list
    entries: np.ndarray = field(repr=False)

    def _scale(self) -> np.ndarray:
        d = np.sqrt(np.abs(np.diag(self.entries)))
        d[d == 0] = 1.0
        return np.outer(d, d)

    def hermitian_defect(self) -> float:
        """Largest ``|G_ij - conj(G_ji)|`` relative to ``sqrt(|G_ii G_jj|)``."""
        diff = np.abs(self.entries - self.entries.conj().T) / self._scale()
        return float(diff.max(initial=0.0))

    def eigenvalues(self) -> np.ndarray:
        herm = (self.entries + self.entries.conj().T) / 2
        return np.linalg.eigvalsh(herm)

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues()[0])

    def is_positive_definite(self) -> bool:
        # Cholesky after diagonal equilibration; norms span many decades
        herm = (self.entries + self.entries.conj().T) / 2 / self._scale()
        try:
            np.linalg.cholesky(herm)
        except np.linalg.LinAlgError:
            return False
        return True

    def offdiagonal_ratio(self) -> float:
        """``max |G_ij| / sqrt(|G_ii G_jj|)`` over ``i != j``."""
        scaled = np.abs(self.entries) / self._scale()
        np.fill_diagonal(scaled, 0.0)
        return float(scaled.max(initial=0.0))


def gram(polys, params: Params, form: str = "algebraic", labels=None) -> GramMatrix:
    """Matrix of ``<polys[i], polys[j]>`` for ``form`` in {"algebraic", "gaussian"}."""
    if form == "gaussian":
        polys = [exp_half_laplacian(p, params) for p in polys]
    elif form != "algebraic":
        raise ParameterError(f"unknown form {form!r}")
    size = len(polys)
    out = np.zeros((size, size), dtype=complex)
    for j, q in enumerate(polys):
        table = _DerivativeTable(q, params)
        for i, p in enumerate(polys):
            out[i, j] = pairing(p, q, params, _table=table)
    return GramMatrix(list(labels) if labels is not None else list(range(size)), out)


def label_gram(labels, params: Params, form: str = "algebraic") -> GramMatrix:
    polys = [label_poly(lab, params) for lab in labels]
    return gram(polys, params, form, labels=labels)
