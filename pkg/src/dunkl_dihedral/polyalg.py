"""Sparse polynomials in ``z, zbar`` and vector polynomials ``f1 t + f2 tbar``.

A :class:`ScalarPoly` is a finite map ``(a, b) -> coefficient`` standing for
``sum c z**a zbar**b``.  A :class:`VectorPoly` carries one scalar polynomial
per spin component ``t`` and ``tbar``.  Values are immutable; every
arithmetic operation returns a fresh, canonicalized object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .exceptions import ParameterError
from .scalars import Params

#: coefficients with magnitude at or below this are dropped
DROP_EPS = 1e-14
MAX_EXPONENT = 2**16

COMPONENTS = ("t", "tbar")

#: change of basis (g1, g2) -> (g1 + g2, i (g1 - g2)), row-vector convention
B = np.array([[1, 1j], [1, -1j]])
B_ADJ = B.conj().T


def _canonical(terms: Mapping) -> dict:
    out = {}
    for key, c in terms.items():
        c = complex(c)
        if abs(c) > DROP_EPS:
            a, b = key
            if a < 0 or b < 0 or a > MAX_EXPONENT or b > MAX_EXPONENT:
                raise OverflowError(f"exponent {key} outside [0, 2**16]")
            out[(int(a), int(b))] = c
    return out


class ScalarPoly:
    """Polynomial ``sum_{(a, b)} c_ab z**a zbar**b`` with complex coefficients."""

    __slots__ = ("_terms",)
    # numpy scalars defer to our reflected operators
    __array_ufunc__ = None

    def __init__(self, terms: Mapping | None = None):
        self._terms = _canonical(terms or {})

    @classmethod
    def monomial(cls, a: int, b: int, coef=1.0) -> "ScalarPoly":
        return cls({(a, b): coef})

    @classmethod
    def constant(cls, c) -> "ScalarPoly":
        return cls({(0, 0): c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coef(self, a: int, b: int) -> complex:
        return self._terms.get((a, b), 0j)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self):
        if not self._terms:
            return None
        return max(a + b for a, b in self._terms)

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self._terms)

    def __add__(self, other):
        if not isinstance(other, ScalarPoly):
            other = ScalarPoly.constant(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return ScalarPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ScalarPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, VectorPoly):
            return other.__rmul__(self)
        if not isinstance(other, ScalarPoly):
            return ScalarPoly({k: c * other for k, c in self._terms.items()})
        out: dict = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return ScalarPoly(out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, c):
        return self * (1.0 / c)

    def __eq__(self, other):
        if not isinstance(other, ScalarPoly):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self):
        if not self._terms:
            return "ScalarPoly(0)"
        parts = [f"({c:.6g})z^{a}zb^{b}" for (a, b), c in self.items()]
        return "ScalarPoly(" + " + ".join(parts) + ")"

    def swap(self) -> "ScalarPoly":
        """``p(zbar, z)``: exchange the exponents."""
        return ScalarPoly({(b, a): c for (a, b), c in self._terms.items()})

    def conj_coeffs(self) -> "ScalarPoly":
        return ScalarPoly({k: c.conjugate() for k, c in self._terms.items()})

    def max_abs(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def dz(self) -> "ScalarPoly":
        return ScalarPoly({(a - 1, b): a * c for (a, b), c in self._terms.items() if a})

    def dzbar(self) -> "ScalarPoly":
        return ScalarPoly({(a, b - 1): b * c for (a, b), c in self._terms.items() if b})

    def subs_power(self, m: int) -> "ScalarPoly":
        """Substitute ``w = z**m``, ``wbar = zbar**m``."""
        return ScalarPoly({(m * a, m * b): c for (a, b), c in self._terms.items()})

    def __call__(self, z):
        """Evaluate at ``z`` (scalar or array), with ``zbar = conj(z)``."""
        z = np.asarray(z, dtype=complex)
        zb = z.conj()
        out = np.zeros_like(z)
        for (a, b), c in self._terms.items():
            out = out + c * z**a * zb**b
        return out[()] if out.ndim == 0 else out


def star(p: ScalarPoly) -> ScalarPoly:
    """``p*(z, zbar) = sum conj(a_jk) z**k zbar**j``."""
    return ScalarPoly({(b, a): c.conjugate() for (a, b), c in p._terms.items()})


@dataclass(frozen=True, eq=False)
class VectorPoly:
    """``f = comp_t * t + comp_tbar * tbar``."""

    comp_t: ScalarPoly
    comp_tbar: ScalarPoly
    __array_ufunc__ = None

    @classmethod
    def zero(cls) -> "VectorPoly":
        return cls(ScalarPoly(), ScalarPoly())

    @classmethod
    def monomial(cls, a: int, b: int, component: str, coef=1.0) -> "VectorPoly":
        mono = ScalarPoly.monomial(a, b, coef)
        if component == "t":
            return cls(mono, ScalarPoly())
        if component == "tbar":
            return cls(ScalarPoly(), mono)
        raise ValueError(f"component must be 't' or 'tbar', got {component!r}")

    @classmethod
    def from_terms(cls, terms: Iterable) -> "VectorPoly":
        """Build from ``(a, b, component, coef)`` tuples (repeats are summed)."""
        parts = {"t": {}, "tbar": {}}
        for a, b, comp, c in terms:
            d = parts[comp]
            d[(a, b)] = d.get((a, b), 0) + c
        return cls(ScalarPoly(parts["t"]), ScalarPoly(parts["tbar"]))

    def component(self, name: str) -> ScalarPoly:
        return self.comp_t if name == "t" else self.comp_tbar

    def terms(self):
        """Terms ``(a, b, component, coef)`` in lexicographic order, t before tbar."""
        rows = [(a, b, 0, c) for (a, b), c in self.comp_t.items()]
        rows += [(a, b, 1, c) for (a, b), c in self.comp_tbar.items()]
        rows.sort(key=lambda r: r[:3])
        return [(a, b, COMPONENTS[k], c) for a, b, k, c in rows]

    def is_zero(self) -> bool:
        return self.comp_t.is_zero() and self.comp_tbar.is_zero()

    def degree(self):
        degs = [d for d in (self.comp_t.degree(), self.comp_tbar.degree()) if d is not None]
        return max(degs) if degs else None

    def is_homogeneous(self) -> bool:
        return len(homogeneous_components(self)) == 1

    def max_abs(self) -> float:
        return max(self.comp_t.max_abs(), self.comp_tbar.max_abs())

    def coef_norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        vals = [c for *_, c in self.terms()]
        return float(np.sqrt(sum(abs(c) ** 2 for c in vals)))

    def __add__(self, other: "VectorPoly") -> "VectorPoly":
        return VectorPoly(self.comp_t + other.comp_t, self.comp_tbar + other.comp_tbar)

    def __neg__(self):
        return VectorPoly(-self.comp_t, -self.comp_tbar)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, VectorPoly):
            return NotImplemented
        return VectorPoly(self.comp_t * c, self.comp_tbar * c)

    def __rmul__(self, c):
        # numbers and ScalarPoly both multiply componentwise
        return VectorPoly(c * self.comp_t, c * self.comp_tbar)

    def __truediv__(self, c):
        return self * (1.0 / c)

    def __eq__(self, other):
        if not isinstance(other, VectorPoly):
            return NotImplemented
        return self.comp_t == other.comp_t and self.comp_tbar == other.comp_tbar

    def __repr__(self):
        return f"VectorPoly(t: {self.comp_t!r}, tbar: {self.comp_tbar!r})"

    def __call__(self, z):
        return evaluate(self, z)

    def to_records(self) -> list:
        return [
            {"a": a, "b": b, "component": comp, "re": c.real, "im": c.imag}
            for a, b, comp, c in self.terms()
        ]

    @classmethod
    def from_records(cls, records) -> "VectorPoly":
        return cls.from_terms(
            (r["a"], r["b"], r["component"], complex(r["re"], r["im"])) for r in records
        )


T = VectorPoly.monomial(0, 0, "t")
TBAR = VectorPoly.monomial(0, 0, "tbar")
Z = ScalarPoly.monomial(1, 0)
ZBAR = ScalarPoly.monomial(0, 1)


def distance(f: VectorPoly, g: VectorPoly) -> float:
    """Largest coefficient of ``f - g`` in absolute value."""
    return (f - g).max_abs()


# --------------------------------------------------------------------------
# group I2(m)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    """Reflection ``sigma_j`` (``z -> zbar w^j``) or rotation ``rho_j`` (``z -> z w^j``).

    Multiplication is operator composition:
    ``apply_group(w1 * w2, f) == apply_group(w1, apply_group(w2, f))``.
    """

    kind: str
    j: int
    m: int

    def __post_init__(self):
        if self.kind not in ("rotation", "reflection"):
            raise ParameterError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "j", self.j % self.m)

    @property
    def is_reflection(self) -> bool:
        return self.kind == "reflection"

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        # the point map of w1*w2 is x -> (x w1) w2
        m = self.m
        if self.kind == "rotation" and other.kind == "rotation":
            return GroupElement("rotation", self.j + other.j, m)
        if self.kind == "rotation":
            return GroupElement("reflection", other.j - self.j, m)
        if other.kind == "rotation":
            return GroupElement("reflection", self.j + other.j, m)
        return GroupElement("rotation", other.j - self.j, m)

    def inverse(self) -> "GroupElement":
        if self.is_reflection:
            return self
        return GroupElement("rotation", -self.j, self.m)

    def act_point(self, z):
        """Image ``z w`` of a point (scalar or array) under the plane action."""
        w = np.exp(2j * np.pi * self.j / self.m)
        z = np.asarray(z, dtype=complex)
        out = (z.conj() if self.is_reflection else z) * w
        return out[()] if out.ndim == 0 else out

    def __repr__(self):
        return f"{'sigma' if self.is_reflection else 'rho'}_{self.j}"


def identity(m: int) -> GroupElement:
    return GroupElement("rotation", 0, m)


def group_elements(m: int) -> list:
    """All ``2m`` elements: rotations first, then reflections."""
    return [GroupElement("rotation", j, m) for j in range(m)] + [
        GroupElement("reflection", j, m) for j in range(m)
    ]


def apply_group(w: GroupElement, f: VectorPoly, params: Params) -> VectorPoly:
    """Action of a group element on the standard module."""
    ell, j = params.ell, w.j
    t_out: dict = {}
    tb_out: dict = {}
    for (a, b), c in f.comp_t._terms.items():
        phase = params.omega_pow(j * (a - b + ell))
        if w.is_reflection:
            tb_out[(b, a)] = tb_out.get((b, a), 0) + phase * c
        else:
            t_out[(a, b)] = t_out.get((a, b), 0) + phase * c
    for (a, b), c in f.comp_tbar._terms.items():
        phase = params.omega_pow(j * (a - b - ell))
        if w.is_reflection:
            t_out[(b, a)] = t_out.get((b, a), 0) + phase * c
        else:
            tb_out[(a, b)] = tb_out.get((a, b), 0) + phase * c
    return VectorPoly(ScalarPoly(t_out), ScalarPoly(tb_out))


def sigma0(f: VectorPoly) -> VectorPoly:
    """``f(zbar, z, tbar, t)``."""
    return VectorPoly(f.comp_tbar.swap(), f.comp_t.swap())


def tau_matrix(w: GroupElement, params: Params) -> np.ndarray:
    """Matrix of ``f -> apply_group(w, f)`` on constants, basis ``(t, tbar)``.

    Columns hold the images of ``t`` and ``tbar``; for reflections this is
    ``[[0, w^-jl], [w^jl, 0]]``.
    """
    p = params.omega_pow(w.j * params.ell)
    q = params.omega_pow(-w.j * params.ell)
    if w.is_reflection:
        return np.array([[0, q], [p, 0]], dtype=complex)
    return np.array([[p, 0], [0, q]], dtype=complex)


def monomial_parity(a: int, b: int, component: str, params: Params) -> int:
    sign = 1 if component == "t" else -1
    return (a - b + sign * params.ell) % params.m


def m_parity(f: VectorPoly, params: Params):
    """Common m-parity of all monomials of ``f``, or ``None`` if mixed or zero."""
    found = {monomial_parity(a, b, comp, params) for a, b, comp, _ in f.terms()}
    if len(found) == 1:
        return found.pop()
    return None


def parity_components(f: VectorPoly, params: Params) -> dict:
    """Split ``f`` by m-parity: ``{r: f_r}``."""
    groups: dict = {}
    for a, b, comp, c in f.terms():
        groups.setdefault(monomial_parity(a, b, comp, params), []).append((a, b, comp, c))
    return {r: VectorPoly.from_terms(ts) for r, ts in sorted(groups.items())}


def evaluate(f: VectorPoly, z):
    """``(f1(z, zbar), f2(z, zbar))`` at a point or array of points."""
    return f.comp_t(z), f.comp_tbar(z)


def to_real_components(v):
    """``(g1, g2) -> (g1 + g2, i (g1 - g2))``, i.e. the coefficients on ``s1, s2``."""
    g1, g2 = v
    return g1 + g2, 1j * (g1 - g2)


def homogeneous_components(f: VectorPoly) -> list:
    """``[(degree, part), ...]`` sorted by degree; the parts sum to ``f``."""
    groups: dict = {}
    for a, b, comp, c in f.terms():
        groups.setdefault(a + b, []).append((a, b, comp, c))
    return [(d, VectorPoly.from_terms(ts)) for d, ts in sorted(groups.items())]


def random_vector_poly(rng: np.random.Generator, degree: int, homogeneous: bool = False) -> VectorPoly:
    """Dense random polynomial, coefficients uniform on the complex unit square."""
    terms = []
    lo = degree if homogeneous else 0
    for d in range(lo, degree + 1):
        for a in range(d + 1):
            for comp in COMPONENTS:
                re, im = rng.uniform(-1.0, 1.0, size=2)
                terms.append((a, d - a, comp, complex(re, im)))
    return VectorPoly.from_terms(terms)
