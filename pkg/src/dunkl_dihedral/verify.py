"""Identity checks run by ``verify`` and the acceptance tests.

Every ``check_*`` function returns one or more :class:`Check` records; the
error metric is ``computed`` and the target is ``expected`` (usually 0).
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import dunkl, forms, harmonic, quadrature, weight
from .polyalg import (
    Z,
    distance,
    evaluate,
    group_elements,
    m_parity,
    random_vector_poly,
    sigma0,
)
from .report import Check, VerifyReport
from .scalars import Params

TOLERANCES = {
    "operator_oracle": 1e-10,
    "product_rule": 1e-11,
    "harmonicity": 1e-10,
    "q_closed_form": 1e-10,
    "q_at_one": 1e-11,
    "closed_norms": 1e-9,
    "orthogonal_gram": 1e-9,
    "exceptional_coupling": 1e-9,
    "coupling_lower_degree": 1e-9,
    "wronskian": 1e-12,
    "connection": 1e-10,
    "h_identity": 1e-13,
    "mh_involution": 1e-13,
    "det_k": 1e-12,
    "spin_normalization": 1e-8,
    "g1_integral": 1e-6,
    "reflection_integrals": 1e-8,
    "integral_vs_algebra": 1e-6,
    "circle_chamber_sum": 1e-6,
    "equivariance": 1e-11,
    "parity_vanishing": 1e-8,
    "boundary_exponent": 0.05,
}
ZERO_FLOOR = 1e-8


def _rel(err, scale):
    return err / scale if scale else err


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        out = fn(*args, **kwargs)
        elapsed = time.perf_counter() - start
        checks = out if isinstance(out, list) else [out]
        for c in checks:
            c.seconds = elapsed / len(checks)
        return out

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _tol(name, overrides):
    return (overrides or {}).get(name, TOLERANCES[name])


def _bound(name, value, overrides, anchor, expected=0.0):
    tol = _tol(name, overrides)
    return Check(name, anchor, value, expected, tol, value <= tol)


# --------------------------------------------------------------------------
# operators
# --------------------------------------------------------------------------


def random_polys(params: Params, rng: np.random.Generator, count: int, degree: int = 10):
    return [random_vector_poly(rng, int(rng.integers(0, degree + 1))) for _ in range(count)]


@_timed
def check_operator_oracle(params, polys, rng, points=20, tol=None):
    """Closed-form D, Dbar against the pointwise difference quotients."""
    worst = 0.0
    for f in polys:
        z = dunkl.random_off_mirror_points(rng, points, params.m)
        for sym, oracle in (
            (dunkl.apply_D(f, params), dunkl.pointwise_D_oracle),
            (dunkl.apply_Dbar(f, params), dunkl.pointwise_Dbar_oracle),
        ):
            o = np.array(oracle(f, z, params))
            e = np.array(evaluate(sym, z))
            scale = np.max(np.abs(o))
            worst = max(worst, _rel(float(np.max(np.abs(o - e))), scale))
    return _bound("operator_oracle", worst, tol, "D, Dbar vs difference quotients")


@_timed
def check_product_rule(params, polys, tol=None):
    """``D(z f) = z D f + f + kappa T_z f``."""
    worst = 0.0
    for f in polys:
        lhs = dunkl.apply_D(Z * f, params)
        rhs = Z * dunkl.apply_D(f, params) + f + params.kappa * dunkl.T_z(f, params)
        worst = max(worst, _rel(distance(lhs, rhs), max(lhs.max_abs(), rhs.max_abs())))
    return _bound("product_rule", worst, tol, "D(z f) = (z D + 1) f + kappa T_z f")


# --------------------------------------------------------------------------
# harmonic basis
# --------------------------------------------------------------------------


def constructed_basis(params: Params, max_degree: int):
    """Every constructed harmonic polynomial up to ``max_degree`` with a name."""
    out = {}
    for n in range(max_degree + 1):
        for style in ("raw", "orthogonal"):
            for lab in harmonic.degree_labels(n, params, style):
                out[lab.name] = harmonic.label_poly(lab, params)
        for fam in (1, 2):
            if n >= 1 and harmonic.is_exceptional(fam, n, params):
                out[f"f{fam}[{n}]"] = harmonic.f_basis(fam, n, params)
    k = 0
    while params.m * (k + 1) + 1 <= max_degree:
        for fam in (1, 2):
            out[f"P{fam}[{k}]"] = harmonic.big_p(fam, k, params)
        k += 1
    return out


@_timed
def check_harmonicity(params, max_degree, tol=None):
    worst = 0.0
    for f in constructed_basis(params, max_degree).values():
        worst = max(worst, _rel(dunkl.laplacian(f, params).max_abs(), f.coef_norm()))
    return _bound("harmonicity", worst, tol, "Delta p = 0 on the constructed basis")


@_timed
def check_q_polynomials(params, n_max=12, tol=None):
    worst_coeff = 0.0
    worst_one = 0.0
    for lam in (params.lambda1, params.lambda2):
        for kind in (1, 2):
            for n in range(n_max + 1):
                q = harmonic.q_poly(kind, n, params.kappa, lam)
                for j in range(n + 1):
                    a = q.coef(n - j, j).real
                    b = harmonic.q_coeff_closed(kind, n, j, params.kappa, lam)
                    worst_coeff = max(worst_coeff, abs(a - b) / max(1.0, abs(b)))
                total = sum(c for _, c in q.items()).real
                exact = harmonic.q_at_one(kind, n, params.kappa, lam)
                worst_one = max(worst_one, abs(total - exact) / max(1.0, abs(exact)))
    return [
        _bound("q_closed_form", worst_coeff, tol, "Q recurrence vs 4F3 coefficients"),
        _bound("q_at_one", worst_one, tol, "Q(1, 1) vs Pochhammer ratio"),
    ]


# --------------------------------------------------------------------------
# forms
# --------------------------------------------------------------------------


def norm_labels(params: Params, max_degree: int):
    """Labels covering all five closed-norm families."""
    labs = harmonic.harmonic_labels(max_degree, params, "raw")
    for n in range(1, max_degree + 1):
        for fam in (1, 2):
            if harmonic.is_exceptional(fam, n, params):
                labs += [
                    harmonic.HarmonicLabel(fam, n, combo=c) for c in ("sum", "diff", "f")
                ]
    return labs


@_timed
def check_closed_norms(params, max_degree, tol=None):
    worst = 0.0
    for lab in norm_labels(params, max_degree):
        p = harmonic.label_poly(lab, params)
        closed = forms.closed_norm(lab, params)
        worst = max(worst, _rel(abs(forms.pairing(p, p, params) - closed), abs(closed)))
    return _bound("closed_norms", worst, tol, "<p, p> vs closed norm formulas")


@_timed
def check_gram_structure(params, max_degree, tol=None):
    worst_ratio = 0.0
    worst_coupling = 0.0
    worst_lower = 0.0
    for n in range(max_degree + 1):
        g = forms.label_gram(harmonic.degree_labels(n, params, "orthogonal"), params)
        worst_ratio = max(worst_ratio, g.offdiagonal_ratio())
        raw_labels = harmonic.degree_labels(n, params, "raw")
        raw = forms.label_gram(raw_labels, params).entries
        expected = np.diag(np.diag(raw))
        for fam in (1, 2):
            if n >= 1 and harmonic.is_exceptional(fam, n, params):
                i = 2 * (fam - 1)
                c = forms.exceptional_coupling(fam, n, params)
                expected[i, i + 1] = expected[i + 1, i] = c
                # the same coupling read off one degree lower: -2 m kappa <p/z, p/z>
                p = harmonic.small_p(fam, n, params)
                q = harmonic.divide_by_z(p)
                lower = -2 * params.m * params.kappa * forms.pairing(q, q, params)
                got = forms.pairing(sigma0(p), p, params)
                worst_lower = max(worst_lower, abs(got - lower) / abs(raw[i, i]))
        d = np.sqrt(np.abs(np.diag(raw)))
        dev = np.abs(raw - expected) / np.outer(d, d)
        worst_coupling = max(worst_coupling, float(dev.max()))
    return [
        _bound("orthogonal_gram", worst_ratio, tol, "orthogonal basis Gram is diagonal"),
        _bound("exceptional_coupling", worst_coupling, tol,
               "raw basis: only the -m kappa/n coupling off the diagonal"),
        _bound("coupling_lower_degree", worst_lower, tol,
               "<sigma0 p, p> = -2 m kappa <p/z, p/z>"),
    ]


@_timed
def check_positivity(params, max_degree, tol=None):
    """Positive definite inside ``|kappa| < ell/m``; a negative norm outside."""
    labs = harmonic.harmonic_labels(max_degree, params)
    g = forms.label_gram(labs, params)
    diag = np.diag(g.entries).real
    scale = np.abs(diag)
    equilibrated = np.linalg.eigvalsh(g.entries / np.sqrt(np.outer(scale, scale)))[0]
    inside = params.positive_regime
    out = [Check("gram_positive_definite", "form positive iff |kappa| < ell/m",
                 equilibrated, 0.0, 0.0, g.is_positive_definite(), expect_pass=inside)]
    if not inside:
        worst = min(forms.closed_norm(lab, params) for lab in labs)
        out.append(Check("negative_norm_present", "some closed norm < 0 outside the regime",
                         worst, 0.0, 0.0, worst < 0))
    return out


# --------------------------------------------------------------------------
# weight
# --------------------------------------------------------------------------


@_timed
def check_weight_identities(params, tol=None):
    k, d = params.kappa, params.delta
    v = np.linspace(0.001, 0.999, 200)
    a1, a2 = weight.f12_pair(k, d, v)
    b1, b2 = weight.f12_pair(-k, d, v)
    wr = float(np.max(np.abs(a1 * b1 + a2 * b2 - 1)))

    # connection-formula branch against the raw series past v = 1/2
    hi = np.linspace(0.5, 0.8, 61)[1:]
    c1, c2 = weight.f12_pair(k, d, hi)
    s1, s2 = weight.f12_series(k, d, hi)
    conn = float(max(np.max(np.abs(c1 - s1)), np.max(np.abs(c2 - s2))))

    s = weight.connection_sine(k, d)
    hid = abs(weight.H(k, d) * weight.H(-k, d) + s * s - 1)
    mh = weight.M_H(k, d) @ weight.M_SIGMA
    inv = float(np.max(np.abs(mh @ mh - np.eye(2))))

    phi = np.linspace(0.01, math.pi - 0.01, 64)
    dets = np.linalg.det(weight.K_real(phi, params))
    closed = weight.det_K_closed(params)
    det_err = float(max(np.ptp(dets), np.max(np.abs(dets - closed))))
    return [
        _bound("wronskian", wr, tol, "f1 f1' + f2 f2' = 1"),
        _bound("connection", conn, tol, "v <-> 1 - v connection formulas"),
        _bound("h_identity", hid, tol, "H(k) H(-k) + (sin pi d / cos pi k)^2 = 1"),
        _bound("mh_involution", inv, tol, "(M_H M_sigma)^2 = I"),
        _bound("det_k", det_err, tol, "det K_real constant and closed form"),
    ]


@_timed
def check_normalization(params, angular, singular, tol=None):
    spin = quadrature.spin_normalization(params, angular)
    g1 = quadrature.g1_integral(params, singular)
    g1_exact = quadrature.g1_integral_closed(params)
    got = quadrature.f12_reflection_integrals(params.delta, singular)
    want = quadrature.f12_reflection_closed(params.delta)
    refl = max(abs(a - b) for a, b in zip(got, want))
    return [
        _bound("spin_normalization", abs(spin - 2.0), tol, "<t, t>_S = 2"),
        _bound("g1_integral", abs(g1 - g1_exact) / g1_exact, tol,
               "int G1 (v(1-v))^(-1/2) = 2 pi cos(pi d)/cos(pi k)"),
        _bound("reflection_integrals", refl, tol, "kappa = 0 reflection integrals"),
    ]


# --------------------------------------------------------------------------
# quadrature against algebra
# --------------------------------------------------------------------------


def _basis(params, max_degree):
    labs = harmonic.harmonic_labels(max_degree, params)
    polys = [harmonic.label_poly(lab, params) for lab in labs]
    scale = np.array([math.sqrt(abs(forms.closed_norm(lab, params))) for lab in labs])
    return labs, polys, scale


@_timed
def check_integral_vs_algebra(params, max_degree, angular, tol=None):
    """Quadrature Gram vs algebraic Gaussian Gram, plus the chamber-sum path.

    Entries are compared after scaling by ``sqrt(|<p_i,p_i>| |<p_j,p_j>|)``;
    an entry passes if its scaled error is within the relative tolerance of
    the scaled value or under the absolute floor.
    """
    labs, polys, scale = _basis(params, max_degree)
    outer = np.outer(scale, scale)
    alg = forms.gram(polys, params, "gaussian").entries / outer
    num = quadrature.gram_numeric(polys, params, angular) / outer
    tol_rel = _tol("integral_vs_algebra", tol)
    err = np.abs(num - alg)
    excess = err - np.maximum(tol_rel * np.abs(alg), ZERO_FLOOR)
    i, j = np.unravel_index(np.argmax(excess), excess.shape)
    worst = float(err[i, j] / max(abs(alg[i, j]), ZERO_FLOOR / tol_rel))
    first = Check("integral_vs_algebra", "quadrature Gram = algebraic Gaussian Gram",
                  worst, 0.0, tol_rel, bool(np.all(excess <= 0)))

    tol_circ = _tol("circle_chamber_sum", tol)
    worst_c = 0.0
    ok = True
    for i, f in enumerate(polys):
        for j, g in enumerate(polys):
            if labs[i].n != labs[j].n:
                continue
            n = labs[i].n
            radial = 2.0**n * math.factorial(n)
            s_num = quadrature.circle_pairing_numeric(f, g, params, angular) * radial
            s_alg = forms.circle_pairing(f, g, params) * radial
            ref = alg[i, j] * outer[i, j]
            for val in (s_num, s_alg):
                e = abs(val - ref) / outer[i, j]
                worst_c = max(worst_c, e)
                ok &= e <= max(tol_circ * abs(alg[i, j]), ZERO_FLOOR)
    second = Check("circle_chamber_sum", "chamber-sum circle pairing matches both",
                   worst_c, 0.0, tol_circ, ok)
    return [first, second]


@_timed
def check_equivariance(params, rng, max_degree, angular, points=20, tol=None):
    worst = 0.0
    z = dunkl.random_off_mirror_points(rng, points, params.m, margin=1e-3)
    for x in z:
        base = weight.K_at(x, params)
        scale = float(np.max(np.abs(base)))
        worst = max(worst, float(np.max(np.abs(weight.K_at(2 * x, params) - base))) / scale)
        for w in group_elements(params.m):
            moved = weight.K_at(w.act_point(x), params)
            err = float(np.max(np.abs(moved - weight.conjugate_by(base, w, params))))
            worst = max(worst, err / scale)
    first = _bound("equivariance", worst, tol, "K(x w) = T(w) K(x) T(w)^*")

    labs, polys, scale = _basis(params, max_degree)
    par = [m_parity(p, params) for p in polys]
    num = quadrature.gram_numeric(polys, params, angular) / np.outer(scale, scale)
    mask = np.array([[a != b for b in par] for a in par])
    worst_p = float(np.max(np.abs(num[mask]), initial=0.0))
    second = _bound("parity_vanishing", worst_p, tol, "distinct m-parities are orthogonal")
    return [first, second]


@_timed
def check_boundary(params, tol=None):
    res = weight.boundary_residuals(params)
    if params.kappa == 0:
        worst = float(max(res["k12"].max(), res["q"].max()))
        return [Check("boundary_vanishing", "K12 and q vanish identically at kappa = 0",
                      worst, 0.0, 1e-14, worst <= 1e-14)]
    mono = res["k12_monotone"] and res["q_monotone"]
    dev = max(abs(res["k12_exponent"] - res["expected_exponent"]),
              abs(res["q_exponent"] - res["expected_exponent"]))
    return [
        Check("boundary_monotone", "wall residuals decrease toward the walls",
              float(min(res["k12"].min(), res["q"].min())), 0.0, 0.0, mono),
        _bound("boundary_exponent", dev, tol, "decay exponent 1 - 2|kappa|"),
    ]


# --------------------------------------------------------------------------
# driver
# --------------------------------------------------------------------------


def run_verify(params: Params, degree=None, angular_level=quadrature.DEFAULT_ANGULAR_LEVEL,
               singular_level=quadrature.DEFAULT_SINGULAR_LEVEL, seed=0, random_count=50,
               tol_override=None) -> VerifyReport:
    """Run every check for one parameter set."""
    params.require_integrable()
    degree = 2 * params.m + 2 if degree is None else degree
    rng = np.random.default_rng(seed)
    tol = tol_override or {}
    angular = quadrature.AngularRule.build(params.m, angular_level)
    singular = quadrature.SingularRule.build(singular_level)
    report = VerifyReport(
        params={"m": params.m, "ell": params.ell, "kappa": params.kappa},
        seed=seed,
        settings={"degree": degree, "angular_level": angular_level,
                  "singular_level": singular_level, "random_polys": random_count},
    )
    polys = random_polys(params, rng, random_count)
    steps = [
        lambda: check_operator_oracle(params, polys, rng, tol=tol),
        lambda: check_product_rule(params, polys, tol=tol),
        lambda: check_harmonicity(params, degree, tol=tol),
        lambda: check_q_polynomials(params, tol=tol),
        lambda: check_closed_norms(params, degree, tol=tol),
        lambda: check_gram_structure(params, degree, tol=tol),
        lambda: check_positivity(params, degree, tol=tol),
        lambda: check_weight_identities(params, tol=tol),
        lambda: check_normalization(params, angular, singular, tol=tol),
        lambda: check_integral_vs_algebra(params, degree, angular, tol=tol),
        lambda: check_equivariance(params, rng, degree, angular, tol=tol),
        lambda: check_boundary(params, tol=tol),
    ]
    for step in steps:
        out = step()
        for c in out if isinstance(out, list) else [out]:
            report.add(c)
    return report


