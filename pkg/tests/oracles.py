"""Independent oracles: sympy for exact algebra, brute force for numerics."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import sympy as sp
from scipy.optimize import least_squares
from scipy.special import erfinv
from scipy.stats import qmc
from sympy.polys.subresultants_qq_zz import sylvester

from p2dyn import _kernels
from p2dyn.polyalg import GaussRat, HPoly
from p2dyn.projgeom import fs_distance_vec

X, Y, Z = sp.symbols("x y z")
GENS = (X, Y, Z)


def to_sympy(p: HPoly):
    expr = sp.Integer(0)
    for e, c in p.items():
        coeff = sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)
        expr += coeff * X ** e[0] * Y ** e[1] * Z ** e[2]
    return sp.expand(expr)


def from_sympy(expr) -> HPoly:
    expr = sp.expand(expr)
    if expr == 0:
        return HPoly.zero()
    poly = sp.Poly(expr, *GENS)
    terms = []
    for e, c in poly.terms():
        re, im = c.as_real_imag()
        terms.append((e, GaussRat(sp_fraction(re), sp_fraction(im))))
    return HPoly(terms)


def sp_fraction(r):
    r = sp.Rational(r)
    return Fraction(int(r.p), int(r.q))


def sympy_gcd(p: HPoly, q: HPoly) -> HPoly:
    g = sp.gcd(sp.Poly(to_sympy(p), *GENS, domain="QQ_I"), sp.Poly(to_sympy(q), *GENS, domain="QQ_I"))
    return from_sympy(g.as_expr())


def sympy_resultant(p: HPoly, q: HPoly, var: int) -> HPoly:
    """Determinant of the Sylvester matrix built by sympy.

    ``sp.resultant`` flips the sign when the first argument has the lower
    degree (``sp.resultant(x + 1, x**3, x)`` gives 1, not -1), so the
    matrix is used directly.
    """
    m = sylvester(to_sympy(p), to_sympy(q), GENS[var], method=1)
    return from_sympy(sp.expand(m.det(method="berkowitz")))


def same_up_to_scalar(p: HPoly, q: HPoly) -> bool:
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    return p.monic() == q.monic()


# closed-form Green potential of the squaring map --------------------------


def squaring_green(W: np.ndarray) -> np.ndarray:
    """``log max|z_i| - log ||z||_2`` on the given representatives."""
    A = np.abs(W)
    return np.log(A.max(axis=-1)) - np.log(np.linalg.norm(W, axis=-1))


# brute-force indeterminacy search ----------------------------------------


def sphere_samples(n_log2: int = 20, seed: int = 0) -> np.ndarray:
    """Low-discrepancy points on the unit sphere of C^3 (2^n_log2 samples)."""
    u = qmc.Sobol(6, scramble=True, seed=seed).random_base2(n_log2)
    u = np.clip(u, 1e-12, 1 - 1e-12)
    g = np.sqrt(2.0) * erfinv(2 * u - 1)
    W = g[:, :3] + 1j * g[:, 3:]
    return W / np.linalg.norm(W, axis=1, keepdims=True)


def _residual(numeric, W: np.ndarray) -> np.ndarray:
    out = np.empty(len(W))
    for a in range(0, len(W), 1 << 16):
        F = _kernels.eval_lift(*numeric.kernel_args(), np.ascontiguousarray(W[a:a + (1 << 16)]))
        out[a:a + (1 << 16)] = np.linalg.norm(F, axis=1)
    return out


def _refine(numeric, w: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(w)))
    w = w / w[k]
    free = [i for i in range(3) if i != k]
    x0 = np.concatenate([w[free].real, w[free].imag])

    def embed(x):
        v = np.empty(3, dtype=complex)
        v[k] = 1.0
        v[free] = x[:2] + 1j * x[2:]
        return v / np.linalg.norm(v)

    def fun(x):
        F = _kernels.eval_lift(*numeric.kernel_args(), embed(x)[None])[0]
        return np.concatenate([F.real, F.imag])

    sol = least_squares(fun, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
    return embed(sol.x)


def grid_minima(f, n_log2: int = 20, keep: int = 64, separation: float = 0.05, seed: int = 0):
    """Refined local minima of ``||F(w)||`` seeded from the best spread-out sphere samples.

    Returns ``(points, residuals)`` of the refined candidates.
    """
    W = sphere_samples(n_log2, seed)
    r = _residual(f.numeric, W)
    order = np.argsort(r, kind="stable")
    seeds = []
    for idx in order:
        w = W[idx]
        if seeds and np.min(fs_distance_vec(np.array(seeds), w[None])) < separation:
            continue
        seeds.append(w)
        if len(seeds) >= keep:
            break
    pts = np.array([_refine(f.numeric, w) for w in seeds])
    return pts, _residual(f.numeric, pts), len(W)
