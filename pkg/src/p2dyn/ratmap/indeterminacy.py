"""Common zeros of the three lift components.

Work in generic integer coordinates ``w = A u`` so that no zero sits at the
elimination direction.  Two generic combinations of the components are
coprime because the lift is reduced, so their resultant in ``u2`` is a
nonzero binary form whose roots contain the projections of all common zeros.
Its squarefree part is solved numerically, each root line is intersected
with the first combination, and candidates are certified on the unit sphere.
Points with small Gaussian-rational coordinates that vanish exactly are
flagged as exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..polyalg import HPoly, hp_compose, resultant_eliminate
from ..polyalg.gaussrat import GaussRat
from ..polyalg.gcd import u_divmod, u_gcd, u_trim
from ..projgeom import ProjPoint, fs_distance, normalize_point

# columns of A; the last column is the elimination direction
_TRANSFORMS = (
    ((1, 0, 2), (0, 1, 3), (0, 0, 5)),
    ((1, 2, 3), (0, 1, -7), (1, 0, 4)),
    ((3, 1, -2), (1, -4, 5), (2, 1, 7)),
    ((1, 5, 2), (-3, 1, 11), (4, 2, 1)),
)
_COMBOS = ((1, 2, -3), (4, -1, 5), (-2, 7, 3))

CANDIDATE_RESIDUAL = 1e-6
DEDUP_FS = 1e-8
MAX_DENOMINATOR = 1024


@dataclass(frozen=True)
class IndPoint:
    point: ProjPoint
    residual: float
    exact: bool
    certified: bool = True
    exact_coords: Optional[Tuple[GaussRat, GaussRat, GaussRat]] = None

    def to_text(self) -> str:
        if self.exact_coords is not None:
            return "[" + ":".join(c.to_text() for c in self.exact_coords) + "]"
        return "[" + ":".join(_ctext(c) for c in self.point.coords) + "]"


def _ctext(c: complex) -> str:
    re = 0.0 if abs(c.real) < 1e-14 else c.real
    im = 0.0 if abs(c.imag) < 1e-14 else c.imag
    if im == 0.0:
        return f"{re:.12g}"
    return f"{re:.12g}{im:+.12g}*i"


def _linear_forms(A) -> Tuple[HPoly, HPoly, HPoly]:
    # w_i = sum_j A[i][j] u_j
    return tuple(
        HPoly._from_dict({tuple(int(k == j) for k in range(3)): GaussRat(A[i][j])
                          for j in range(3) if A[i][j]})
        for i in range(3)
    )


def _combine(Q: Sequence[HPoly], coeffs) -> HPoly:
    out = {}
    for q, c in zip(Q, coeffs):
        for e, v in q.items():
            out[e] = out.get(e, GaussRat(0)) + v * c
    return HPoly._from_dict({e: v for e, v in out.items() if not v.is_zero()}) if out else HPoly.zero()


def _binary_roots(R: HPoly) -> List[Tuple[complex, complex]]:
    """Projective roots ``(u0, u1)`` of the squarefree part of a binary form."""
    D = R.degree
    r = u_trim([R.coeff((D - k, k, 0)) for k in range(D + 1)])
    out = []
    if len(r) - 1 < D:
        out.append((0j, 1 + 0j))
    if len(r) > 1:
        dr = u_trim([r[k] * k for k in range(1, len(r))])
        g = u_gcd(r, dr)
        sf, _ = u_divmod(r, g) if len(g) > 1 else (r, [])
        coeffs = [complex(c) for c in reversed(sf)]
        for t in np.roots(coeffs):
            out.append((1 + 0j, complex(t)))
    return out


def _cluster(values: np.ndarray, tol: float) -> List[complex]:
    """Average roots lying within ``tol`` of each other; multiple roots split
    into small symmetric clusters whose centroid is accurate."""
    left = list(values)
    out = []
    while left:
        v = left.pop(0)
        group = [v]
        rest = []
        for w in left:
            (group if abs(w - v) < tol * (1 + abs(v)) else rest).append(w)
        left = rest
        out.append(complex(np.mean(group)))
    return out


def _residual(F: Sequence[HPoly], w: np.ndarray) -> float:
    return max(abs(p(*w)) for p in F if not p.is_zero())


def _rationalize(w: np.ndarray) -> Optional[Tuple[GaussRat, GaussRat, GaussRat]]:
    k = int(np.argmax(np.abs(w)))
    v = w / w[k]
    out = []
    for c in v:
        re = Fraction(float(c.real)).limit_denominator(MAX_DENOMINATOR)
        im = Fraction(float(c.imag)).limit_denominator(MAX_DENOMINATOR)
        if abs(float(re) - c.real) > 1e-7 or abs(float(im) - c.imag) > 1e-7:
            return None
        out.append(GaussRat(re, im))
    return tuple(out)


def _newton_polish(F: Sequence[HPoly], w: np.ndarray, steps: int = 8) -> np.ndarray:
    """Gauss-Newton on the affine chart of the largest coordinate."""
    k = int(np.argmax(np.abs(w)))
    others = [i for i in range(3) if i != k]
    x = w / w[k]
    grads = [[p.derivative(j) for j in others] for p in F]
    for _ in range(steps):
        r = np.array([p(*x) for p in F])
        J = np.array([[g(*x) for g in row] for row in grads])
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        x = x.copy()
        x[others] += step
        if np.linalg.norm(step) < 1e-16:
            break
    return x / np.linalg.norm(x)


def _certify(F: Sequence[HPoly], w: np.ndarray, eps: float) -> Optional[IndPoint]:
    w = w / np.linalg.norm(w)
    res = _residual(F, w)
    if not res < CANDIDATE_RESIDUAL:
        return None
    exact = _rationalize(w)
    if exact is not None and all(p.eval_exact(exact).is_zero() for p in F):
        ew = np.array([complex(c) for c in exact])
        pt = normalize_point(ew)
        return IndPoint(pt, _residual(F, pt.vec), True, True, exact)
    polished = _newton_polish(F, w)
    if _residual(F, polished) < res:
        w, res = polished, _residual(F, polished)
    pt = normalize_point(w)
    res = _residual(F, pt.vec)
    return IndPoint(pt, res, False, res < eps)


def _solve(F: Sequence[HPoly], A, eps: float) -> Optional[List[IndPoint]]:
    lin = _linear_forms(A)
    Q = [hp_compose(p, lin) if not p.is_zero() else p for p in F]
    G1, G2 = _combine(Q, _COMBOS[0]), _combine(Q, _COMBOS[1])
    d = G1.degree
    if G1.is_zero() or G2.is_zero() or G1.deg_in(2) < d or G2.deg_in(2) < d:
        return None
    R = resultant_eliminate(G1, G2, 2)
    if R.is_zero():
        return None
    Am = np.array(A, dtype=np.complex128)
    found: List[IndPoint] = []
    for u0, u1 in _binary_roots(R):
        coeffs = [G1.coeff_in(2, k)(u0, u1, 0j) for k in range(d, -1, -1)]
        for s in _cluster(np.roots(coeffs), 1e-3):
            ip = _certify(F, Am @ np.array([u0, u1, s]), eps)
            if ip is not None:
                found.append(ip)
    return found


def _dedup(points: List[IndPoint]) -> List[IndPoint]:
    points = sorted(points, key=lambda p: (not p.exact, p.residual))
    out: List[IndPoint] = []
    for p in points:
        if all(fs_distance(p.point, q.point) >= DEDUP_FS for q in out):
            out.append(p)
    return sorted(out, key=lambda p: tuple((round(-abs(c), 9), round(np.angle(c), 9)) for c in p.point.coords))


def indeterminacy_set(f, eps: Optional[float] = None) -> List[IndPoint]:
    """Indeterminacy points of a reduced lift (``f`` a RationalMap or a lift triple)."""
    F = tuple(f.lift) if hasattr(f, "lift") else tuple(f)
    eps = getattr(f, "eps_ind", 1e-10) if eps is None else eps
    live = [p for p in F if not p.is_zero()]
    if not live or live[0].degree == 0:
        return []
    for A in _TRANSFORMS:
        found = _solve(F, A, eps)
        if found is not None:
            return _dedup(found)
    raise RuntimeError("no generic elimination direction found")
