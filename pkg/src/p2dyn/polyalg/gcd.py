"""Greatest common divisors of homogeneous polynomials.

The homogeneous gcd splits into a monomial part and the gcd of the
monomial-free cofactors.  The latter is computed on the dehomogenization
``z = 1`` as a bivariate gcd, using a primitive pseudo-remainder sequence in
``y`` over ``Q(i)[x]``; contents in ``Q(i)[x]`` are handled by the field
Euclidean algorithm.

Before paying for the full sequence, the cofactors are restricted to a plane
``z = a x + b y``.  If the restrictions are coprime binary forms, and neither
restriction vanishes identically, the original polynomials are coprime: any
nonconstant common factor restricts to a nonconstant common factor of the
binary forms.

When they are not coprime the restrictions still bound the gcd degree k.
The gcds of the restrictions to k + 1 lines through one point, scaled to
agree at that point, are then interpolated into a candidate form, which is
kept only if it divides both inputs exactly.  A common divisor of the
largest possible degree is the gcd.  The pseudo-remainder sequence remains
the fallback; on iterates of degree 16 or more it can take minutes.
"""

from __future__ import annotations

from typing import List, Sequence

from .gaussrat import GaussRat, ONE, ZERO
from .hpoly import HPoly, hp_divexact, hp_divmod

UPoly = List[GaussRat]  # dense, low degree first, no trailing zeros
BPoly = List[UPoly]  # indexed by y-degree, entries are polynomials in x


# univariate over Q(i) ---------------------------------------------------


def u_trim(p: UPoly) -> UPoly:
    while p and p[-1].is_zero():
        p.pop()
    return p


def u_deg(p: UPoly) -> int:
    return len(p) - 1


def u_scale(p: UPoly, c: GaussRat) -> UPoly:
    if c.is_zero():
        return []
    return [v * c for v in p]


def u_sub(p: UPoly, q: UPoly) -> UPoly:
    n = max(len(p), len(q))
    out = [(p[i] if i < len(p) else ZERO) - (q[i] if i < len(q) else ZERO) for i in range(n)]
    return u_trim(out)


def u_mul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return []
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return u_trim(out)


def u_divmod(p: UPoly, q: UPoly):
    if not q:
        raise ZeroDivisionError("division by zero polynomial")
    r = list(p)
    dq = u_deg(q)
    inv = q[-1].inverse()
    quot = [ZERO] * max(len(p) - dq, 0)
    while len(r) - 1 >= dq and r:
        k = len(r) - 1 - dq
        f = r[-1] * inv
        quot[k] = f
        for j, c in enumerate(q):
            r[j + k] = r[j + k] - c * f
        r.pop()
        u_trim(r)
    return u_trim(quot), r


def u_monic(p: UPoly) -> UPoly:
    if not p:
        return p
    return u_scale(p, p[-1].inverse())


def u_gcd(p: UPoly, q: UPoly) -> UPoly:
    a, b = list(p), list(q)
    while b:
        _, r = u_divmod(a, b)
        a, b = b, u_monic(r) if r else r
    return u_monic(a)


# bivariate: polynomials in y over Q(i)[x] --------------------------------


def b_trim(p: BPoly) -> BPoly:
    while p and not p[-1]:
        p.pop()
    return p


def b_content(p: BPoly) -> UPoly:
    g: UPoly = []
    for c in p:
        if c:
            g = u_gcd(g, c) if g else u_monic(c)
            if len(g) == 1:
                break
    return g


def b_primpart(p: BPoly) -> BPoly:
    cont = b_content(p)
    if len(cont) <= 1:
        return p
    return [u_divmod(c, cont)[0] if c else [] for c in p]


def b_prem(a: BPoly, b: BPoly) -> BPoly:
    """Pseudo-remainder ``lc(b)^(deg a - deg b + 1) * a mod b`` in ``y``."""
    r = [list(c) for c in a]
    db = len(b) - 1
    lc = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        k = len(r) - 1 - db
        lead = r[-1]
        r = [u_mul(c, lc) for c in r]
        for j, c in enumerate(b):
            r[j + k] = u_sub(r[j + k], u_mul(c, lead))
        r.pop()
        b_trim(r)
        e -= 1
    if e > 0:
        f = [ONE]
        for _ in range(e):
            f = u_mul(f, lc)
        r = [u_mul(c, f) for c in r]
    return b_trim(r)


def b_gcd(p: BPoly, q: BPoly) -> BPoly:
    if not p:
        return q
    if not q:
        return p
    cont = u_gcd(b_content(p), b_content(q))
    a, b = b_primpart(p), b_primpart(q)
    if len(a) < len(b):
        a, b = b, a
    while b and len(b) > 1:
        r = b_prem(a, b)
        a, b = b, (b_primpart(r) if r else r)
    g = a if not b else [[ONE]]
    return [u_mul(c, cont) for c in g]


# homogeneous <-> dense ----------------------------------------------------


def _dehomogenize(p: HPoly) -> BPoly:
    """``p(x, y, 1)`` as a list over powers of y."""
    out: BPoly = []
    for (a, b, _c), coeff in p.items():
        while len(out) <= b:
            out.append([])
        row = out[b]
        while len(row) <= a:
            row.append(ZERO)
        row[a] = row[a] + coeff
    return b_trim([u_trim(r) for r in out])


def _homogenize(g: BPoly) -> HPoly:
    k = max((j + len(c) - 1 for j, c in enumerate(g) if c), default=0)
    terms = {}
    for j, c in enumerate(g):
        for a, v in enumerate(c):
            if not v.is_zero():
                terms[(a, j, k - a - j)] = v
    return HPoly(terms)


def _restrict_to_plane(p: HPoly, alpha: int, beta: int) -> UPoly:
    """``p(t, 1, alpha t + beta)`` as a dense univariate polynomial in t."""
    d = p.degree
    lin = [GaussRat(beta), GaussRat(alpha)]
    powers = [[ONE]]
    for _ in range(d):
        powers.append(u_mul(powers[-1], lin))
    out = [ZERO] * (d + 1)
    for (a, _b, c), coeff in p.items():
        for j, v in enumerate(powers[c]):
            out[a + j] = out[a + j] + coeff * v
    return u_trim(out)


def _binary_gcd_degree(p: HPoly, q: HPoly, alpha: int, beta: int) -> int | None:
    """Degree of the gcd of the restrictions to ``z = alpha x + beta y``.

    Returns None when a restriction vanishes (no information).
    """
    up = _restrict_to_plane(p, alpha, beta)
    uq = _restrict_to_plane(q, alpha, beta)
    if not up or not uq:
        return None
    # forms of degree d restrict to u(t) = B(t, 1); a drop in degree means a factor y
    ep = p.degree - u_deg(up)
    eq = q.degree - u_deg(uq)
    return u_deg(u_gcd(up, uq)) + min(ep, eq)


_PLANES = ((2, 3), (-3, 5), (7, -2))


def gcd_degree_bound(p: HPoly, q: HPoly) -> int | None:
    """Smallest gcd degree seen on the test planes (an upper bound), or None."""
    seen = [k for k in (_binary_gcd_degree(p, q, a, b) for a, b in _PLANES) if k is not None]
    return min(seen, default=None)


def coprime_certificate(p: HPoly, q: HPoly) -> bool:
    """True when some plane restriction proves ``gcd(p, q) = 1``."""
    return gcd_degree_bound(p, q) == 0


def u_interpolate(xs: Sequence[int], ys: Sequence[GaussRat]) -> UPoly:
    """Coefficients of the polynomial through ``(xs[i], ys[i])`` (Newton form)."""
    n = len(xs)
    dd = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) * GaussRat(xs[i] - xs[i - j]).inverse()
    out: UPoly = u_trim([dd[-1]])
    for i in range(n - 2, -1, -1):
        out = u_sub(u_mul(out, [GaussRat(-xs[i]), ONE]), [-dd[i]])
    return u_trim(out)


def _interpolated_gcd(p: HPoly, q: HPoly, k: int) -> HPoly | None:
    """gcd of degree exactly ``k`` rebuilt from line restrictions, or None.

    The lines ``z = alpha x + beta y`` with fixed beta meet at ``[0:1:beta]``;
    scaling each restricted gcd to 1 there makes them restrictions of one
    form g.  With ``G(t, alpha) = g(t, 1, alpha t + beta)`` the coefficient of
    ``t^j`` has degree at most j in alpha.
    """
    for beta in (1, -2, 3, 5):
        alphas, gcds = [], []
        for alpha in range(-2 * k - 6, 2 * k + 7):
            up, uq = _restrict_to_plane(p, alpha, beta), _restrict_to_plane(q, alpha, beta)
            if not up or not uq:
                continue
            u = u_gcd(up, uq)
            if u_deg(u) + min(p.degree - u_deg(up), q.degree - u_deg(uq)) != k:
                continue  # the line meets extra common zeros
            if u[0].is_zero():
                break  # g vanishes at [0:1:beta]
            alphas.append(alpha)
            gcds.append(u_scale(u, u[0].inverse()))
            if len(alphas) == k + 1:
                break
        if len(alphas) < k + 1:
            continue
        terms = {}
        ok = True
        for j in range(k + 1):
            coeffs = u_interpolate(alphas, [u[j] if j < len(u) else ZERO for u in gcds])
            for i, c in enumerate(coeffs):
                if c.is_zero():
                    continue
                if i > j:
                    ok = False
                    break
                # c t^j alpha^i with t = x, alpha = (z - beta) / x
                zb = [[ONE]]
                for _ in range(i):
                    zb.append(u_mul(zb[-1], [GaussRat(-beta), ONE]))
                for l, v in enumerate(zb[i]):
                    e = (j - i, k - (j - i) - l, l)
                    if e[1] < 0:
                        ok = False
                        break
                    terms[e] = terms.get(e, ZERO) + c * v
            if not ok:
                break
        if not ok:
            continue
        g = HPoly(terms)
        if g.is_zero() or g.degree != k:
            continue
        if hp_divmod(p, g)[1].is_zero() and hp_divmod(q, g)[1].is_zero():
            return g
    return None


def hp_gcd(p: HPoly, q: HPoly) -> HPoly:
    """Monic greatest common divisor (leading graded-lex coefficient 1)."""
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    mp, mq = p.monomial_content(), q.monomial_content()
    mono_exps = tuple(min(a, b) for a, b in zip(mp, mq))
    mono = HPoly.monomial(mono_exps)
    pr = p if mp == (0, 0, 0) else hp_divexact(p, HPoly.monomial(mp))
    qr = q if mq == (0, 0, 0) else hp_divexact(q, HPoly.monomial(mq))
    if pr.is_constant() or qr.is_constant():
        return mono
    k = gcd_degree_bound(pr, qr)
    if k == 0:
        return mono
    if k is not None:
        g = _interpolated_gcd(pr, qr, k)
        if g is not None:
            return (mono * g).monic()
    g = b_gcd(_dehomogenize(pr), _dehomogenize(qr))
    return (mono * _homogenize(g)).monic()


def hp_gcd_many(polys: Sequence[HPoly]) -> HPoly:
    g = HPoly.zero()
    for f in polys:
        g = hp_gcd(g, f)
        if g.is_constant():
            return HPoly.one()
    return g
