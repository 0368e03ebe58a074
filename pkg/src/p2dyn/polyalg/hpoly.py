"""Homogeneous polynomials in ``x, y, z`` with Gaussian-rational coefficients.

Terms are kept in a dict keyed by exponent triples.  The public ordering is
graded lex with ``x > y > z``; for homogeneous polynomials that is plain
lexicographic order on the exponent triple, so sorting keys in reverse gives
canonical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

from ..errors import InvalidLift
from .gaussrat import GaussRat, ONE, ZERO

Exps = Tuple[int, int, int]

VARS = ("x", "y", "z")


@dataclass(frozen=True)
class Monomial:
    coeff: GaussRat
    exps: Exps


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def dict_mul(p: Dict[Exps, GaussRat], q: Dict[Exps, GaussRat]) -> Dict[Exps, GaussRat]:
    """Product of two exponent-keyed dicts; integer accumulation, one normalization per term."""
    if not p or not q:
        return {}
    if len(p) > len(q):
        p, q = q, p
    qi = [(e[0], e[1], e[2], c.a, c.b, c.den) for e, c in q.items()]
    acc: Dict[Exps, list] = {}
    get = acc.get
    for (x1, y1, z1), c1 in p.items():
        a1, b1, d1 = c1.a, c1.b, c1.den
        for x2, y2, z2, a2, b2, d2 in qi:
            k = (x1 + x2, y1 + y2, z1 + z2)
            ra = a1 * a2 - b1 * b2
            rb = a1 * b2 + a2 * b1
            rd = d1 * d2
            cur = get(k)
            if cur is None:
                acc[k] = [ra, rb, rd]
            elif cur[2] == rd:
                cur[0] += ra
                cur[1] += rb
            else:
                L = _lcm(cur[2], rd)
                s, t = L // cur[2], L // rd
                cur[0] = cur[0] * s + ra * t
                cur[1] = cur[1] * s + rb * t
                cur[2] = L
    return {k: GaussRat._raw(*v) for k, v in acc.items() if v[0] or v[1]}


def dict_add(p, q, sign=1):
    out = dict(p)
    for e, c in q.items():
        cur = out.get(e)
        v = c if sign == 1 else -c
        if cur is not None:
            v = cur + v
        if v.is_zero():
            out.pop(e, None)
        else:
            out[e] = v
    return out


def dict_pow(p, n: int):
    result = {(0, 0, 0): ONE}
    base = p
    while n:
        if n & 1:
            result = dict_mul(result, base)
        n >>= 1
        if n:
            base = dict_mul(base, base)
    return result


class HPoly:
    """Immutable homogeneous polynomial in three variables.

    The zero polynomial has ``degree is None``.
    """

    __slots__ = ("_terms", "_degree", "_hash")

    def __init__(self, terms=None, degree: int | None = None):
        data: Dict[Exps, GaussRat] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for e, c in items:
                e = tuple(int(v) for v in e)
                if len(e) != 3 or min(e) < 0:
                    raise ValueError(f"bad exponent triple {e}")
                c = GaussRat.coerce(c)
                if c.is_zero():
                    continue
                if e in data:
                    c = data[e] + c
                    if c.is_zero():
                        del data[e]
                        continue
                data[e] = c
        degs = {sum(e) for e in data}
        if len(degs) > 1:
            raise InvalidLift(f"polynomial is not homogeneous (degrees {sorted(degs)})")
        if data:
            d = degs.pop()
            if degree is not None and degree != d:
                raise InvalidLift(f"declared degree {degree} but terms have degree {d}")
            degree = d
        else:
            degree = None
        self._terms = data
        self._degree = degree
        self._hash = None

    @classmethod
    def _from_dict(cls, data: Dict[Exps, GaussRat]) -> "HPoly":
        # trusted path: data already homogeneous and free of zero coefficients
        obj = object.__new__(cls)
        obj._terms = data
        obj._degree = sum(next(iter(data))) if data else None
        obj._hash = None
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls) -> "HPoly":
        return cls._from_dict({})

    @classmethod
    def constant(cls, c=1) -> "HPoly":
        c = GaussRat.coerce(c)
        return cls._from_dict({} if c.is_zero() else {(0, 0, 0): c})

    @classmethod
    def one(cls) -> "HPoly":
        return cls.constant(1)

    @classmethod
    def var(cls, i: int) -> "HPoly":
        e = [0, 0, 0]
        e[i] = 1
        return cls._from_dict({tuple(e): ONE})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "HPoly":
        return cls({tuple(exps): coeff})

    # accessors --------------------------------------------------------
    @property
    def degree(self) -> int | None:
        return self._degree

    @property
    def terms(self) -> Tuple[Monomial, ...]:
        return tuple(Monomial(self._terms[e], e) for e in sorted(self._terms, reverse=True))

    def as_dict(self) -> Dict[Exps, GaussRat]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return self._degree == 0

    def coeff(self, exps: Sequence[int]) -> GaussRat:
        return self._terms.get(tuple(exps), ZERO)

    def leading(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms)
        return Monomial(self._terms[e], e)

    def deg_in(self, var: int) -> int:
        """Degree in a single variable; -1 for the zero polynomial."""
        return max((e[var] for e in self._terms), default=-1)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def monomial_content(self) -> Exps:
        if not self._terms:
            return (0, 0, 0)
        keys = list(self._terms)
        return tuple(min(e[i] for e in keys) for i in range(3))

    # arithmetic -------------------------------------------------------
    def _check_same_degree(self, other: "HPoly"):
        if self._terms and other._terms and self._degree != other._degree:
            raise InvalidLift(f"cannot add degree {self._degree} and degree {other._degree}")

    def __add__(self, other: "HPoly") -> "HPoly":
        self._check_same_degree(other)
        return HPoly._from_dict(dict_add(self._terms, other._terms))

    def __sub__(self, other: "HPoly") -> "HPoly":
        self._check_same_degree(other)
        return HPoly._from_dict(dict_add(self._terms, other._terms, sign=-1))

    def __neg__(self) -> "HPoly":
        return HPoly._from_dict({e: -c for e, c in self._terms.items()})

    def __mul__(self, other) -> "HPoly":
        if isinstance(other, HPoly):
            return hp_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "HPoly":
        c = GaussRat.coerce(c)
        if c.is_zero():
            return HPoly.zero()
        return HPoly._from_dict({e: v * c for e, v in self._terms.items()})

    def __pow__(self, n: int) -> "HPoly":
        if n < 0:
            raise ValueError("negative power")
        return HPoly._from_dict(dict_pow(self._terms, n))

    def monic(self) -> "HPoly":
        """Scale so the leading graded-lex coefficient is 1 (zero stays zero)."""
        if not self._terms:
            return self
        return self.scale(self.leading().coeff.inverse())

    def derivative(self, var: int) -> "HPoly":
        out = {}
        for e, c in self._terms.items():
            k = e[var]
            if k:
                ne = list(e)
                ne[var] -= 1
                out[tuple(ne)] = c * k
        return HPoly._from_dict(out)

    def shift(self, exps: Sequence[int]) -> "HPoly":
        """Multiply by the monomial ``x^a y^b z^c``."""
        a, b, c = exps
        return HPoly._from_dict({(e[0] + a, e[1] + b, e[2] + c): v for e, v in self._terms.items()})

    def coeff_in(self, var: int, k: int) -> "HPoly":
        """Coefficient of ``var**k`` as a polynomial in the other two variables."""
        out = {}
        for e, c in self._terms.items():
            if e[var] == k:
                ne = list(e)
                ne[var] = 0
                out[tuple(ne)] = c
        return HPoly._from_dict(out)

    def substitute_linear(self, var: int, form: "HPoly") -> "HPoly":
        """Replace ``var`` by a linear form not involving it."""
        return hp_compose(self, tuple(form if i == var else HPoly.var(i) for i in range(3)))

    # evaluation -------------------------------------------------------
    def eval_exact(self, w: Sequence) -> GaussRat:
        w = [GaussRat.coerce(v) for v in w]
        total = ZERO
        for (a, b, c), coeff in self._terms.items():
            total = total + coeff * (w[0] ** a) * (w[1] ** b) * (w[2] ** c)
        return total

    def __call__(self, *w):
        return hp_eval(self, w)

    # comparison / printing -------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, HPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def to_text(self) -> str:
        return hp_text(self)

    def __str__(self):
        return hp_text(self)

    def __repr__(self):
        return f"HPoly({hp_text(self)!r})"


# operations -------------------------------------------------------------


def hp_mul(p: HPoly, q: HPoly) -> HPoly:
    """Exact product; a zero operand yields the zero polynomial."""
    return HPoly._from_dict(dict_mul(p._terms, q._terms))


def hp_compose(p: HPoly, F: Sequence[HPoly]) -> HPoly:
    """``p(F0, F1, F2)`` exactly.  All ``F_i`` must share one degree."""
    if len(F) != 3:
        raise InvalidLift("composition needs three components")
    degs = {f.degree for f in F if not f.is_zero()}
    if len(degs) > 1:
        raise InvalidLift(f"lift components have different degrees {sorted(degs)}")
    if p.is_zero():
        return HPoly.zero()
    powers = [_PowerCache(f._terms) for f in F]
    acc: Dict[Exps, GaussRat] = {}
    for (a, b, c), coeff in sorted(p._terms.items(), reverse=True):
        term = dict_mul(dict_mul(powers[0].get(a), powers[1].get(b)), powers[2].get(c))
        for e, v in term.items():
            v = v * coeff
            cur = acc.get(e)
            if cur is not None:
                v = cur + v
            if v.is_zero():
                acc.pop(e, None)
            else:
                acc[e] = v
    return HPoly._from_dict(acc)


class _PowerCache:
    def __init__(self, base):
        self.base = base
        self.cache = {0: {(0, 0, 0): ONE}, 1: base}

    def get(self, n):
        if n not in self.cache:
            half = self.get(n // 2)
            sq = dict_mul(half, half)
            self.cache[n] = dict_mul(sq, self.base) if n & 1 else sq
        return self.cache[n]


def hp_eval(p: HPoly, w: Sequence[complex]) -> complex:
    """Floating evaluation at a complex triple."""
    x, y, z = (complex(v) for v in w)
    total = 0j
    for (a, b, c), coeff in p._terms.items():
        total += complex(coeff) * (x ** a) * (y ** b) * (z ** c)
    return total


def hp_divexact(p: HPoly, g: HPoly) -> HPoly:
    """Exact quotient ``p / g``; raises ``ArithmeticError`` if ``g`` does not divide ``p``."""
    q, r = hp_divmod(p, g)
    if not r.is_zero():
        raise ArithmeticError("inexact polynomial division")
    return q


def hp_divmod(p: HPoly, g: HPoly):
    """Multivariate division by the leading term of ``g`` (graded lex)."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lt = max(g._terms)
    lc_inv = g._terms[lt].inverse()
    g_items = list(g._terms.items())
    rem = dict(p._terms)
    quot: Dict[Exps, GaussRat] = {}
    leftover: Dict[Exps, GaussRat] = {}
    while rem:
        e = max(rem)
        c = rem[e]
        if e[0] >= lt[0] and e[1] >= lt[1] and e[2] >= lt[2]:
            s = (e[0] - lt[0], e[1] - lt[1], e[2] - lt[2])
            f = c * lc_inv
            quot[s] = f
            for ge, gc in g_items:
                k = (ge[0] + s[0], ge[1] + s[1], ge[2] + s[2])
                v = rem.get(k, ZERO) - gc * f
                if v.is_zero():
                    rem.pop(k, None)
                else:
                    rem[k] = v
        else:
            leftover[e] = c
            del rem[e]
    return HPoly._from_dict(quot), HPoly._from_dict(leftover)


def jacobian_det(F: Sequence[HPoly]) -> HPoly:
    """Determinant of the 3x3 Jacobian matrix of the lift."""
    J = [[f.derivative(j) for j in range(3)] for f in F]
    t0 = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1])
    t1 = J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0])
    t2 = J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0])
    return t0 - t1 + t2


def _mono_text(e: Exps) -> str:
    parts = []
    for v, k in zip(VARS, e):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def hp_text(p: HPoly) -> str:
    """Canonical text: graded-lex terms, coefficients in ``a/b+c/d*i`` form."""
    if p.is_zero():
        return "0"
    out = []
    for m in p.terms:
        c = m.coeff
        mono = _mono_text(m.exps)
        negative = False
        if c.is_real() or c.re == 0:
            if c.re < 0 or (c.re == 0 and c.im < 0):
                negative = True
                c = -c
            ctxt = c.to_text()
        else:
            ctxt = f"({c.to_text()})"
        if mono:
            body = mono if c == ONE else f"{ctxt}*{mono}"
        else:
            body = ctxt
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


def numeric_arrays(p: HPoly):
    """Complex coefficient vector and ``(n_terms, 3)`` exponent array for kernels."""
    items = sorted(p._terms.items(), reverse=True)
    coef = np.array([complex(c) for _, c in items], dtype=np.complex128)
    exps = np.array([e for e, _ in items], dtype=np.int64).reshape(-1, 3)
    return coef, exps


def from_terms(terms: Iterable[Tuple[Exps, object]]) -> HPoly:
    return HPoly(list(terms))
