"""The rational map object and its symbolic iteration."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import BudgetExceeded, InvalidLift
from ..polyalg import HPoly, hp_compose, hp_divexact, hp_gcd_many, jacobian_det
from ..polyalg.gaussrat import GaussRat
from ..polyalg.hpoly import numeric_arrays
from .parse import parse_lift

Lift = Tuple[HPoly, HPoly, HPoly]

DEFAULT_DEGREE_BUDGET = 64
DEFAULT_EPS_IND = 1e-10


def reduce_lift(F: Sequence[HPoly]) -> Tuple[Lift, HPoly]:
    """Divide out the common factor of the three components.

    Returns ``(F / g, g)`` with ``g`` monic; ``g == 1`` for reduced input.
    """
    F = tuple(F)
    if all(f.is_zero() for f in F):
        raise InvalidLift("all components are zero")
    g = hp_gcd_many(F)
    if g.is_constant():
        return F, HPoly.one()
    return tuple(hp_divexact(f, g) for f in F), g


class NumericLift:
    """Flattened float lift consumed by the orbit kernels.

    ``numeric_only`` marks lifts built from floating coefficients, which have
    no exact counterpart and are excluded from symbolic queries.
    """

    def __init__(self, coef, exps, comp, numeric_only=False):
        self.coef = np.ascontiguousarray(coef, dtype=np.complex128)
        self.exps = np.ascontiguousarray(exps, dtype=np.int64).reshape(-1, 3)
        self.comp = np.ascontiguousarray(comp, dtype=np.int64)
        self.maxdeg = int(self.exps.max()) if self.exps.size else 0
        self.degree = int(self.exps.sum(axis=1).max()) if self.exps.size else 0
        self.numeric_only = numeric_only

    @classmethod
    def from_lift(cls, F: Sequence[HPoly]) -> "NumericLift":
        coefs, exps, comps = [], [], []
        for i, f in enumerate(F):
            c, e = numeric_arrays(f)
            coefs.append(c)
            exps.append(e)
            comps.append(np.full(len(c), i))
        return cls(np.concatenate(coefs), np.concatenate(exps), np.concatenate(comps))

    @classmethod
    def from_terms(cls, components) -> "NumericLift":
        """Float lift from three ``{(a, b, c): complex}`` dicts (numeric-only maps)."""
        coefs, exps, comps = [], [], []
        for i, terms in enumerate(components):
            for e, c in terms.items():
                coefs.append(complex(c))
                exps.append(tuple(e))
                comps.append(i)
        degs = {sum(e) for e in exps}
        if len(degs) != 1:
            raise InvalidLift("numeric lift must be homogeneous of a single degree")
        return cls(coefs, exps, comps, numeric_only=True)

    def kernel_args(self):
        return self.coef, self.exps, self.comp, self.maxdeg


@dataclass(frozen=True, eq=False)
class RationalMap:
    """Reduced lift of a rational self-map of P^2.

    Build with :func:`parse_map` or :meth:`from_lift`; the constructor assumes
    the lift is already reduced.
    """

    lift: Lift
    cofactor: HPoly = field(default_factory=HPoly.one)
    source: Optional[str] = None
    eps_ind: float = DEFAULT_EPS_IND

    @classmethod
    def from_lift(cls, F: Sequence[HPoly], source=None, eps_ind=DEFAULT_EPS_IND) -> "RationalMap":
        F = tuple(F)
        if len(F) != 3:
            raise InvalidLift("a lift has exactly three components")
        degs = {f.degree for f in F if not f.is_zero()}
        if not degs:
            raise InvalidLift("all components are zero")
        if len(degs) > 1:
            raise InvalidLift(f"components have different degrees {[f.degree for f in F]}")
        reduced, g = reduce_lift(F)
        return cls(reduced, g, source, eps_ind)

    @property
    def degree(self) -> int:
        return next(f.degree for f in self.lift if not f.is_zero())

    @property
    def reduced_on_input(self) -> bool:
        return not self.cofactor.is_constant()

    @cached_property
    def jacobian(self) -> HPoly:
        return jacobian_det(self.lift)

    @property
    def dominant(self) -> bool:
        return not self.jacobian.is_zero()

    @cached_property
    def numeric(self) -> NumericLift:
        return NumericLift.from_lift(self.lift)

    @cached_property
    def indeterminacy(self):
        from .indeterminacy import indeterminacy_set

        return indeterminacy_set(self)

    @property
    def notices(self) -> List[str]:
        out = []
        if self.reduced_on_input:
            out.append(f"common factor {self.cofactor} cancelled from the input lift")
        if not self.dominant:
            out.append("map is not dominant (Jacobian determinant vanishes identically)")
        return out

    def __call__(self, w) -> np.ndarray:
        """Unnormalized image of a complex triple (or ``(..., 3)`` array) under the lift."""
        from .. import _kernels

        W = np.asarray(w, dtype=np.complex128)
        out = _kernels.eval_lift(*self.numeric.kernel_args(), W.reshape(-1, 3))
        return out.reshape(W.shape)

    def to_text(self) -> str:
        return "[" + " : ".join(f.to_text() for f in self.lift) + "]"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RationalMap({self.to_text()!r})"


def parse_map(text: str, eps_ind: float = DEFAULT_EPS_IND) -> RationalMap:
    """Parse ``"[P0 : P1 : P2]"`` and reduce the lift."""
    return RationalMap.from_lift(parse_lift(text), source=text, eps_ind=eps_ind)


def same_map(f: RationalMap, g: RationalMap) -> bool:
    """True when the two reduced lifts agree up to one global scalar."""
    scale: Optional[GaussRat] = None
    for a, b in zip(f.lift, g.lift):
        if a.is_zero() != b.is_zero():
            return False
        if a.is_zero():
            continue
        if set(dict(a.items())) != set(dict(b.items())):
            return False
        e, ca = next(iter(a.items()))
        s = b.coeff(e) / ca
        if scale is None:
            scale = s
        elif s != scale:
            return False
        if a.scale(scale) != b:
            return False
    return True


def compose_maps(f: RationalMap, g: RationalMap, budget: int = DEFAULT_DEGREE_BUDGET) -> RationalMap:
    """Reduced lift of ``f o g``."""
    if f.degree * g.degree > budget:
        raise BudgetExceeded(
            f"composition degree {f.degree * g.degree} exceeds budget {budget}"
        )
    G = g.lift
    return RationalMap.from_lift([hp_compose(p, G) for p in f.lift], eps_ind=f.eps_ind)


def iterate_symbolic(f: RationalMap, n: int, budget: int = DEFAULT_DEGREE_BUDGET) -> RationalMap:
    """Reduced lift of ``f^n``, reducing after every composition."""
    return _iterates(f, n, budget)[-1]


def _iterates(f: RationalMap, n: int, budget: int) -> List[RationalMap]:
    if n < 1:
        raise ValueError("n must be a positive integer")
    out = [f]
    while len(out) < n:
        try:
            out.append(compose_maps(f, out[-1], budget))
        except BudgetExceeded as exc:
            exc.partial = out
            raise
    return out


@dataclass
class DegreeReport:
    degrees: List[int]
    verdict: str  # "AS" (bounded certificate) or "NotAS"
    witness: Optional[int]
    N: int
    iterates: List[RationalMap] = field(default_factory=list, repr=False)

    @property
    def label(self) -> str:
        if self.verdict == "AS":
            return f"AS up to {self.N}"
        return f"NotAS (witness n={self.witness})"

    @property
    def is_as(self) -> bool:
        return self.verdict == "AS"


def _report(iterates: List[RationalMap], N: int) -> DegreeReport:
    d = iterates[0].degree
    degrees = [g.degree for g in iterates]
    witness = next((n for n, k in enumerate(degrees, 1) if k < d ** n), None)
    return DegreeReport(degrees, "AS" if witness is None else "NotAS", witness, N, iterates)


def as_test(f: RationalMap, N: int, budget: int = DEFAULT_DEGREE_BUDGET) -> DegreeReport:
    """Degrees of ``f^n`` for ``n <= N`` and the bounded AS verdict.

    A budget overrun raises :class:`BudgetExceeded` whose ``partial`` holds the
    report for the iterates that were computed.
    """
    try:
        its = _iterates(f, N, budget)
    except BudgetExceeded as exc:
        partial = _report(exc.partial, len(exc.partial))
        raise BudgetExceeded(str(exc), partial=partial) from None
    return _report(its, N)
