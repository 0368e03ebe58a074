"""Escape-rate Green potential, sampled v-fields and a discrete supp(T) mask.

Orbits start at unit vectors, so the escape sum

    v(p) = sum_{k < N} d^-(k+1) log ||F(w_k)||

is the potential of T relative to the Fubini-Study form with potential
``log ||z||`` (Euclidean norm).  Green operations refuse maps that fail the
bounded AS test.
"""

from __future__ import annotations

import json
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .errors import DegreeTooSmall, NotAS
from .polyalg import HPoly
from .projgeom import Slice, as_vec
from .ratmap import DEFAULT_DEGREE_BUDGET, DegreeReport, as_test

OK, NEAR_IND, DIVERGED = 0, 1, 2
STATUS_NAMES = {OK: "OK", NEAR_IND: "NearIndeterminacy", DIVERGED: "Diverged"}

DEFAULT_TAU = 0.5

_as_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def as_depth(d: int, budget: int = DEFAULT_DEGREE_BUDGET, cap: int = 4) -> int:
    """Deepest iterate the AS precondition checks within the degree budget."""
    n = 1
    while n < cap and d ** (n + 1) <= budget:
        n += 1
    return n


def require_as(f, n0: Optional[int] = None) -> DegreeReport:
    """Bounded AS certificate for ``f`` or raise :class:`NotAS` / :class:`DegreeTooSmall`."""
    if f.degree < 2:
        raise DegreeTooSmall(f"map has degree {f.degree}; Green potentials need degree at least 2")
    n0 = as_depth(f.degree) if n0 is None else n0
    rep = _as_cache.get(f)
    if rep is None or rep.N < n0:
        rep = as_test(f, n0)
        _as_cache[f] = rep
    if not rep.is_as:
        raise NotAS(f"map is not algebraically stable: deg f^{rep.witness} = "
                    f"{rep.degrees[rep.witness - 1]} < {f.degree}^{rep.witness}")
    return rep


def _weights(d: int, N: int) -> np.ndarray:
    return float(d) ** -np.arange(1.0, N + 1.0)


def _escape(f, W: np.ndarray, N: int):
    """v, status, n_used and max |step log| for unit vectors ``W`` (shape (M, 3))."""
    args = f.numeric.kernel_args()
    _, logs, death = _kernels.iterate(*args, np.ascontiguousarray(W), N, f.eps_ind)
    w = _weights(f.degree, N)
    with np.errstate(invalid="ignore"):
        v = np.where(np.isnan(logs), 0.0, logs) @ w
        maxlog = np.nanmax(np.abs(logs), axis=1, initial=0.0) if N else np.zeros(len(W))
    status = np.full(len(W), OK, dtype=np.int8)
    status[death > 0] = NEAR_IND
    bad = ~np.isfinite(v) & (death == 0)
    status[bad] = DIVERGED
    v[status != OK] = np.nan
    n_used = np.where(death > 0, death - 1, N)
    return v, status, n_used, maxlog


def green_potential(f, p, N: int) -> Tuple[float, str]:
    """``(v(p), status)`` from ``N`` steps of the normalized orbit."""
    require_as(f)
    v, status, _, _ = _escape(f, as_vec(p)[None], N)
    return float(v[0]), STATUS_NAMES[int(status[0])]


@dataclass
class GreenField:
    slice: Slice
    v: np.ndarray
    status: np.ndarray
    n_used: np.ndarray
    max_log: np.ndarray
    N: int
    degree: int

    @property
    def ok(self) -> np.ndarray:
        return self.status == OK

    def tail_bound(self, extra: int = 5) -> np.ndarray:
        """Forecast of ``|v_N - v_{N+extra}|`` from the step logs seen so far.

        It is a rigorous bound whenever the later step logs stay below
        ``max_log``; orbits still settling can exceed it slightly.
        """
        w = float(self.degree) ** -np.arange(self.N + 1.0, self.N + extra + 1.0)
        return w.sum() * self.max_log


def v_field(f, s: Slice, N: int, workers: int = 1) -> GreenField:
    """Green potential at every pixel centre of ``s``.

    Rows are split across threads; results are written by position, so the
    worker count never changes the output.
    """
    require_as(f)
    G = s.grid()
    ny, nx = s.shape
    W = G.reshape(-1, 3)
    v = np.empty(ny * nx)
    status = np.empty(ny * nx, dtype=np.int8)
    n_used = np.empty(ny * nx, dtype=np.int64)
    max_log = np.empty(ny * nx)

    def run(rows):
        sl = slice(rows[0] * nx, rows[1] * nx)
        v[sl], status[sl], n_used[sl], max_log[sl] = _escape(f, W[sl], N)

    chunks = _row_chunks(ny, workers)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            list(ex.map(run, chunks))
    else:
        for c in chunks:
            run(c)
    return GreenField(s, v.reshape(ny, nx), status.reshape(ny, nx), n_used.reshape(ny, nx),
                      max_log.reshape(ny, nx), N, f.degree)


def _row_chunks(ny: int, workers: int, rows_per_chunk: int = 16):
    size = max(1, min(rows_per_chunk, -(-ny // max(workers, 1))))
    return [(a, min(a + size, ny)) for a in range(0, ny, size)]


# supp(T) mask ------------------------------------------------------------


def laplacian_response(g: GreenField) -> np.ndarray:
    """Scaled 5-point Laplacian ``q = h * |Delta_h v|``.

    A gradient jump ``s`` across a line gives ``q`` of order ``s`` on the
    nearest pixels at every resolution, while a smooth ``v`` gives
    ``q = O(h)``.  Edges are padded by linear extrapolation, which zeroes the
    second difference across the border.  NaN marks undefined responses.
    """
    v = g.v
    hu, hv = g.slice.pitch
    P = np.pad(v, 1, mode="constant", constant_values=np.nan)
    P[0, 1:-1] = 2 * v[0] - v[1] if v.shape[0] > 1 else v[0]
    P[-1, 1:-1] = 2 * v[-1] - v[-2] if v.shape[0] > 1 else v[-1]
    P[1:-1, 0] = 2 * v[:, 0] - v[:, 1] if v.shape[1] > 1 else v[:, 0]
    P[1:-1, -1] = 2 * v[:, -1] - v[:, -2] if v.shape[1] > 1 else v[:, -1]
    d2u = (P[1:-1, 2:] - 2 * v + P[1:-1, :-2]) / hu
    d2v = (P[2:, 1:-1] - 2 * v + P[:-2, 1:-1]) / hv
    if v.shape[1] == 1:
        d2u = np.zeros_like(v)
    if v.shape[0] == 1:
        d2v = np.zeros_like(v)
    h = max(hu, hv)
    return np.abs(d2u * (h / hu) + d2v * (h / hv))


@dataclass
class SuppMask:
    slice: Slice
    mask: np.ndarray
    threshold: float
    response: np.ndarray


def laplacian_mask(g: GreenField, tau: float = DEFAULT_TAU) -> SuppMask:
    """Pixels whose scaled Laplacian exceeds ``tau``; dead or undefined pixels count as support."""
    q = laplacian_response(g)
    with np.errstate(invalid="ignore"):
        mask = ~(q <= tau) | (g.status != OK)
    return SuppMask(g.slice, mask, tau, q)


def calibrate_tau(g: GreenField, region: Tuple[slice, slice], factor: float = 10.0) -> float:
    """``factor`` times the largest response inside a known-Fatou pixel region."""
    q = laplacian_response(g)[region]
    return factor * float(np.nanmax(q))


# no-charge probe -----------------------------------------------------------


def curve_distance(curve: HPoly, s: Slice) -> np.ndarray:
    """First-order distance ``|c| / |grad c|`` from pixel centres to ``{curve = 0}``
    in slice parameters (exact for linear curves)."""
    U, V = np.meshgrid(s.u_values(), s.v_values())
    W = s.embed(U, V)
    d1 = np.array(s.d1, dtype=np.complex128)
    d2 = np.array(s.d2, dtype=np.complex128)
    c = _eval_grid(curve, W)
    grads = [_eval_grid(curve.derivative(k), W) for k in range(3)]
    cu = sum(gk * d1[k] for k, gk in enumerate(grads))
    cv = sum(gk * d2[k] for k, gk in enumerate(grads))
    gn = np.sqrt(np.abs(cu) ** 2 + np.abs(cv) ** 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(gn > 0, np.abs(c) / gn, np.where(np.abs(c) == 0, 0.0, np.inf))


def _eval_grid(p: HPoly, W: np.ndarray) -> np.ndarray:
    out = np.zeros(W.shape[:-1], dtype=np.complex128)
    for (a, b, c), coeff in p.items():
        out += complex(coeff) * W[..., 0] ** a * W[..., 1] ** b * W[..., 2] ** c
    return out


@dataclass
class ChargeReport:
    radii: List[float]
    masses: List[float]
    pixels: List[int]
    notes: List[str]

    @property
    def monotone(self) -> bool:
        return all(b <= a * 1.05 + 1e-300 for a, b in zip(self.masses, self.masses[1:]))


def curve_charge_estimate(f, curve: HPoly, s: Slice, tube_radii: Sequence[float], N: int = 20,
                          field: Optional[GreenField] = None) -> ChargeReport:
    """Mass ``sum |Delta_h v| h^2`` of the discrete Laplacian inside shrinking tubes around a curve."""
    if curve.is_zero():
        raise ValueError("curve must be a nonzero polynomial")
    g = v_field(f, s, N) if field is None else field
    hu, hv = s.pitch
    dens = laplacian_response(g) / max(hu, hv) * hu * hv
    dens = np.where(g.status == OK, np.nan_to_num(dens, nan=0.0), 0.0)
    dist = curve_distance(curve, s)
    notes = []
    if not np.any(np.isfinite(dist)) or np.nanmin(dist) > max(tube_radii):
        notes.append("curve does not meet the slice window")
    masses, counts = [], []
    for r in tube_radii:
        tube = dist <= r
        masses.append(float(dens[tube].sum()))
        counts.append(int(tube.sum()))
    return ChargeReport(list(map(float, tube_radii)), masses, counts, notes)


# serialization -------------------------------------------------------------

GRID_HEADER = "# p2dyn-grid 1"


def write_grid(path, values: np.ndarray, s: Slice, meta: dict) -> None:
    lines = [GRID_HEADER, "# slice " + json.dumps(s.spec(), sort_keys=True)]
    for k in sorted(meta):
        lines.append(f"# {k} {json.dumps(meta[k], sort_keys=True)}")
    for row in np.asarray(values):
        lines.append(" ".join(_num(x) for x in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _num(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    x = float(x)
    return "nan" if np.isnan(x) else repr(x)


def read_grid(path):
    """Return ``(values, slice_spec, meta)`` from a text grid file."""
    meta, rows, spec = {}, [], None
    with open(path) as fh:
        first = fh.readline().rstrip("\n")
        if first != GRID_HEADER:
            raise ValueError(f"{path}: not a p2dyn grid file")
        for line in fh:
            if line.startswith("# "):
                key, _, val = line[2:].rstrip("\n").partition(" ")
                if key == "slice":
                    spec = json.loads(val)
                else:
                    meta[key] = json.loads(val)
            elif line.strip():
                rows.append([float(t) for t in line.split()])
    return np.array(rows), spec, meta


def write_field(path, g: GreenField) -> None:
    write_grid(path, g.v, g.slice, {"N": g.N, "degree": g.degree, "kind": "v"})


def write_mask(path, m: SuppMask) -> None:
    write_grid(path, m.mask, m.slice, {"tau": m.threshold, "kind": "supp"})


def write_pgm(path, values: np.ndarray) -> None:
    """8-bit binary PGM, linearly scaled over the finite range; NaN is black.

    Row 0 of the grid (smallest second parameter) is the bottom image row.
    """
    a = np.asarray(values, dtype=float)[::-1]
    fin = np.isfinite(a)
    img = np.zeros(a.shape, dtype=np.uint8)
    if fin.any():
        lo, hi = a[fin].min(), a[fin].max()
        span = hi - lo if hi > lo else 1.0
        img[fin] = np.round(1 + 254 * (a[fin] - lo) / span).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{a.shape[1]} {a.shape[0]}\n255\n".encode())
        fh.write(img.tobytes())


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    magic, size, _, body = data.split(b"\n", 3)
    if magic != b"P5":
        raise ValueError(f"{path}: not a binary PGM")
    w, h = map(int, size.split())
    return np.frombuffer(body[: w * h], dtype=np.uint8).reshape(h, w)[::-1]
