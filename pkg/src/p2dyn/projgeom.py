"""Points, the Fubini-Study metric and rasterizable slices of P^2."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import NotAPoint

CHARTS = {"x": 0, "y": 1, "z": 2}


def canonical_phase(w: np.ndarray) -> np.ndarray:
    """Rotate so the first nonzero coordinate is a non-negative real.

    Works on a single triple or on an ``(..., 3)`` array.
    """
    w = np.asarray(w, dtype=np.complex128)
    mag = np.abs(w)
    # coordinates below a relative floor count as zero
    floor = 1e-12 * np.max(mag, axis=-1, keepdims=True)
    idx = np.argmax(mag > floor, axis=-1)
    lead = np.take_along_axis(w, idx[..., None], axis=-1)
    lead_abs = np.abs(lead)
    phase = np.where(lead_abs > 0, lead / np.where(lead_abs > 0, lead_abs, 1), 1)
    return w / phase


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """Unit representative of a point of P^2 with canonical phase."""

    coords: Tuple[complex, complex, complex]

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.complex128)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return fs_distance(self, other) < 1e-12

    __hash__ = None

    def __repr__(self):
        c = ", ".join(f"{v.real:.6g}{v.imag:+.6g}j" for v in self.coords)
        return f"ProjPoint({c})"


def normalize_point(w: Sequence[complex]) -> ProjPoint:
    v = np.asarray(w, dtype=np.complex128).reshape(3)
    n = np.linalg.norm(v)
    if not np.isfinite(n) or n == 0:
        raise NotAPoint(f"{tuple(w)} does not represent a point of P^2")
    v = canonical_phase(v / n)
    return ProjPoint(tuple(complex(c) for c in v))


def as_vec(p) -> np.ndarray:
    if isinstance(p, ProjPoint):
        return p.vec
    v = np.asarray(p, dtype=np.complex128)
    return v / np.linalg.norm(v)


def fs_distance_vec(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Fubini-Study distance between unit vectors (broadcasts over leading axes).

    Uses ``atan2(|b - <a,b> a|, |<a,b>|)`` which stays accurate near zero.
    """
    ip = np.sum(np.conj(a) * b, axis=-1)
    perp = b - ip[..., None] * a
    return np.arctan2(np.linalg.norm(perp, axis=-1), np.abs(ip))


def fs_distance(p, q) -> float:
    """Distance in radians, in ``[0, pi/2]``."""
    return float(fs_distance_vec(as_vec(p), as_vec(q)))


def tangent_frame(p: np.ndarray, directions: Sequence[np.ndarray] | None = None) -> np.ndarray:
    """Two orthonormal vectors spanning the Hermitian complement of ``p``.

    ``directions`` (if given) are projected and Gram-Schmidt orthonormalized,
    so a slice's own axes give a frame aligned with that slice.
    """
    p = np.asarray(p, dtype=np.complex128)
    if directions is None:
        k = int(np.argmax(np.abs(p)))
        directions = [np.eye(3)[i] for i in range(3) if i != k]
    frame = []
    for d in directions:
        t = np.asarray(d, dtype=np.complex128)
        t = t - np.vdot(p, t) * p
        for f in frame:
            t = t - np.vdot(f, t) * f
        n = np.linalg.norm(t)
        if n < 1e-14:
            continue
        frame.append(t / n)
    if len(frame) < 2:
        return tangent_frame(p, None)
    return np.array(frame[:2])


def circle_points(p: np.ndarray, radius: float, m: int, frame=None) -> np.ndarray:
    """``m`` unit vectors at FS distance ``radius`` from ``p`` on a circle.

    Angles are offset by half a step so no sample sits on a frame axis.
    """
    p = np.asarray(p, dtype=np.complex128)
    t1, t2 = tangent_frame(p) if frame is None else frame
    theta = 2 * np.pi * (np.arange(m) + 0.5) / m
    dirs = np.cos(theta)[:, None] * t1 + np.sin(theta)[:, None] * t2
    pts = p + np.tan(radius) * dirs
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def ball_samples(p: np.ndarray, radius: float, m: int, rng: np.random.Generator) -> np.ndarray:
    """Center plus ``m - 1`` random points of the FS ball ``B(p, radius)``."""
    p = np.asarray(p, dtype=np.complex128)
    t1, t2 = tangent_frame(p)
    out = [p]
    for _ in range(max(m - 1, 0)):
        g = rng.normal(size=4)
        g /= np.linalg.norm(g)
        t = (g[0] + 1j * g[1]) * t1 + (g[2] + 1j * g[3]) * t2
        # uniform in the 4-ball of tangent space
        rho = radius * rng.random() ** 0.25
        v = p + np.tan(rho) * t
        out.append(v / np.linalg.norm(v))
    return np.array(out)


@dataclass(frozen=True)
class Slice:
    """Real two-parameter slice ``(u, v) -> [base + u*d1 + v*d2]``.

    ``window = (u_min, u_max, v_min, v_max)``; ``resolution = (nx, ny)``.
    Pixel ``(row, col)`` samples ``u = u_min + col * hu`` and
    ``v = v_min + row * hv`` with the window corners on the corner pixels.
    """

    base: Tuple[complex, complex, complex]
    d1: Tuple[complex, complex, complex]
    d2: Tuple[complex, complex, complex]
    window: Tuple[float, float, float, float]
    resolution: Tuple[int, int]
    chart: str | None = None

    def __post_init__(self):
        nx, ny = self.resolution
        if nx < 1 or ny < 1:
            raise ValueError("resolution must be positive")
        A = np.array([self.d1, self.d2], dtype=np.complex128)
        if np.linalg.matrix_rank(A, tol=1e-12) < 2:
            raise ValueError("slice directions must be linearly independent")
        B = np.array([self.base, self.d1, self.d2], dtype=np.complex128)
        if abs(np.linalg.det(B)) < 1e-12:
            raise ValueError("slice plane passes through the origin of C^3")

    @classmethod
    def chart_slice(cls, chart, window=(-2.0, 2.0, -2.0, 2.0), resolution=(64, 64)) -> "Slice":
        k = CHARTS[chart] if isinstance(chart, str) else int(chart)
        others = [i for i in range(3) if i != k]
        e = np.eye(3, dtype=np.complex128)
        name = "xyz"[k]
        return cls(
            tuple(e[k]),
            tuple(e[others[0]]),
            tuple(e[others[1]]),
            tuple(float(w) for w in window),
            (int(resolution[0]), int(resolution[1])),
            chart=name,
        )

    @property
    def shape(self) -> Tuple[int, int]:
        nx, ny = self.resolution
        return ny, nx

    @property
    def pitch(self) -> Tuple[float, float]:
        u0, u1, v0, v1 = self.window
        nx, ny = self.resolution
        hu = (u1 - u0) / (nx - 1) if nx > 1 else (u1 - u0)
        hv = (v1 - v0) / (ny - 1) if ny > 1 else (v1 - v0)
        return hu, hv

    def u_values(self) -> np.ndarray:
        u0, u1, _, _ = self.window
        nx = self.resolution[0]
        return np.array([(u0 + u1) / 2]) if nx == 1 else np.linspace(u0, u1, nx)

    def v_values(self) -> np.ndarray:
        _, _, v0, v1 = self.window
        ny = self.resolution[1]
        return np.array([(v0 + v1) / 2]) if ny == 1 else np.linspace(v0, v1, ny)

    def params(self, pixel: Tuple[int, int]) -> Tuple[float, float]:
        row, col = pixel
        ny, nx = self.shape
        if not (0 <= row < ny and 0 <= col < nx):
            raise IndexError(f"pixel {pixel} outside resolution {self.resolution}")
        return float(self.u_values()[col]), float(self.v_values()[row])

    def embed(self, u, v) -> np.ndarray:
        """Unnormalized lift for parameter arrays ``u``, ``v`` (shape ``(..., 3)``)."""
        u = np.asarray(u, dtype=np.float64)[..., None]
        v = np.asarray(v, dtype=np.float64)[..., None]
        b, d1, d2 = (np.array(a, dtype=np.complex128) for a in (self.base, self.d1, self.d2))
        return b + u * d1 + v * d2

    def grid(self) -> np.ndarray:
        """Unit lifts of all pixel samples, shape ``(ny, nx, 3)``."""
        U, V = np.meshgrid(self.u_values(), self.v_values())
        W = self.embed(U, V)
        return W / np.linalg.norm(W, axis=-1, keepdims=True)

    def sub_window(self, window, resolution) -> "Slice":
        return Slice(self.base, self.d1, self.d2, tuple(window), tuple(resolution), self.chart)

    def with_resolution(self, resolution) -> "Slice":
        return self.sub_window(self.window, resolution)

    def spec(self) -> dict:
        return {
            "chart": self.chart,
            "base": [_ctext(c) for c in self.base],
            "d1": [_ctext(c) for c in self.d1],
            "d2": [_ctext(c) for c in self.d2],
            "window": list(self.window),
            "resolution": list(self.resolution),
        }


def _ctext(c: complex) -> str:
    c = complex(c)
    return f"{c.real:.17g}{c.imag:+.17g}j"


def slice_to_point(s: Slice, pixel: Tuple[int, int]) -> ProjPoint:
    u, v = s.params(pixel)
    return normalize_point(s.embed(u, v))
