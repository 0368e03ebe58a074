"""Pointwise orbits of the lift and the regular-point probe.

Orbits iterate the reduced lift of ``f`` itself, never a reduced iterate:
a point whose orbit reaches the indeterminacy set stops there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .. import _kernels
from ..projgeom import ProjPoint, as_vec, ball_samples, canonical_phase, fs_distance_vec, normalize_point

COMPLETED = "Completed"
NEAR_INDETERMINACY = "NearIndeterminacy"

REGULAR = "RegularUpToN"
NOT_REGULAR = "NotRegularWitness"
INCONCLUSIVE = "Inconclusive"


@dataclass
class OrbitTrace:
    points: List[ProjPoint]
    step_logs: List[float]
    status: str = COMPLETED
    stopped_at: Optional[int] = None  # 1-based step whose image vanished

    def __len__(self):
        return len(self.points)


def orbit_batch(numeric, W0: np.ndarray, N: int, eps: float):
    """Iterate many unit starting vectors, keeping the whole trajectory.

    Returns ``(traj, logs, death)``: ``traj[i, k]`` is ``w_k`` (NaN once the
    orbit died), ``logs[i, k] = log||F(w_k)||`` and ``death[i]`` is the
    1-based step at which ``||F(w)|| < eps`` (0 if the orbit survived).
    """
    W = np.array(W0, dtype=np.complex128).reshape(-1, 3)
    W = W / np.linalg.norm(W, axis=1, keepdims=True)
    M = W.shape[0]
    traj = np.full((M, N + 1, 3), np.nan + 0j)
    traj[:, 0] = W
    logs = np.full((M, N), np.nan)
    death = np.zeros(M, dtype=np.int64)
    alive = np.arange(M)
    args = numeric.kernel_args()
    for k in range(N):
        if alive.size == 0:
            break
        F = _kernels.eval_lift(*args, np.ascontiguousarray(traj[alive, k]))
        n = np.linalg.norm(F, axis=1)
        dead = ~(n >= eps)
        death[alive[dead]] = k + 1
        ok = ~dead
        alive = alive[ok]
        logs[alive, k] = np.log(n[ok])
        traj[alive, k + 1] = F[ok] / n[ok, None]
    return traj, logs, death


def orbit_pointwise(f, p, N: int, eps: Optional[float] = None) -> OrbitTrace:
    """Normalized orbit ``w_{k+1} = F(w_k) / ||F(w_k)||`` for ``N`` steps."""
    eps = f.eps_ind if eps is None else eps
    traj, logs, death = orbit_batch(f.numeric, as_vec(p)[None], N, eps)
    m = int(death[0])
    upto = m if m else N + 1
    pts = [ProjPoint(tuple(complex(c) for c in canonical_phase(w))) for w in traj[0, :upto]]
    step_logs = [float(v) for v in logs[0, : (m - 1 if m else N)]]
    if m:
        return OrbitTrace(pts, step_logs, NEAR_INDETERMINACY, m)
    return OrbitTrace(pts, step_logs)


@dataclass
class ProbeResult:
    verdict: str
    step: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    def __str__(self):
        return f"{self.verdict}({self.step})" if self.verdict == NOT_REGULAR else self.verdict


def regularity_probe(f, p, r: float, delta: float, N: int, m_samples: int,
                     seed: int = 0, indeterminacy=None) -> ProbeResult:
    """Sample the FS ball ``B(p, r)`` and watch orbits against ``delta``-balls around I(f)."""
    if r <= 0 or delta <= 0:
        raise ValueError("r and delta must be positive")
    ind = f.indeterminacy if indeterminacy is None else indeterminacy
    if not ind:
        return ProbeResult(REGULAR, notes=["I empty"])
    rng = np.random.default_rng(seed)
    S = ball_samples(as_vec(p), r, m_samples, rng)
    traj, _, death = orbit_batch(f.numeric, S, N, f.eps_ind)
    return _probe_verdict(traj, death, np.array([q.point.vec for q in ind]), delta)


def _probe_verdict(traj, death, I, delta) -> ProbeResult:
    # distance of every orbit point to the nearest indeterminacy point
    d = fs_distance_vec(traj[:, :, None, :], I[None, None, :, :]).min(axis=2)
    close = np.nan_to_num(d, nan=np.inf) < delta
    hits = np.flatnonzero(close.any(axis=1))
    if hits.size:
        step = int(min(np.argmax(close[i]) for i in hits))
        return ProbeResult(NOT_REGULAR, step)
    if np.any(death > 0):
        return ProbeResult(INCONCLUSIVE, notes=["orbit died away from the delta-neighborhood"])
    return ProbeResult(REGULAR)
