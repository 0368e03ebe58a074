"""Graph probe, classifier comparison, Julia connectivity and the regularity dichotomy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import ndimage

from ..errors import NotAS, PatchNearIndeterminacy
from ..green import laplacian_mask, v_field
from ..projgeom import Slice, fs_distance_vec
from ..ratmap.orbit import INCONCLUSIVE, REGULAR, orbit_batch, regularity_probe
from .classify import (
    EIGHT, FATOU, JULIA, NEAR_IND, UNRESOLVED, VERDICTS,
    ClassifierParams, FatouRaster, fatou_raster, green_verdicts,
)

# graph probe ---------------------------------------------------------------


@dataclass
class GraphCloud:
    base: np.ndarray  # (K, 3) unit vectors
    image: np.ndarray  # (K, 3) unit vectors
    patch: dict
    punctured: int = 0


def graph_cloud(f, patch: Slice, n: int, puncture: float = 1e-4, m_puncture: int = 8) -> GraphCloud:
    """Samples ``(w, f^n(w))`` over the patch grid.

    A sample whose orbit dies before step ``n`` is replaced by the images of
    a small punctured circle around it, approximating the graph closure.
    Raises :class:`PatchNearIndeterminacy` if more than half the samples die.
    """
    B = patch.grid().reshape(-1, 3)
    traj, _, death = orbit_batch(f.numeric, B, n, f.eps_ind)
    dead = (death > 0) & (death <= n)
    if dead.mean() > 0.5:
        raise PatchNearIndeterminacy(
            f"{int(dead.sum())} of {len(B)} patch samples reach indeterminacy within {n} steps")
    base, image = [B[~dead]], [traj[~dead, n]]
    punctured = 0
    if dead.any():
        U, V = np.meshgrid(patch.u_values(), patch.v_values())
        U, V = U.ravel()[dead], V.ravel()[dead]
        hu, hv = patch.pitch
        theta = 2 * np.pi * (np.arange(m_puncture) + 0.5) / m_puncture
        ru = U[:, None] + puncture * max(hu, 1e-12) * np.cos(theta)
        rv = V[:, None] + puncture * max(hv, 1e-12) * np.sin(theta)
        R = patch.embed(ru, rv).reshape(-1, 3)
        Rt, _, rdeath = orbit_batch(f.numeric, R, n, f.eps_ind)
        ok = rdeath == 0
        punctured = int(ok.sum())
        base.append(np.repeat(B[dead], m_puncture, axis=0)[ok])
        image.append(Rt[ok, n])
    return GraphCloud(np.vstack(base), np.vstack(image), patch.spec(), punctured)


def _directed(a: GraphCloud, b: GraphCloud, chunk: int = 512) -> float:
    worst = 0.0
    for i in range(0, len(a.base), chunk):
        db = fs_distance_vec(a.base[i:i + chunk, None], b.base[None])
        di = fs_distance_vec(a.image[i:i + chunk, None], b.image[None])
        worst = max(worst, float(np.max(np.min(np.maximum(db, di), axis=1))))
    return worst


def cloud_hausdorff(a: GraphCloud, b: GraphCloud) -> float:
    """Hausdorff distance for the product metric ``max(d_base, d_image)``."""
    return max(_directed(a, b), _directed(b, a))


def graph_hausdorff(f, patch: Slice, n: int, m: int, **kw) -> float:
    """Hausdorff distance between the sampled graphs of ``f^n`` and ``f^m`` over ``patch``."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    if n == m:
        graph_cloud(f, patch, n, **kw)  # still enforce the patch check
        return 0.0
    return cloud_hausdorff(graph_cloud(f, patch, n, **kw), graph_cloud(f, patch, m, **kw))


def footprint_patch(s: Slice, pixel: Tuple[int, int], density: int = 3) -> Slice:
    u, v = s.params(pixel)
    hu, hv = s.pitch
    return s.sub_window((u - hu / 2, u + hu / 2, v - hv / 2, v + hv / 2), (density, density))


# classifier comparison -----------------------------------------------------


@dataclass
class CompareReport:
    kind: str  # "green" or "graph"
    confusion: Dict[str, Dict[str, int]]
    resolved: int
    agreement: Optional[float]
    disagreements: List[Tuple[int, int]]
    notes: List[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "confusion": self.confusion,
            "resolved": self.resolved,
            "agreement": self.agreement,
            "disagreements": [list(p) for p in self.disagreements],
            "notes": list(self.notes),
        }


def _confusion(a: np.ndarray, b: np.ndarray, kind: str, notes) -> CompareReport:
    both = np.isin(a, [FATOU, JULIA]) & np.isin(b, [FATOU, JULIA])
    conf = {VERDICTS[x]: {VERDICTS[y]: int(np.sum(both & (a == x) & (b == y))) for y in (FATOU, JULIA)}
            for x in (FATOU, JULIA)}
    resolved = int(both.sum())
    agree = int(np.sum(both & (a == b)))
    if resolved == 0:
        notes.append("no pixel resolved by both classifiers; agreement undefined")
    rows, cols = np.nonzero(both & (a != b))
    return CompareReport(kind, conf, resolved, agree / resolved if resolved else None,
                         list(zip(rows.tolist(), cols.tolist())), notes)


def classifier_compare(f, s: Slice, params: ClassifierParams = ClassifierParams(), N_green: int = 20,
                       tau: float = 0.5, raster: Optional[FatouRaster] = None, workers: int = 1,
                       graph_samples: int = 64, seed: int = 0) -> CompareReport:
    """Equicontinuity verdicts against the Green-mask verdicts.

    Non-AS maps fall back to a graph-probe spot check: sampled resolved
    pixels are Fatou when the graphs of ``f^(N-2)`` and ``f^N`` over the pixel
    footprint stay within ``delta_stab``.
    """
    r = fatou_raster(f, s, params, workers) if raster is None else raster
    try:
        g = v_field(f, s, N_green, workers)
    except NotAS as exc:
        return _graph_compare(f, s, r, params, graph_samples, seed, [f"green comparison refused: {exc}"])
    gv = green_verdicts(g, laplacian_mask(g, tau))
    return _confusion(r.verdicts, gv, "green", [])


def _graph_compare(f, s, r, params, samples, seed, notes) -> CompareReport:
    pix = np.argwhere(np.isin(r.verdicts, [FATOU, JULIA]))
    if len(pix) > samples:
        pix = pix[np.sort(np.random.default_rng(seed).choice(len(pix), samples, replace=False))]
    a = np.full(r.verdicts.shape, UNRESOLVED, dtype=np.int8)
    b = np.full(r.verdicts.shape, UNRESOLVED, dtype=np.int8)
    n_hi = max(params.N, 3)
    stab = r.params.get("delta_stab_effective", params.delta_stab)
    for i, j in pix:
        a[i, j] = r.verdicts[i, j]
        try:
            d = graph_hausdorff(f, footprint_patch(s, (i, j)), n_hi - 2, n_hi)
        except PatchNearIndeterminacy:
            b[i, j] = NEAR_IND
            continue
        b[i, j] = FATOU if d < stab else JULIA
    return _confusion(a, b, "graph", notes)


# connectivity --------------------------------------------------------------


@dataclass
class ConnectivityReport:
    verdict: str  # "Connected", "ComponentCount" or "NoJulia"
    count: int
    sizes: List[int]

    def __str__(self):
        return "Connected" if self.verdict == "Connected" else f"{self.verdict} {self.count}"


def connectivity_check(r) -> ConnectivityReport:
    """8-connected components of the Julia pixels (NearIndeterminacy counted as Julia)."""
    verdicts = r.verdicts if hasattr(r, "verdicts") else np.asarray(r)
    J = np.isin(verdicts, [JULIA, NEAR_IND])
    if not J.any():
        return ConnectivityReport("NoJulia", 0, [])
    labels, k = ndimage.label(J, structure=EIGHT)
    sizes = np.bincount(labels.ravel())[1:].tolist()
    return ConnectivityReport("Connected" if k == 1 else "ComponentCount", int(k), sizes)


# regularity dichotomy ------------------------------------------------------


@dataclass(frozen=True)
class ProbeParams:
    r: float = 1e-3
    delta: float = 0.3
    N: int = 30
    m_samples: int = 8
    per_component: int = 24
    seed: int = 0


@dataclass
class ComponentStat:
    label: int
    size: int
    sampled: int
    regular: int
    inconclusive: int
    limit: Optional[List[float]]  # common orbit endpoint of the samples, if any

    @property
    def fraction(self) -> Optional[float]:
        resolved = self.sampled - self.inconclusive
        return self.regular / resolved if resolved else None


@dataclass
class DichotomyReport:
    components: List[ComponentStat]
    notes: List[str]

    def violations(self, lo: float = 0.2, hi: float = 0.8) -> List[int]:
        return [c.label for c in self.components if c.fraction is not None and lo <= c.fraction <= hi]


def dichotomy_check(f, r: FatouRaster, probe: ProbeParams = ProbeParams()) -> DichotomyReport:
    """Fraction of regular samples per Fatou component."""
    ind = f.indeterminacy
    notes: List[str] = []
    if not ind:
        return DichotomyReport([], ["I empty: dichotomy is vacuous"])
    rng = np.random.default_rng(probe.seed)
    grid = r.slice.grid()
    stats = []
    for lab in range(1, r.n_components + 1):
        pix = np.argwhere(r.components == lab)
        if len(pix) > probe.per_component:
            pix = pix[np.sort(rng.choice(len(pix), probe.per_component, replace=False))]
        verdicts = []
        ends = []
        for k, (i, j) in enumerate(pix):
            res = regularity_probe(f, grid[i, j], probe.r, probe.delta, probe.N, probe.m_samples,
                                   seed=probe.seed + 7919 * lab + k, indeterminacy=ind)
            verdicts.append(res.verdict)
            traj, _, death = orbit_batch(f.numeric, grid[i, j][None], probe.N, f.eps_ind)
            ends.append(None if death[0] else traj[0, probe.N])
        size = int((r.components == lab).sum())
        inconclusive = verdicts.count(INCONCLUSIVE)
        if len(verdicts) - inconclusive < 3:
            notes.append(f"component {lab} skipped: fewer than 3 resolvable samples")
            continue
        stats.append(ComponentStat(lab, size, len(verdicts), verdicts.count(REGULAR), inconclusive,
                                   _common_limit(ends)))
    return DichotomyReport(stats, notes)


def _common_limit(ends, tol: float = 1e-3) -> Optional[List[float]]:
    if not ends or any(e is None for e in ends):
        return None
    E = np.array(ends)
    if np.max(fs_distance_vec(E[0][None], E)) > tol:
        return None
    k = int(np.argmax(np.abs(E[0])))
    e = E[0] / E[0][k]
    e = np.where(np.abs(e) < 1e-9, 0, e)
    return [round(float(c.real), 9) for c in e] if np.allclose(e.imag, 0, atol=1e-9) else None
