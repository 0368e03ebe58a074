"""Equicontinuity and Green-harmonicity verdicts, and Fatou rasters."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, Tuple

import numpy as np
from scipy import ndimage

from .. import _kernels
from ..green import OK, GreenField, SuppMask
from ..projgeom import Slice, as_vec, circle_points, fs_distance_vec, tangent_frame

FATOU, JULIA, NEAR_IND, UNRESOLVED = (
    _kernels.FATOU, _kernels.JULIA, _kernels.NEAR_IND, _kernels.UNRESOLVED)
VERDICTS = {FATOU: "Fatou", JULIA: "Julia", NEAR_IND: "NearIndeterminacy", UNRESOLVED: "Unresolved"}

EIGHT = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class ClassifierParams:
    """Perturbation-ring test settings (FS radians).

    With ``footprint`` set, raster rings follow the pixel footprint in slice
    parameters (half a pitch) instead of an FS circle of radius ``r0``.
    """

    N: int = 30
    m_ring: int = 8
    r0: float = 1e-3
    delta_stab: float = 0.05
    delta_blow: float = 0.5
    footprint: bool = True

    def __post_init__(self):
        if self.m_ring < 4:
            raise ValueError("m_ring must be at least 4")
        if not (0 < self.r0 < self.delta_stab < self.delta_blow):
            raise ValueError("need 0 < r0 < delta_stab < delta_blow")
        if self.N < 0:
            raise ValueError("N must be non-negative")

    def as_dict(self) -> dict:
        return asdict(self)


def _run_clusters(f, C: np.ndarray, params: ClassifierParams, delta_stab: float, workers: int = 1):
    args = f.numeric.kernel_args()
    cos_stab, cos_blow = np.cos(delta_stab), np.cos(params.delta_blow)
    M = C.shape[0]
    codes = np.empty(M, dtype=np.int8)
    diam = np.empty(M)
    event = np.empty(M, dtype=np.int64)
    step = 4096

    def run(a):
        b = min(a + step, M)
        codes[a:b], diam[a:b], event[a:b] = _kernels.cluster_verdicts(
            *args, np.ascontiguousarray(C[a:b]), params.N, f.eps_ind, cos_stab, cos_blow)

    starts = range(0, M, step)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            list(ex.map(run, starts))
    else:
        for a in starts:
            run(a)
    return codes, diam, event


def equicontinuity_classify(f, p, params: ClassifierParams = ClassifierParams()) -> str:
    """Verdict from iterating ``p`` with ``m_ring`` points on its FS circle of radius ``r0``."""
    v = as_vec(p)
    C = np.vstack([v[None], circle_points(v, params.r0, params.m_ring)])[None]
    codes, _, _ = _run_clusters(f, C, params, params.delta_stab)
    return VERDICTS[int(codes[0])]


@dataclass
class FatouRaster:
    slice: Slice
    verdicts: np.ndarray
    components: np.ndarray
    params: Dict
    diameter: np.ndarray = field(repr=False, default=None)
    event: np.ndarray = field(repr=False, default=None)

    @property
    def n_components(self) -> int:
        return int(self.components.max()) if self.components.size else 0

    def counts(self) -> Dict[str, int]:
        return {name: int((self.verdicts == code).sum()) for code, name in VERDICTS.items()}


def raster_clusters(s: Slice, params: ClassifierParams) -> np.ndarray:
    """Unit cluster vectors ``(ny*nx, 1 + m_ring, 3)``: centre first, then the ring."""
    U, V = np.meshgrid(s.u_values(), s.v_values())
    U, V = U.ravel(), V.ravel()
    theta = 2 * np.pi * (np.arange(params.m_ring) + 0.5) / params.m_ring
    if params.footprint:
        hu, hv = s.pitch
        ru = U[:, None] + 0.5 * hu * np.cos(theta)[None]
        rv = V[:, None] + 0.5 * hv * np.sin(theta)[None]
        C = np.concatenate([s.embed(U, V)[:, None], s.embed(ru, rv)], axis=1)
        return C / np.linalg.norm(C, axis=-1, keepdims=True)
    centres = s.embed(U, V)
    centres /= np.linalg.norm(centres, axis=-1, keepdims=True)
    dirs = [np.array(s.d1, dtype=complex), np.array(s.d2, dtype=complex)]
    out = np.empty((len(U), params.m_ring + 1, 3), dtype=np.complex128)
    for i, c in enumerate(centres):
        out[i, 0] = c
        out[i, 1:] = circle_points(c, params.r0, params.m_ring, tangent_frame(c, dirs))
    return out


def _initial_diameter(C: np.ndarray) -> np.ndarray:
    return np.max(fs_distance_vec(C[:, :, None, :], C[:, None, :, :]), axis=(1, 2))


def label_components(verdicts: np.ndarray) -> np.ndarray:
    labels, _ = ndimage.label(verdicts == FATOU, structure=EIGHT)
    return labels.astype(np.int32)


def fatou_raster(f, s: Slice, params: ClassifierParams = ClassifierParams(), workers: int = 1) -> FatouRaster:
    """Equicontinuity verdict per pixel plus 8-connected Fatou component labels.

    A footprint ring is wider than the default ``r0`` circle, so the stability
    threshold is scaled by the same factor (capped at half of ``delta_blow``).
    """
    C = raster_clusters(s, params)
    delta_stab = params.delta_stab
    if params.footprint and C.size:
        # keep the default ratio of stability threshold to ring diameter
        d0 = float(np.median(_initial_diameter(C)))
        scale = d0 / (2 * params.r0)
        delta_stab = min(max(params.delta_stab, params.delta_stab * scale), params.delta_blow / 2)
    codes, diam, event = _run_clusters(f, C, params, delta_stab, workers)
    shape = s.shape
    verdicts = codes.reshape(shape)
    meta = params.as_dict()
    meta["delta_stab_effective"] = delta_stab
    return FatouRaster(s, verdicts, label_components(verdicts), meta,
                       diam.reshape(shape), event.reshape(shape))


def green_classify(g: GreenField, m: SuppMask, pixel: Tuple[int, int]) -> str:
    return VERDICTS[int(green_verdicts(g, m)[pixel])]


def green_verdicts(g: GreenField, m: SuppMask) -> np.ndarray:
    """Fatou where the 3x3 neighbourhood is mask-free, Julia on the mask."""
    mask = m.mask
    near = ndimage.binary_dilation(mask, structure=EIGHT)
    out = np.full(mask.shape, UNRESOLVED, dtype=np.int8)
    out[~near] = FATOU
    out[mask] = JULIA
    out[g.status != OK] = NEAR_IND
    return out
