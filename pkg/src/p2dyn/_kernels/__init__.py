"""Orbit kernels: compiled extension when available, numpy otherwise.

Set ``P2DYN_KERNELS=python`` to force the numpy implementation.
"""

import os

from . import _pykernels

_ext = None
if os.environ.get("P2DYN_KERNELS", "").lower() != "python":
    try:
        from . import _ckernels as _ext
    except ImportError:  # extension not built
        _ext = None

if _ext is not None:
    BACKEND = "cython"
    eval_lift = _ext.eval_lift
    iterate = _ext.iterate
    cluster_verdicts = _ext.cluster_verdicts
else:
    BACKEND = "python"
    eval_lift = _pykernels.eval_lift
    iterate = _pykernels.iterate
    cluster_verdicts = _pykernels.cluster_verdicts

FATOU = _pykernels.FATOU
JULIA = _pykernels.JULIA
NEAR_IND = _pykernels.NEAR_IND
UNRESOLVED = _pykernels.UNRESOLVED

BACKENDS = {"python": _pykernels}
if _ext is not None:
    BACKENDS["cython"] = _ext

__all__ = ["BACKEND", "BACKENDS", "eval_lift", "iterate", "cluster_verdicts"]
