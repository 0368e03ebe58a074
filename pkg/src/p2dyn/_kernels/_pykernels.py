"""Pure numpy kernels; the reference semantics for the compiled module.

All kernels take the flattened lift ``(coef, exps, comp, maxdeg)`` where term
``t`` contributes ``coef[t] * x^a y^b z^c`` (``exps[t] = (a, b, c)``) to
component ``comp[t]``.
"""

import numpy as np

FATOU, JULIA, NEAR_IND, UNRESOLVED = 0, 1, 2, 3


def eval_lift(coef, exps, comp, maxdeg, W):
    W = np.asarray(W, dtype=np.complex128)
    shape = W.shape[:-1]
    W = W.reshape(-1, 3)
    # power tables, shape (3, maxdeg + 1, M)
    pw = np.empty((3, maxdeg + 1, W.shape[0]), dtype=np.complex128)
    pw[:, 0] = 1.0
    for k in range(1, maxdeg + 1):
        pw[:, k] = pw[:, k - 1] * W.T
    terms = coef[:, None] * pw[0, exps[:, 0]] * pw[1, exps[:, 1]] * pw[2, exps[:, 2]]
    out = np.zeros((3, W.shape[0]), dtype=np.complex128)
    np.add.at(out, comp, terms)
    return out.T.reshape(shape + (3,))


def iterate(coef, exps, comp, maxdeg, W0, nsteps, eps):
    W = np.array(W0, dtype=np.complex128, copy=True).reshape(-1, 3)
    M = W.shape[0]
    logs = np.full((M, nsteps), np.nan)
    death = np.zeros(M, dtype=np.int64)
    alive = np.ones(M, dtype=bool)
    for s in range(nsteps):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        F = eval_lift(coef, exps, comp, maxdeg, W[idx])
        n = np.linalg.norm(F, axis=1)
        dead = ~(n >= eps)
        death[idx[dead]] = s + 1
        alive[idx[dead]] = False
        ok = idx[~dead]
        logs[ok, s] = np.log(n[~dead])
        W[ok] = F[~dead] / n[~dead, None]
    return W, logs, death


def cluster_verdicts(coef, exps, comp, maxdeg, C, nsteps, eps, cos_stab, cos_blow):
    C = np.array(C, dtype=np.complex128, copy=True)
    M, K, _ = C.shape
    codes = np.full(M, UNRESOLVED, dtype=np.int8)
    minip = np.ones(M)
    event = np.zeros(M, dtype=np.int64)
    active = np.ones(M, dtype=bool)
    iu, ju = np.triu_indices(K, 1)
    for s in range(1, nsteps + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        F = eval_lift(coef, exps, comp, maxdeg, C[idx])
        n = np.linalg.norm(F, axis=2)
        dead = np.any(~(n >= eps), axis=1)
        codes[idx[dead]] = NEAR_IND
        event[idx[dead]] = s
        active[idx[dead]] = False
        live = idx[~dead]
        C[live] = F[~dead] / n[~dead][..., None]
        if live.size == 0:
            continue
        G = C[live]
        ip = np.abs(np.sum(np.conj(G[:, iu]) * G[:, ju], axis=2))
        if ip.shape[1]:
            minip[live] = np.minimum(minip[live], ip.min(axis=1))
        blown = minip[live] < cos_blow
        codes[live[blown]] = JULIA
        event[live[blown]] = s
        active[live[blown]] = False
    rest = np.flatnonzero(active)
    if nsteps >= 1:
        codes[rest] = np.where(minip[rest] > cos_stab, FATOU, UNRESOLVED)
    return codes, np.arccos(np.minimum(minip, 1.0)), event
