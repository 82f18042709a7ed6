"""Pure-Python (numpy) path-tracking kernel.

Mirrors the compiled kernel in ``_tracker.pyx``: tracks the homotopy
H(v, t) = (1-t)*gamma*S(v) + t*T(v) from t=0 to t=1 between two square
systems given as flattened term data, with an RK4 predictor on the Davidenko
relation, a Newton corrector accepting on either a small relative step or a
small magnitude-scaled residual, adaptive step halving/doubling, and a final
Newton refinement against T.  Selected at import time by
``edcat.solver.tracking`` when the compiled extension is unavailable (or when
EDCAT_TRACKER=python is set).
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

STATUS_CONVERGED = 0
STATUS_NORM_GUARD = 1
STATUS_REFINE_FAILED = 2
STATUS_STEP_UNDERFLOW = 3

_END_NEWTON_ITERS = 12


class TermSystem:
    """Vectorized evaluation of a flattened sparse polynomial system."""

    def __init__(self, exps, coefs, offs):
        self.exps = np.asarray(exps, dtype=np.int64)
        self.coefs = np.asarray(coefs, dtype=np.complex128)
        self.offs = np.asarray(offs, dtype=np.int64)
        self.nvars = self.exps.shape[1]

    def values_and_scale(self, v):
        mono = self.coefs * np.prod(v[None, :] ** self.exps, axis=1)
        vals = np.add.reduceat(mono, self.offs[:-1])
        mags = np.add.reduceat(np.abs(mono), self.offs[:-1])
        return vals, mags

    def values_jacobian_scale(self, v):
        exps = self.exps
        pows = v[None, :] ** exps
        mono = self.coefs * np.prod(pows, axis=1)
        vals = np.add.reduceat(mono, self.offs[:-1])
        mags = np.add.reduceat(np.abs(mono), self.offs[:-1])
        nv = self.nvars
        left = np.ones_like(pows)
        right = np.ones_like(pows)
        if nv > 1:
            left[:, 1:] = np.cumprod(pows[:, :-1], axis=1)
            right[:, :-1] = np.cumprod(pows[:, ::-1], axis=1)[:, -2::-1]
        jac = np.empty((len(self.offs) - 1, nv), dtype=np.complex128)
        for col in range(nv):
            e = exps[:, col]
            dpow = np.where(e > 0, v[col] ** np.maximum(e - 1, 0), 0.0)
            dmono = self.coefs * e * dpow * left[:, col] * right[:, col]
            jac[:, col] = np.add.reduceat(dmono, self.offs[:-1])
        return vals, jac, mags


def _homotopy(target, start, gamma, v, t):
    """H, its Jacobian, dH/dt, and a per-equation magnitude scale."""
    tv, tj, tm = target.values_jacobian_scale(v)
    sv, sj, sm = start.values_jacobian_scale(v)
    h = (1.0 - t) * gamma * sv + t * tv
    hj = (1.0 - t) * gamma * sj + t * tj
    dt = tv - gamma * sv
    scale = np.maximum(1.0, (1.0 - t) * sm + t * tm)
    return h, hj, dt, scale


def _tangent(target, start, gamma, v, t):
    _, hj, dt, _ = _homotopy(target, start, gamma, v, t)
    if not (np.all(np.isfinite(hj)) and np.all(np.isfinite(dt))):
        return None
    try:
        k = np.linalg.solve(hj, -dt)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(k)):
        return None
    return k


def _correct(target, start, gamma, v, t, tol, max_iters):
    """Newton at fixed t; accepts on small relative step or small scaled residual.

    Non-contracting iterations are rejected outright: a corrector started
    between two nearby paths does not contract, and accepting its endpoint is
    how path jumping happens.
    """
    iters = 0
    prev_step = None
    for _ in range(max_iters):
        h, hj, _, scale = _homotopy(target, start, gamma, v, t)
        if not (np.all(np.isfinite(h)) and np.all(np.isfinite(hj))):
            return False, v, iters
        if float(np.max(np.abs(h) / scale)) < tol:
            return True, v, iters
        try:
            delta = np.linalg.solve(hj, -h)
        except np.linalg.LinAlgError:
            return False, v, iters
        if not np.all(np.isfinite(delta)):
            return False, v, iters
        step = float(np.max(np.abs(delta)))
        if prev_step is not None and step > 0.7 * prev_step:
            return False, v, iters
        prev_step = step
        v = v + delta
        iters += 1
        vscale = max(1.0, float(np.max(np.abs(v))))
        if step <= tol * vscale:
            return True, v, iters
    h, _, _, scale = _homotopy(target, start, gamma, v, t)
    if np.all(np.isfinite(h)) and float(np.max(np.abs(h) / scale)) < tol:
        return True, v, iters
    return False, v, iters


def _refine_endpoint(target, v, tol):
    """Plain Newton on the target system; scaled-residual convergence.

    Total displacement is capped: a healthy endpoint only needs corrections of
    the order of the corrector tolerance, while an uncapped Newton started
    near a multiple root can wander into the basin of a different solution.
    """
    cap = 0.1 * (1.0 + float(np.max(np.abs(v))))
    origin = v
    best = v
    vals, mags = target.values_and_scale(v)
    best_res = float(np.max(np.abs(vals) / np.maximum(1.0, mags)))
    for _ in range(_END_NEWTON_ITERS):
        vals, jac, mags = target.values_jacobian_scale(best)
        res = float(np.max(np.abs(vals) / np.maximum(1.0, mags)))
        best_res = min(best_res, res)
        if res < tol:
            return True, best, res
        try:
            delta = np.linalg.solve(jac, -vals)
        except np.linalg.LinAlgError:
            return False, best, best_res
        if not np.all(np.isfinite(delta)):
            return False, best, best_res
        stepped = best + delta
        if float(np.max(np.abs(stepped - origin))) > cap:
            return False, best, best_res
        best = stepped
    vals, mags = target.values_and_scale(best)
    res = float(np.max(np.abs(vals) / np.maximum(1.0, mags)))
    return res < tol, best, min(res, best_res)


def track_many(
    t_exps,
    t_coefs,
    t_offs,
    s_exps,
    s_coefs,
    s_offs,
    starts,
    gamma,
    initial_step,
    min_step,
    newton_tol,
    max_newton,
    norm_guard,
    max_steps=20000,
):
    """Track every start root to t=1.

    Returns (endpoints, status, scaled residuals, steps, final t) arrays.
    """
    target = TermSystem(t_exps, t_coefs, t_offs)
    start = TermSystem(s_exps, s_coefs, s_offs)
    starts = np.asarray(starts, dtype=np.complex128)
    npaths = starts.shape[0]
    ends = np.array(starts, dtype=np.complex128)
    status = np.full(npaths, STATUS_STEP_UNDERFLOW, dtype=np.int8)
    residuals = np.full(npaths, np.nan)
    steps = np.zeros(npaths, dtype=np.int64)
    final_t = np.zeros(npaths)

    for p in range(npaths):
        v = starts[p].copy()
        t = 0.0
        h = initial_step
        nsteps = 0
        verdict = None
        while t < 1.0 - 1e-14:
            nsteps += 1
            if nsteps > max_steps:
                verdict = STATUS_STEP_UNDERFLOW
                break
            h = min(h, 1.0 - t)
            accepted = False
            k1 = _tangent(target, start, gamma, v, t)
            if k1 is not None:
                k2 = _tangent(target, start, gamma, v + 0.5 * h * k1, t + 0.5 * h)
                k3 = (
                    None
                    if k2 is None
                    else _tangent(target, start, gamma, v + 0.5 * h * k2, t + 0.5 * h)
                )
                k4 = (
                    None
                    if k3 is None
                    else _tangent(target, start, gamma, v + h * k3, t + h)
                )
                if k4 is not None:
                    predicted = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                    if np.all(np.isfinite(predicted)):
                        ok, corrected, iters = _correct(
                            target, start, gamma, predicted, t + h, newton_tol, max_newton
                        )
                        if ok:
                            # Reject corrections that leave the predictor's
                            # tube: they signal a jump onto a different path.
                            moved = float(np.max(np.abs(corrected - predicted)))
                            allowed = 0.25 * max(
                                float(np.max(np.abs(predicted - v))), 0.1 * h
                            )
                            if moved <= allowed:
                                v = corrected
                                t = t + h
                                accepted = True
                                if iters <= 1:
                                    h = min(initial_step, 2.0 * h)
            if accepted:
                if float(np.max(np.abs(v))) > norm_guard:
                    verdict = STATUS_NORM_GUARD
                    break
            else:
                h *= 0.5
                if h < min_step:
                    verdict = STATUS_STEP_UNDERFLOW
                    break
        steps[p] = nsteps
        final_t[p] = t
        if verdict is None:
            ok, v, res = _refine_endpoint(target, v, newton_tol)
            residuals[p] = res
            if float(np.max(np.abs(v))) > norm_guard:
                verdict = STATUS_NORM_GUARD
            else:
                verdict = STATUS_CONVERGED if ok else STATUS_REFINE_FAILED
        ends[p] = v
        status[p] = verdict
    return ends, status, residuals, steps, final_t
