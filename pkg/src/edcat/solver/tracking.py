"""Backend selection and path tracking on top of the twin kernels.

The user-facing systems are affine; internally every run is homogenized with
one extra coordinate w and tracked on a random affine patch c.v = 1.  Points
at infinity then become ordinary nondegenerate endpoints with w ~ 0, so no
path has to chase coordinates toward overflow.  Endpoints are mapped back to
affine space, polished against the affine target, and classified:

* ``finite``             affine Newton converged below tolerance,
* ``at_infinity``        the affine representative exceeds the configured
                         infinity threshold (w essentially zero),
* ``singular_endpoint``  the corrector failed to converge at t=1,
* ``failed``             the step size underflowed mid-path.

The compiled Cython kernel is preferred when importable; the numpy kernel is
the drop-in fallback.  ``EDCAT_TRACKER=python`` or ``EDCAT_TRACKER=cython``
forces a choice.  Both kernels implement the same ``track_many`` contract and
are exercised against each other in the test suite and in
``benchmarks/bench_tracker.py``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _tracker_py
from .systems import ComplexPolySystem, StartSystem, TrackerConfig

_PATCH_NORM_GUARD = 1e14
_POLISH_ITERS = 6

STATUS_NAMES = ("finite", "at_infinity", "singular_endpoint", "failed")


def _load_compiled():
    try:
        from . import _tracker  # compiled extension, absent on pure installs
    except ImportError:
        return None
    return _tracker


def available_backends() -> dict:
    backends = {"python": _tracker_py}
    compiled = _load_compiled()
    if compiled is not None:
        backends["cython"] = compiled
    return backends


def get_backend(name: str | None = None):
    backends = available_backends()
    if name is None:
        name = os.environ.get("EDCAT_TRACKER")
    if name is None:
        name = "cython" if "cython" in backends else "python"
    if name not in backends:
        raise ValueError(
            f"tracker backend {name!r} unavailable; have {sorted(backends)}"
        )
    return name, backends[name]


@dataclass(frozen=True)
class Solution:
    """One path endpoint with its classification.

    ``residual`` is the magnitude-scaled residual of the affine target system
    (each equation divided by the sum of its evaluated term magnitudes), so
    the finite-endpoint tolerance is meaningful for solutions of any size.
    """

    point: tuple[complex, ...]
    residual: float
    newton_converged: bool
    classification: str


@dataclass(frozen=True)
class SolutionSet:
    """All endpoints of one homotopy run."""

    solutions: tuple[Solution, ...]
    path_count: int
    bezout_number: int
    backend: str

    def __post_init__(self):
        if self.path_count != self.bezout_number:
            raise ValueError("path count must equal the Bezout number of the start system")
        for sol in self.solutions:
            if sol.classification == "finite" and not sol.newton_converged:
                raise ValueError("finite endpoints must have converged")

    def by_classification(self, name: str) -> list[Solution]:
        return [s for s in self.solutions if s.classification == name]

    def counts(self) -> dict:
        out = {name: 0 for name in STATUS_NAMES}
        for s in self.solutions:
            out[s.classification] += 1
        return out


def _flatten_terms(equations: list[dict], nvars: int):
    exps_rows: list[tuple[int, ...]] = []
    coefs: list[complex] = []
    offsets = [0]
    for eq in equations:
        for e in sorted(eq):
            exps_rows.append(e)
            coefs.append(eq[e])
        offsets.append(len(exps_rows))
    return (
        np.array(exps_rows, dtype=np.int64).reshape(len(exps_rows), nvars),
        np.array(coefs, dtype=np.complex128),
        np.array(offsets, dtype=np.int64),
    )


def _homogenize_equation(terms: dict, degree: int) -> dict:
    out = {}
    for exps, coeff in terms.items():
        out[exps + (degree - sum(exps),)] = coeff
    return out


def _patched_pair(target: ComplexPolySystem, start: StartSystem, patch: np.ndarray):
    """Homogenized target/start term data sharing the patch row c.v = 1."""
    nv = target.nvars
    patch_row = {tuple(int(i == k) for i in range(nv + 1)): patch[k] for k in range(nv + 1)}
    patch_row[(0,) * (nv + 1)] = -1.0

    t_eqs = [
        _homogenize_equation(eq, d) for eq, d in zip(target.equations, target.degrees)
    ]
    t_eqs.append(dict(patch_row))
    s_eqs = []
    for j, (d, r) in enumerate(zip(start.degrees, start.constants)):
        lead = [0] * (nv + 1)
        lead[j] = d
        tail = [0] * (nv + 1)
        tail[nv] = d
        s_eqs.append({tuple(lead): 1.0, tuple(tail): -r})
    s_eqs.append(dict(patch_row))
    return (
        _flatten_terms(t_eqs, nv + 1),
        _flatten_terms(s_eqs, nv + 1),
    )


def _draw_patch(nv: int, roots_aug: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random unit patch vector staying safely away from every start root."""
    for _ in range(32):
        raw = rng.standard_normal(nv + 1) + 1j * rng.standard_normal(nv + 1)
        patch = raw / np.linalg.norm(raw)
        values = roots_aug @ patch
        scales = np.linalg.norm(roots_aug, axis=1)
        if np.min(np.abs(values) / scales) > 1e-3:
            return patch
    raise RuntimeError("could not find a usable affine patch")


def _scaled_residual(target: ComplexPolySystem, point: np.ndarray) -> float:
    vals, scales = target.evaluate_scaled(point)
    return float(np.max(np.abs(vals) / scales))


_CONFIRM_STEP_RTOL = 1e-6


def _strict_affine_newton(target: ComplexPolySystem, point: np.ndarray, tol: float):
    """Capped Newton against the affine target.

    Declares convergence only when a small scaled residual is confirmed by a
    small Newton step: near-infinity endpoints can show tiny scaled residuals
    through cancellation, but their Newton steps stay large.  Total movement
    is capped at 10% of the point's size, so the iteration can never hop into
    the basin of a distant solution; amplification beyond 8x is reported as
    ``grew``, the signature of the expansive deficient direction at infinity.

    Returns (converged, point, scaled residual, grew).
    """
    scale0 = 1.0 + float(np.max(np.abs(point)))
    cap = 0.1 * scale0
    growth_limit = 8.0 * scale0
    cur = point
    res = _scaled_residual(target, cur)
    for _ in range(_POLISH_ITERS):
        vals, scales = target.evaluate_scaled(cur)
        res = float(np.max(np.abs(vals) / scales))
        jac = target.jacobian(cur)
        try:
            delta = np.linalg.solve(jac, -vals)
        except np.linalg.LinAlgError:
            return False, cur, res, False
        if not np.all(np.isfinite(delta)):
            return False, cur, res, True
        step = float(np.max(np.abs(delta)))
        if res < tol and step <= _CONFIRM_STEP_RTOL * (1.0 + float(np.max(np.abs(cur)))):
            return True, cur, res, False
        stepped = cur + delta
        if float(np.max(np.abs(stepped))) > growth_limit:
            return False, cur, res, True
        if float(np.max(np.abs(stepped - point))) > cap:
            return False, cur, res, False
        cur = stepped
    res = _scaled_residual(target, cur)
    return False, cur, res, False


_INFINITY_W_RTOL = 1e-6
_PUSH_ITERS = 16


def _push_w_limit(patched: _tracker_py.TermSystem, v: np.ndarray):
    """Estimate the limit of the w coordinate under plain Newton iteration.

    Near a multiple root the Newton iterates of w form a geometric sequence,
    so Aitken extrapolation of the last three values separates "w tends to 0"
    (a point at infinity) from "w tends to a finite value" by many orders of
    magnitude.  Unlike a residual-gated refinement, this keeps iterating even
    though the residual is already tiny.
    """
    ws = [v[-1]]
    current = v
    cap = 0.5 * (1.0 + float(np.max(np.abs(v))))
    for _ in range(_PUSH_ITERS):
        vals, jac, _mags = patched.values_jacobian_scale(current)
        try:
            delta = np.linalg.solve(jac, -vals)
        except np.linalg.LinAlgError:
            delta, *_ = np.linalg.lstsq(jac, -vals, rcond=None)
        if not np.all(np.isfinite(delta)):
            break
        stepped = current + delta
        if not np.all(np.isfinite(stepped)) or float(
            np.max(np.abs(stepped - v))
        ) > cap:
            break
        current = stepped
        ws.append(current[-1])
    estimate = ws[-1]
    if len(ws) >= 3:
        d1 = ws[-1] - ws[-2]
        d0 = ws[-2] - ws[-3]
        denom = d1 - d0
        if denom != 0 and np.isfinite(denom):
            aitken = ws[-1] - d1 * d1 / denom
            if np.isfinite(aitken):
                estimate = aitken
        # A monotone drop of three orders of magnitude is itself conclusive:
        # the w sequence is draining to zero.
        mags = [abs(x) for x in ws]
        if mags[-1] <= 1e-3 * mags[0] and all(
            b <= a for a, b in zip(mags, mags[1:])
        ):
            estimate = 0.0
    return current, estimate


def _classify_endpoint(
    target: ComplexPolySystem,
    patched: _tracker_py.TermSystem,
    end: np.ndarray,
    kernel_status: int,
    config: TrackerConfig,
) -> Solution:
    a, w = end[:-1], end[-1]
    sup = float(np.max(np.abs(a)))

    def infinity(point) -> Solution:
        return Solution(
            point=tuple(map(complex, point)),
            residual=float("nan"),
            newton_converged=False,
            classification="at_infinity",
        )

    if abs(w) == 0.0 or sup / abs(w) > config.infinity_threshold:
        return infinity(a)
    affine = a / w
    converged, polished, res, grew = _strict_affine_newton(
        target, affine, config.newton_tolerance
    )
    if converged:
        return Solution(
            point=tuple(map(complex, polished)),
            residual=res,
            newton_converged=True,
            classification="finite",
        )
    if grew:
        return infinity(affine)
    # Not an affine solution nearby and not visibly expansive: decide the
    # w -> 0 question by pushing Newton on the patched system.
    pushed, w_limit = _push_w_limit(patched, end)
    scale = float(np.max(np.abs(pushed)))
    if np.isfinite(scale) and scale > 0 and abs(w_limit) <= _INFINITY_W_RTOL * scale:
        return infinity(pushed[:-1])
    # Runaway fallback: far out with no affine solution nearby means the path
    # stalled en route to infinity (genuinely large finite solutions are
    # nondegenerate and were caught by the strict Newton above).
    if sup / abs(w) > max(1e4, config.infinity_threshold**0.5):
        return infinity(affine)
    if kernel_status == _tracker_py.STATUS_STEP_UNDERFLOW:
        cls = "failed"
    else:
        cls = "singular_endpoint"
    return Solution(
        point=tuple(map(complex, affine)),
        residual=res,
        newton_converged=False,
        classification=cls,
    )


def _track_raw(
    target: ComplexPolySystem,
    start: StartSystem,
    start_roots: np.ndarray,
    gamma: complex,
    config: TrackerConfig,
    backend: str | None,
    rng: np.random.Generator | None,
) -> tuple[str, list[Solution]]:
    name, kernel = get_backend(backend)
    if rng is None:
        rng = np.random.default_rng(config.seed)
    roots = np.asarray(start_roots, dtype=np.complex128)
    roots_aug = np.hstack([roots, np.ones((roots.shape[0], 1), dtype=np.complex128)])
    patch = _draw_patch(target.nvars, roots_aug, rng)
    roots_patched = roots_aug / (roots_aug @ patch)[:, None]
    (t_exps, t_coefs, t_offs), (s_exps, s_coefs, s_offs) = _patched_pair(
        target, start, patch
    )
    ends, status, _residuals, _steps, _final_t = kernel.track_many(
        t_exps,
        t_coefs,
        t_offs,
        s_exps,
        s_coefs,
        s_offs,
        roots_patched,
        complex(gamma),
        config.initial_step,
        config.min_step,
        config.newton_tolerance,
        config.max_newton_iters,
        _PATCH_NORM_GUARD,
    )
    patched_target = _tracker_py.TermSystem(t_exps, t_coefs, t_offs)
    solutions = []
    for p in range(len(ends)):
        sol = _classify_endpoint(target, patched_target, ends[p], int(status[p]), config)
        if sol.classification == "finite" and not sol.residual < config.newton_tolerance:
            raise AssertionError("finite endpoint above tolerance")
        solutions.append(sol)
    return name, solutions


def track_paths(
    target: ComplexPolySystem,
    start: StartSystem,
    start_roots: np.ndarray,
    gamma: complex,
    config: TrackerConfig | None = None,
    backend: str | None = None,
    rng: np.random.Generator | None = None,
) -> SolutionSet:
    """Track all start roots through H(v,t) = (1-t)*gamma*S(v) + t*T(v)."""
    config = config or TrackerConfig()
    name, solutions = _track_raw(
        target, start, start_roots, gamma, config, backend, rng
    )
    return SolutionSet(
        solutions=tuple(solutions),
        path_count=len(solutions),
        bezout_number=target.bezout_number(),
        backend=name,
    )


def track_path(
    start_root: np.ndarray,
    target: ComplexPolySystem,
    start: StartSystem,
    gamma: complex,
    config: TrackerConfig | None = None,
    backend: str | None = None,
) -> Solution:
    """Track a single start root (no Bezout-completeness bookkeeping)."""
    config = config or TrackerConfig()
    roots = np.asarray(start_root, dtype=np.complex128).reshape(1, -1)
    _, solutions = _track_raw(target, start, roots, gamma, config, backend, None)
    return solutions[0]
