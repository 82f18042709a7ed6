"""Solution counting on top of the path tracker.

Counts are made deterministic by sorting endpoints by a canonical rounded key
before deduplication, so scheduling or backend choice cannot change the
reported integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..catalecticant import build_quartic
from .systems import (
    ComplexPolySystem,
    TrackerConfig,
    build_ed_critical_system,
    bw_weights,
    random_data_point,
    square_map,
    total_degree_start,
    unit_gamma,
)
from .tracking import SolutionSet, track_paths

ComplexTerms = dict[tuple[int, ...], complex]

ISOTROPY_RTOL = 1e-8
MAX_FAILED_FRACTION = 0.05


class PathFailureError(RuntimeError):
    """Too many failed paths (or a vanished solution set) for a trustworthy count."""


def _normalize_projective(v: np.ndarray) -> np.ndarray:
    pivot = int(np.argmax(np.abs(v)))
    return v / v[pivot]


def _canonical_order(points: list[np.ndarray]) -> list[np.ndarray]:
    def key(v: np.ndarray):
        r = np.round(v, 9)
        return tuple(x for c in r for x in (c.real, c.imag))

    return sorted(points, key=key)


def dedup_projective(points: list[np.ndarray], tolerance: float) -> list[np.ndarray]:
    """Distinct points up to complex scale, within the given tolerance."""
    reps: list[np.ndarray] = []
    for v in _canonical_order([_normalize_projective(p) for p in points]):
        if all(float(np.max(np.abs(v - r))) > tolerance for r in reps):
            reps.append(v)
    return reps


def dedup_points(points: list[np.ndarray], tolerance: float) -> list[np.ndarray]:
    """Distinct points as plain vectors (no projective scaling)."""
    reps: list[np.ndarray] = []
    for v in _canonical_order(list(points)):
        if all(float(np.max(np.abs(v - r))) > tolerance for r in reps):
            reps.append(v)
    return reps


@dataclass(frozen=True)
class EDNumericRun:
    """Everything one numeric ED run produced, plus the path accounting."""

    n: int
    seed: int
    count: int
    solution_set: SolutionSet
    critical_points: tuple[tuple[complex, ...], ...]
    distinct_nonzero: tuple[tuple[complex, ...], ...]
    raw_finite_nonzero: int
    origin_paths: int
    at_infinity_paths: int
    singular_paths: int
    failed_paths: int
    isotropic_discarded: int
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def path_count(self) -> int:
        return self.solution_set.path_count


def run_numeric_eddegree(
    n: int,
    seed: int = 0,
    config: TrackerConfig | None = None,
    backend: str | None = None,
) -> EDNumericRun:
    """Count distinct critical squares of the BW distance from a random point.

    Tracks all 3^(n+1) total-degree paths, discards the origin, paths at
    infinity, failed paths and isotropic endpoints, then deduplicates the
    squared forms projectively.  Nonzero solutions come in (a, -a) pairs
    mapping to one square each.
    """
    config = config or TrackerConfig(seed=seed)
    rng = np.random.default_rng(seed)
    u = random_data_point(n, rng)
    system = build_ed_critical_system(n, u)
    start, roots = total_degree_start(system, rng)
    gamma = unit_gamma(rng)
    solset = track_paths(system, start, roots, gamma, config, backend)

    counts = solset.counts()
    failed = counts["failed"]
    singular = counts["singular_endpoint"]
    warnings = []
    if failed:
        warnings.append(f"{failed} of {solset.path_count} paths failed")
    if singular:
        warnings.append(f"{singular} singular endpoints")
    if failed > MAX_FAILED_FRACTION * solset.path_count:
        raise PathFailureError(
            f"{failed}/{solset.path_count} paths failed; rerun with another seed/config"
        )

    weights = bw_weights(2 * n)
    origin = 0
    isotropic = 0
    squares: list[np.ndarray] = []
    nonzero_points: list[np.ndarray] = []
    for sol in solset.by_classification("finite"):
        a = np.array(sol.point, dtype=np.complex128)
        if float(np.max(np.abs(a))) <= config.dedup_tolerance:
            origin += 1
            continue
        big_f = square_map(a)
        self_pairing = complex(np.sum(big_f * big_f * weights))
        norm2 = float(np.sum(np.abs(big_f) ** 2 * weights))
        if abs(self_pairing) < ISOTROPY_RTOL * norm2:
            isotropic += 1
            continue
        nonzero_points.append(a)
        squares.append(big_f)

    distinct = dedup_projective(squares, config.dedup_tolerance)
    distinct_a = dedup_points(nonzero_points, config.dedup_tolerance)
    return EDNumericRun(
        n=n,
        seed=seed,
        count=len(distinct),
        solution_set=solset,
        critical_points=tuple(tuple(map(complex, v)) for v in distinct),
        distinct_nonzero=tuple(tuple(map(complex, v)) for v in distinct_a),
        raw_finite_nonzero=len(squares),
        origin_paths=origin,
        at_infinity_paths=counts["at_infinity"],
        singular_paths=singular,
        failed_paths=failed,
        isotropic_discarded=isotropic,
        warnings=tuple(warnings),
    )


def numeric_eddegree(
    n: int,
    seed: int = 0,
    config: TrackerConfig | None = None,
    backend: str | None = None,
) -> int:
    return run_numeric_eddegree(n, seed, config, backend).count


# -- chart solving for auxiliary point counts ----------------------------------


def dehomogenize_terms(terms: ComplexTerms, chart: int) -> ComplexTerms:
    """Set variable ``chart`` to 1, dropping it from the exponent vectors."""
    out: ComplexTerms = {}
    for exps, coeff in terms.items():
        key = exps[:chart] + exps[chart + 1 :]
        out[key] = out.get(key, 0.0) + coeff
    return {e: c for e, c in out.items() if c != 0}


def _embed_chart_point(point: np.ndarray, chart: int) -> np.ndarray:
    out = np.empty(len(point) + 1, dtype=np.complex128)
    out[:chart] = point[:chart]
    out[chart] = 1.0
    out[chart + 1 :] = point[chart:]
    return out


def _solve_chart(
    terms_list: list[ComplexTerms],
    m: int,
    chart: int,
    rng: np.random.Generator,
    config: TrackerConfig,
    backend,
) -> tuple[list[np.ndarray], SolutionSet]:
    """Track the system dehomogenized in one chart; embed finite roots back."""
    system = ComplexPolySystem(
        m - 1, [dehomogenize_terms(t, chart) for t in terms_list]
    )
    start, roots = total_degree_start(system, rng)
    gamma = unit_gamma(rng)
    solset = track_paths(system, start, roots, gamma, config, backend)
    found = [
        _embed_chart_point(np.array(s.point), chart)
        for s in solset.by_classification("finite")
    ]
    return found, solset


def _random_quadric_terms(rng: np.random.Generator, zero_at: tuple[int, ...] | None = None) -> ComplexTerms:
    """Random complex quadric in 3 variables; optionally forced through a point."""
    exponents = [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]
    coeffs = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    terms = dict(zip(exponents, coeffs))
    if zero_at is not None:
        # Adjust the constant-direction coefficient so h(zero_at) = 0.
        point = np.array(zero_at, dtype=np.complex128)
        value = sum(c * np.prod(point**np.array(e)) for e, c in terms.items())
        pivot = max(
            exponents,
            key=lambda e: abs(np.prod(point ** np.array(e))),
        )
        terms[pivot] -= value / np.prod(point ** np.array(pivot))
    return terms


def count_slice_points_n2(
    seed: int = 0,
    config: TrackerConfig | None = None,
    backend: str | None = None,
    max_retries: int = 3,
    quadric: ComplexTerms | None = None,
) -> int:
    """Distinct points cut on the n=2 quartic by a quadric in P^2.

    Solves {Q_2 = 0, h = 0} in the charts z0=1 and z2=1 and merges the results
    projectively; a generic quadric gives eight points.  Draws showing
    singular or failed paths are retried with fresh randomness (unless the
    quadric was supplied by the caller, in which case its count is reported
    as-is: cutting through a singular point legitimately yields fewer points).
    """
    config = config or TrackerConfig(seed=seed)
    quartic_terms = build_quartic(2).poly.to_complex_terms()
    rng = np.random.default_rng(seed)
    if quadric is not None:
        count, _ = _count_slice_points(quartic_terms, quadric, rng, config, backend)
        return count
    for _ in range(max_retries):
        h = _random_quadric_terms(rng)
        count, nongeneric = _count_slice_points(quartic_terms, h, rng, config, backend)
        if not nongeneric:
            return count
    raise PathFailureError("no generic quadric found within the retry budget")


def _count_slice_points(
    quartic_terms: ComplexTerms,
    h: ComplexTerms,
    rng: np.random.Generator,
    config: TrackerConfig,
    backend,
) -> tuple[int, bool]:
    points: list[np.ndarray] = []
    nongeneric = False
    for chart in (0, 2):
        found, solset = _solve_chart([quartic_terms, h], 3, chart, rng, config, backend)
        points.extend(found)
        counts = solset.counts()
        if counts["singular_endpoint"] or counts["failed"]:
            nongeneric = True
    distinct = dedup_projective(points, config.dedup_tolerance)
    return len(distinct), nongeneric


def solve_partials_n3(
    config: TrackerConfig | None = None,
    seed: int = 0,
    backend: str | None = None,
    residual_tolerance: float = 1e-8,
) -> list[tuple[complex, ...]]:
    """All projective common zeros of the four partials of the n=3 quartic.

    The four cubics are an overdetermined projective problem: in each of the
    charts z0=1, z1=1, z3=1 we track three random complex combinations of
    them, then keep only endpoints whose residual on all four partials is
    below tolerance, merging the charts projectively.
    """
    config = config or TrackerConfig(seed=seed)
    rng = np.random.default_rng(seed)
    partials = [p.to_complex_terms() for p in build_quartic(3).partials()]
    partial_system = ComplexPolySystem(4, partials)

    kept: list[np.ndarray] = []
    for chart in (0, 1, 3):
        mix = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        combos: list[ComplexTerms] = []
        for row in mix:
            terms: ComplexTerms = {}
            for c, p in zip(row, partials):
                for e, v in p.items():
                    terms[e] = terms.get(e, 0.0) + c * v
            combos.append(terms)
        found, _ = _solve_chart(combos, 4, chart, rng, config, backend)
        for point in found:
            scaled = point / np.max(np.abs(point))
            residual = float(np.max(np.abs(partial_system.evaluate(scaled))))
            if residual < residual_tolerance:
                kept.append(scaled)
    if not kept:
        raise PathFailureError("no solution of the partials system survived filtering")
    distinct = dedup_projective(kept, config.dedup_tolerance)
    return [tuple(map(complex, v)) for v in distinct]
