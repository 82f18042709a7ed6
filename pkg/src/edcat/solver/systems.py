"""Polynomial systems for the numeric route, and total-degree start data.

The central system is the set of criticality conditions for the Bombieri-Weyl
distance from a data point u to the cone of squared binary forms: with
f = sum_k a_k x^(n-k) y^k and F(a) the coefficient vector of f^2, criticality
of |u - F(a)|^2 along the parametrization reads

    <u - F(a), f * x^(n-j) y^j>_BW = 0   for j = 0..n,

one cubic per unknown, so the Bezout number is 3^(n+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

ComplexTerms = dict[tuple[int, ...], complex]


@dataclass(frozen=True)
class TrackerConfig:
    """Knobs for predictor-corrector path tracking."""

    initial_step: float = 0.05
    min_step: float = 1e-12
    newton_tolerance: float = 1e-10
    max_newton_iters: int = 4
    infinity_threshold: float = 1e8
    dedup_tolerance: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if not (0 < self.min_step <= self.initial_step < 1):
            raise ValueError("need 0 < min_step <= initial_step < 1")
        if self.newton_tolerance <= 0 or self.dedup_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.infinity_threshold <= 0:
            raise ValueError("infinity threshold must be positive")
        if self.max_newton_iters < 1:
            raise ValueError("need at least one corrector iteration")


class ComplexPolySystem:
    """Square system of sparse polynomials with complex float coefficients."""

    def __init__(self, nvars: int, equations: list[ComplexTerms]):
        self.nvars = nvars
        self.equations = [dict(eq) for eq in equations]
        for eq in self.equations:
            for exps in eq:
                if len(exps) != nvars:
                    raise ValueError("exponent vector length mismatch")
        self.degrees = [
            max((sum(e) for e in eq), default=0) for eq in self.equations
        ]
        self._compiled = None

    @property
    def is_square(self) -> bool:
        return len(self.equations) == self.nvars

    def bezout_number(self) -> int:
        return math.prod(self.degrees)

    def compiled(self):
        """Flattened term arrays (exponents, coefficients, equation offsets)."""
        if self._compiled is None:
            exps_rows: list[tuple[int, ...]] = []
            coefs: list[complex] = []
            offsets = [0]
            for eq in self.equations:
                for e in sorted(eq):
                    exps_rows.append(e)
                    coefs.append(eq[e])
                offsets.append(len(exps_rows))
            self._compiled = (
                np.array(exps_rows, dtype=np.int64).reshape(len(exps_rows), self.nvars),
                np.array(coefs, dtype=np.complex128),
                np.array(offsets, dtype=np.int64),
            )
        return self._compiled

    def evaluate(self, point: np.ndarray) -> np.ndarray:
        exps, coefs, offsets = self.compiled()
        mono = coefs * np.prod(point[None, :] ** exps, axis=1)
        return np.add.reduceat(mono, offsets[:-1])

    def evaluate_scaled(self, point: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Values together with per-equation magnitude scales max(1, sum |term|).

        Dividing a residual by the scale makes convergence criteria meaningful
        for solutions of any size (the achievable absolute residual grows with
        the evaluated term magnitudes through floating-point cancellation).
        """
        exps, coefs, offsets = self.compiled()
        mono = coefs * np.prod(point[None, :] ** exps, axis=1)
        vals = np.add.reduceat(mono, offsets[:-1])
        scales = np.maximum(1.0, np.add.reduceat(np.abs(mono), offsets[:-1]))
        return vals, scales

    def jacobian(self, point: np.ndarray) -> np.ndarray:
        exps, coefs, offsets = self.compiled()
        neq = len(self.equations)
        jac = np.zeros((neq, self.nvars), dtype=np.complex128)
        pows = point[None, :] ** exps
        # Products skipping one factor, via prefix/suffix cumulative products.
        left = np.ones_like(pows)
        right = np.ones_like(pows)
        left[:, 1:] = np.cumprod(pows[:, :-1], axis=1)
        right[:, :-1] = np.cumprod(pows[:, ::-1], axis=1)[:, -2::-1]
        for v in range(self.nvars):
            e = exps[:, v]
            dpow = np.where(e > 0, point[v] ** np.maximum(e - 1, 0), 0.0)
            dmono = coefs * e * dpow * left[:, v] * right[:, v]
            jac[:, v] = np.add.reduceat(dmono, offsets[:-1])
        return jac


@dataclass(frozen=True)
class StartSystem:
    """Total-degree start system a_j^(d_j) = r_j with all roots known."""

    degrees: tuple[int, ...]
    constants: tuple[complex, ...]

    def roots(self) -> np.ndarray:
        per_var = []
        for d, r in zip(self.degrees, self.constants):
            base = r ** (1.0 / d)
            per_var.append(
                [base * np.exp(2j * np.pi * k / d) for k in range(d)]
            )
        return np.array(list(product(*per_var)), dtype=np.complex128)

    def evaluate(self, point: np.ndarray) -> np.ndarray:
        return np.array(
            [point[j] ** d - r for j, (d, r) in enumerate(zip(self.degrees, self.constants))],
            dtype=np.complex128,
        )


def bw_weights(d: int) -> np.ndarray:
    """1 / C(d, m) weights of the Bombieri-Weyl pairing in degree d."""
    return np.array([1.0 / math.comb(d, m) for m in range(d + 1)])


def random_data_point(n: int, rng: np.random.Generator) -> np.ndarray:
    """Degree-2n data form: independent complex coordinates, Re/Im uniform in [-1, 1]."""
    size = 2 * n + 1
    return rng.uniform(-1, 1, size) + 1j * rng.uniform(-1, 1, size)


def square_map(a: np.ndarray) -> np.ndarray:
    """Coefficient vector of f^2 from the coefficient vector of f."""
    return np.convolve(a, a)


def build_ed_critical_system(
    n: int, u: np.ndarray | None = None, seed: int = 0
) -> ComplexPolySystem:
    """Criticality equations of the BW distance from u on the squares cone.

    Unknowns a_0..a_n; equation j is sum_m (u_m - F_m(a)) a_(m-j) / C(2n, m)
    with F the squaring map, total degree 3.  When ``u`` is omitted it is
    drawn from a generator seeded with ``seed``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if u is None:
        u = random_data_point(n, np.random.default_rng(seed))
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2 * n + 1,):
        raise ValueError(f"data point must have {2 * n + 1} coordinates")
    weights = bw_weights(2 * n)
    nv = n + 1
    equations: list[ComplexTerms] = []
    for j in range(nv):
        terms: ComplexTerms = {}

        def add(exps: tuple[int, ...], value: complex, terms=terms):
            if value != 0:
                terms[exps] = terms.get(exps, 0.0) + value

        for m in range(j, j + n + 1):
            w = weights[m]
            lin = [0] * nv
            lin[m - j] = 1
            add(tuple(lin), w * u[m])
            for p in range(max(0, m - n), min(n, m) + 1):
                q = m - p
                cub = [0] * nv
                cub[p] += 1
                cub[q] += 1
                cub[m - j] += 1
                add(tuple(cub), -w)
        equations.append(terms)
    return ComplexPolySystem(nv, equations)


def total_degree_start(
    system: ComplexPolySystem, rng: np.random.Generator
) -> tuple[StartSystem, np.ndarray]:
    """Start system with unit-modulus constants and its full root set."""
    if not system.is_square:
        raise ValueError("total-degree start needs a square system")
    phases = rng.uniform(0, 2 * np.pi, system.nvars)
    constants = tuple(np.exp(1j * phases))
    start = StartSystem(degrees=tuple(system.degrees), constants=constants)
    return start, start.roots()


def unit_gamma(rng: np.random.Generator) -> complex:
    """Random unit-modulus homotopy constant."""
    return complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))


def sparse_poly_to_terms(poly) -> ComplexTerms:
    """Exact SparsePoly -> complex term map (for chart systems)."""
    return poly.to_complex_terms()
