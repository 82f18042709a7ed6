"""Binary forms, the Bombieri-Weyl pairing, and the harmonic basis.

A :class:`BinaryForm` of degree d is the coefficient vector (c_0, ..., c_d) of
f = sum_k c_k x^(d-k) y^k.  The Bombieri-Weyl bilinear form is implemented two
independent ways that must agree exactly:

* :func:`bw_pair_coeff` divides the raw coefficient products by binomials,
* :func:`bw_pair_diff` applies f as a differential operator to g and divides
  by d!.

It is the unique bilinear form with Q((ax+by)^d, (cx+ey)^d) = (ac+be)^d, so
powers of isotropic linear forms such as (x+iy)^d are self-orthogonal.

The harmonic basis of degree-d forms consists of q^i*(x+iy)^(d-2i) and
q^i*(x-iy)^(d-2i) for q = x^2+y^2 (plus q^(d/2) alone in even degree);
:func:`harmonic_components` inverts that basis change exactly.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Sequence

from .exactcore import (
    GaussianRational,
    I,
    ONE,
    PolynomialError,
    SparsePoly,
    ZERO,
    exact_inverse,
)


@dataclass(frozen=True)
class HarmonicBasisIndex:
    """Index (n, j) of the degree-n basis element (x+iy)^(n-j) (x-iy)^j."""

    n: int
    j: int

    def __post_init__(self):
        if not 0 <= self.j <= self.n:
            raise ValueError(f"index j={self.j} out of range for degree {self.n}")


class BinaryForm:
    """Homogeneous binary form of fixed degree with exact coefficients."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Sequence):
        if degree < 0:
            raise PolynomialError("degree must be nonnegative")
        coeffs = tuple(GaussianRational.coerce(c) for c in coeffs)
        if len(coeffs) != degree + 1:
            raise PolynomialError(
                f"degree-{degree} form needs {degree + 1} coefficients, got {len(coeffs)}"
            )
        self.degree = degree
        self.coeffs = coeffs

    @classmethod
    def zero(cls, degree: int) -> "BinaryForm":
        return cls(degree, [ZERO] * (degree + 1))

    @classmethod
    def linear_power(cls, a, b, degree: int) -> "BinaryForm":
        """(a x + b y)^degree, expanded exactly."""
        a = GaussianRational.coerce(a)
        b = GaussianRational.coerce(b)
        return cls(
            degree,
            [math.comb(degree, k) * a ** (degree - k) * b**k for k in range(degree + 1)],
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise PolynomialError("cannot add forms of different degree")
        return BinaryForm(self.degree, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise PolynomialError("cannot subtract forms of different degree")
        return BinaryForm(self.degree, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        d = self.degree + other.degree
        out = [ZERO] * (d + 1)
        for j, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for k, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[j + k] = out[j + k] + a * b
        return BinaryForm(d, out)

    def scale(self, value) -> "BinaryForm":
        c = GaussianRational.coerce(value)
        return BinaryForm(self.degree, [a * c for a in self.coeffs])

    def to_sparse_xy(self) -> SparsePoly:
        """The form as a SparsePoly in the two variables (x, y)."""
        d = self.degree
        return SparsePoly(
            2, {(d - k, k): c for k, c in enumerate(self.coeffs) if not c.is_zero()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, self.coeffs))

    def __repr__(self):
        from .exactcore import format_poly

        return f"BinaryForm({self.degree}, {format_poly(self.to_sparse_xy(), ['x', 'y'])!r})"


def bw_pair_coeff(f: BinaryForm, g: BinaryForm) -> GaussianRational:
    """Bombieri-Weyl pairing via coefficients: sum_k f_k g_k / C(d, k)."""
    if f.degree != g.degree:
        raise PolynomialError("pairing requires equal degrees")
    d = f.degree
    total = ZERO
    for k, (a, b) in enumerate(zip(f.coeffs, g.coeffs)):
        if not (a.is_zero() or b.is_zero()):
            total = total + a * b / math.comb(d, k)
    return total


def bw_pair_diff(f: BinaryForm, g: BinaryForm) -> GaussianRational:
    """Bombieri-Weyl pairing via differentiation: (1/d!) f(d/dx, d/dy) applied to g."""
    if f.degree != g.degree:
        raise PolynomialError("pairing requires equal degrees")
    d = f.degree
    g_poly = g.to_sparse_xy()
    total = ZERO
    for k, c in enumerate(f.coeffs):
        if c.is_zero():
            continue
        derived = g_poly
        for _ in range(d - k):
            derived = derived.diff(0)
        for _ in range(k):
            derived = derived.diff(1)
        total = total + c * derived.coefficient((0, 0))
    return total / math.factorial(d)


def harmonic_element(idx: HarmonicBasisIndex) -> BinaryForm:
    """The basis form (x+iy)^(n-j) (x-iy)^j of degree n, expanded."""
    plus = BinaryForm.linear_power(ONE, I, idx.n - idx.j)
    minus = BinaryForm.linear_power(ONE, -I, idx.j)
    return plus * minus


def pairing_rule(n: int, j: int, k: int) -> bool:
    """Whether degree-2n harmonic basis elements with indices j, k pair to nonzero."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not (0 <= j <= 2 * n and 0 <= k <= 2 * n):
        raise ValueError(f"indices (j={j}, k={k}) out of range for degree {2 * n}")
    return j + k == 2 * n


_basis_lock = threading.Lock()
_basis_cache: dict[int, tuple[tuple[GaussianRational, ...], ...]] = {}


def _harmonic_basis(degree: int) -> list[tuple[int, int]]:
    """Basis labels (i, sign) with sign +1 for (x+iy)^(d-2i), -1 for (x-iy)^(d-2i)."""
    labels: list[tuple[int, int]] = []
    for i in range(degree // 2 + 1):
        labels.append((i, +1))
        if degree - 2 * i > 0:
            labels.append((i, -1))
    return labels


def _basis_form(degree: int, i: int, sign: int) -> BinaryForm:
    q_power = BinaryForm.linear_power(ONE, I, i) * BinaryForm.linear_power(ONE, -I, i)
    tail = BinaryForm.linear_power(ONE, I if sign > 0 else -I, degree - 2 * i)
    return q_power * tail


def _basis_change_inverse(degree: int):
    with _basis_lock:
        cached = _basis_cache.get(degree)
    if cached is not None:
        return cached
    labels = _harmonic_basis(degree)
    columns = [_basis_form(degree, i, s).coeffs for i, s in labels]
    matrix = [[columns[c][r] for c in range(len(labels))] for r in range(degree + 1)]
    inverse = tuple(tuple(row) for row in exact_inverse(matrix))
    with _basis_lock:
        _basis_cache.setdefault(degree, inverse)
    return inverse


def harmonic_components(f: BinaryForm) -> list[tuple[int, BinaryForm]]:
    """Exact decomposition f = sum_i q^i * h_i with h_i harmonic of degree d-2i.

    Returns the nonzero components as (i, h_i) pairs; each h_i is a BinaryForm
    of degree d-2i (a degree-0 form, i.e. a constant, when d is even and
    i = d/2).  Reconstruction is exact by construction.
    """
    d = f.degree
    labels = _harmonic_basis(d)
    inverse = _basis_change_inverse(d)
    coords = [
        sum((row[r] * f.coeffs[r] for r in range(d + 1)), ZERO) for row in inverse
    ]
    by_level: dict[int, BinaryForm] = {}
    for (i, sign), c in zip(labels, coords):
        if c.is_zero():
            continue
        h_deg = d - 2 * i
        piece = BinaryForm.linear_power(ONE, I if sign > 0 else -I, h_deg).scale(c)
        if i in by_level:
            by_level[i] = by_level[i] + piece
        else:
            by_level[i] = piece
    return [(i, h) for i, h in sorted(by_level.items()) if not h.is_zero()]
