"""The quartic invariant of squared binary forms and its singularity structure.

Writing a degree-n binary form in harmonic coordinates,

    f = sum_j z_j (x+iy)^(n-j) (x-iy)^j,

the Bombieri-Weyl square norm of f^2 is a quartic polynomial Q_n in
z_0..z_n.  Q_n is isobaric of weight 2n (every monomial's index sum is 2n),
has real coefficients, is symmetric under z_j <-> z_(n-j), and vanishes
doubly along osculating loci of the rational normal curve once n is large
enough.  This module constructs Q_n exactly, checks those structural facts
monomial-by-monomial, verifies claimed singular components by exact
substitution of their parametrizations, and computes the middle-catalecticant
(Hankel) determinant whose vanishing detects forms of rank at most n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .bwforms import BinaryForm, HarmonicBasisIndex, harmonic_element
from .exactcore import (
    GaussianRational,
    ONE,
    PolynomialError,
    SparsePoly,
    ZERO,
    content_normalize,
    exact_det,
)


@dataclass(frozen=True)
class SymbolicForm:
    """A binary form whose coefficients are polynomials in z_0..z_(m-1)."""

    form_degree: int
    z_count: int
    coeffs: tuple[SparsePoly, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.form_degree + 1:
            raise PolynomialError("coefficient vector length must be degree + 1")
        for c in self.coeffs:
            if c.nvars != self.z_count:
                raise PolynomialError("coefficient polynomial has wrong variable count")

    def substitute_z(self, values: Sequence) -> BinaryForm:
        """Numeric binary form obtained by evaluating the z variables."""
        return BinaryForm(self.form_degree, [c.eval(values) for c in self.coeffs])


@dataclass(frozen=True)
class QuarticInvariant:
    """Content-normalized quartic invariant of squares at half-degree n."""

    n: int
    poly: SparsePoly
    raw_scalar: GaussianRational

    def __post_init__(self):
        if self.poly.nvars != self.n + 1:
            raise PolynomialError("quartic must live in n+1 variables")
        for exps, coeff in self.poly.items():
            if sum(exps) != 4:
                raise PolynomialError("quartic contains a non-quartic monomial")
            if sum(i * e for i, e in enumerate(exps)) != 2 * self.n:
                raise PolynomialError("quartic is not isobaric of weight 2n")
            if not coeff.is_real():
                raise PolynomialError("quartic has a non-real coefficient")

    def partials(self) -> list[SparsePoly]:
        return [self.poly.diff(i) for i in range(self.n + 1)]


@dataclass(frozen=True)
class SingularComponent:
    """A claimed component of the singular locus, with an exact parametrization.

    ``parametrization`` maps parameter variables to the z coordinates: entry i
    is a polynomial in the parameters giving z_i.  Construction checks that the
    parametrization annihilates every ideal generator exactly.
    """

    label: str
    vanishing_ideal_generators: tuple[SparsePoly, ...] = field(repr=False)
    parametrization: tuple[SparsePoly, ...] = field(repr=False)
    projective_degree: int
    dimension: int

    def __post_init__(self):
        z_count = len(self.parametrization)
        for gen in self.vanishing_ideal_generators:
            if gen.nvars != z_count:
                raise PolynomialError("ideal generator has wrong variable count")
            if not gen.substitute(self.parametrization).is_zero():
                raise PolynomialError(
                    f"parametrization of {self.label!r} does not satisfy its ideal"
                )

    @property
    def z_count(self) -> int:
        return len(self.parametrization)


def square_symbolic(n: int) -> SymbolicForm:
    """The square f^2 of f = sum_j z_j (x+iy)^(n-j)(x-iy)^j, coefficients in z."""
    if n < 1:
        raise ValueError("half-degree n must be at least 1")
    m = n + 1
    # Monomial-basis coefficients of f itself: linear polynomials in z.
    f_coeffs = [SparsePoly.zero(m) for _ in range(n + 1)]
    for j in range(n + 1):
        basis = harmonic_element(HarmonicBasisIndex(n, j))
        zj = SparsePoly.variable(m, j)
        for k, c in enumerate(basis.coeffs):
            if not c.is_zero():
                f_coeffs[k] = f_coeffs[k] + zj.scale(c)
    # Convolve to square.
    sq = [SparsePoly.zero(m) for _ in range(2 * n + 1)]
    for p in range(n + 1):
        for q in range(n + 1):
            sq[p + q] = sq[p + q] + f_coeffs[p] * f_coeffs[q]
    return SymbolicForm(2 * n, m, tuple(sq))


def build_quartic(n: int) -> QuarticInvariant:
    """Bombieri-Weyl square norm of f^2 as a normalized quartic in z_0..z_n."""
    sf = square_symbolic(n)
    d = 2 * n
    total = SparsePoly.zero(n + 1)
    for k, c in enumerate(sf.coeffs):
        weight = ONE / math.comb(d, k)
        total = total + (c * c).scale(weight)
    normalized, scalar = content_normalize(total)
    return QuarticInvariant(n=n, poly=normalized, raw_scalar=scalar)


def _term_indices(exps: Sequence[int]) -> list[int]:
    """Index multiset of a monomial: variable index repeated by its exponent."""
    out: list[int] = []
    for i, e in enumerate(exps):
        out.extend([i] * e)
    return out


def osculating_containment_check(q: QuarticInvariant, big_n: int) -> bool:
    """True iff the quartic vanishes on both N-osculating loci.

    A monomial survives the substitution z_(N+1) = ... = z_n = 0 exactly when
    all its indices are at most N (mirror: at least n-N), so containment reads
    off the monomial support.
    """
    if big_n < 1:
        raise ValueError("osculating order N must be at least 1")
    n = q.n
    for exps, _ in q.poly.items():
        idx = _term_indices(exps)
        if max(idx) <= big_n or min(idx) >= n - big_n:
            return False
    return True


def osculating_singularity_check(q: QuarticInvariant, big_n: int) -> bool:
    """True iff all partials of the quartic vanish on both N-osculating loci.

    A partial derivative of a monomial survives the substitution iff at least
    three of the monomial's four indices are at most N (mirror: at least n-N).
    """
    if big_n < 1:
        raise ValueError("osculating order N must be at least 1")
    n = q.n
    for exps, _ in q.poly.items():
        idx = _term_indices(exps)
        if sum(1 for i in idx if i <= big_n) >= 3:
            return False
        if sum(1 for i in idx if i >= n - big_n) >= 3:
            return False
    return True


def reverse_indices(p: SparsePoly) -> SparsePoly:
    """The polynomial with z_i replaced by z_(m-1-i) throughout."""
    return SparsePoly(p.nvars, {tuple(reversed(e)): c for e, c in p.items()})


def verify_component(q: QuarticInvariant, component: SingularComponent) -> bool:
    """Whether every partial of the quartic vanishes identically on the component."""
    if component.z_count != q.n + 1:
        raise PolynomialError("component variable count does not match the quartic")
    return all(
        p.substitute(component.parametrization).is_zero() for p in q.partials()
    )


def bezout_slice_points(component: SingularComponent) -> int:
    """Points a generic quadric hypersurface cuts on a curve component: 2*degree."""
    if component.dimension != 1:
        raise ValueError("slice-point count is defined for 1-dimensional components")
    return 2 * component.projective_degree


# -- standard components -----------------------------------------------------


def _zvars(m: int) -> list[SparsePoly]:
    return [SparsePoly.variable(m, i) for i in range(m)]


def coordinate_point_component(n: int, index: int) -> SingularComponent:
    """The single coordinate point e_index, parametrized by one scale parameter."""
    m = n + 1
    gens = tuple(SparsePoly.variable(m, i) for i in range(m) if i != index)
    param = tuple(
        SparsePoly.variable(1, 0) if i == index else SparsePoly.zero(1)
        for i in range(m)
    )
    return SingularComponent(
        label=f"point e{index}",
        vanishing_ideal_generators=gens,
        parametrization=param,
        projective_degree=1,
        dimension=0,
    )


def coordinate_line_component(n: int, i: int, j: int, label: str | None = None) -> SingularComponent:
    """The line spanned by e_i and e_j, cut out by the other coordinates."""
    m = n + 1
    gens = tuple(SparsePoly.variable(m, k) for k in range(m) if k not in (i, j))
    param = []
    for k in range(m):
        if k == i:
            param.append(SparsePoly.variable(2, 0))
        elif k == j:
            param.append(SparsePoly.variable(2, 1))
        else:
            param.append(SparsePoly.zero(2))
    return SingularComponent(
        label=label or f"line <e{i},e{j}>",
        vanishing_ideal_generators=gens,
        parametrization=tuple(param),
        projective_degree=1,
        dimension=1,
    )


def tangent_line_components(n: int) -> tuple[SingularComponent, SingularComponent]:
    """Tangent lines to the rational normal curve at the two isotropic points."""
    first = coordinate_line_component(n, 0, 1, label="tangent line at (x+iy)^n")
    second = coordinate_line_component(n, n - 1, n, label="tangent line at (x-iy)^n")
    return first, second


def middle_conic_component_n4() -> SingularComponent:
    """The conic {z1 = z3 = 0, z2^2 + 12 z0 z4 = 0} in the n=4 case.

    Rational parametrization: (z0, z2, z4) = (3s^2, 6st, -t^2), which satisfies
    z2^2 + 12 z0 z4 = 36 s^2 t^2 - 36 s^2 t^2 = 0 identically.
    """
    m = 5
    z = _zvars(m)
    s = SparsePoly.variable(2, 0)
    t = SparsePoly.variable(2, 1)
    gens = (z[1], z[3], z[2] * z[2] + (z[0] * z[4]).scale(12))
    param = (
        (s * s).scale(3),
        SparsePoly.zero(2),
        (s * t).scale(6),
        SparsePoly.zero(2),
        (t * t).scale(-1),
    )
    return SingularComponent(
        label="middle conic",
        vanishing_ideal_generators=gens,
        parametrization=param,
        projective_degree=2,
        dimension=1,
    )


# -- middle catalecticant ----------------------------------------------------


def catalecticant_matrix(u: BinaryForm) -> list[list[GaussianRational]]:
    """Middle-catalecticant Hankel matrix M[j][k] = u_(j+k) / C(2n, j+k)."""
    if u.degree % 2 != 0 or u.degree == 0:
        raise PolynomialError("middle catalecticant needs a positive even degree")
    n = u.degree // 2
    return [
        [u.coeffs[j + k] / math.comb(2 * n, j + k) for k in range(n + 1)]
        for j in range(n + 1)
    ]


def catalecticant_det(u: BinaryForm) -> GaussianRational:
    """Exact determinant of the middle catalecticant; zero iff rank(u) <= n."""
    return exact_det(catalecticant_matrix(u))
