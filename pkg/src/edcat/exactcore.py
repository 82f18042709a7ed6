"""Exact arithmetic over the Gaussian rationals and sparse multivariate polynomials.

A scalar is a :class:`GaussianRational` ``re + im*i`` with both parts stored as
``fractions.Fraction`` (always in lowest terms, positive denominator), so no
operation ever rounds.  A polynomial is a :class:`SparsePoly`: a fixed variable
count plus a map from dense exponent tuples to nonzero coefficients,

    z0^2*z2^2 in 3 variables  ->  {(2, 0, 2): GaussianRational(1)}

The zero polynomial has an empty term map.  Canonical term order, used for
printing and for the sign convention of :func:`content_normalize`, is graded
lexicographic descending (higher total degree first, then lexicographically
larger exponent tuple first, with the first variable most significant).

The module also provides exact dense/sparse linear algebra over the Gaussian
rationals (solve, inverse, determinant, rank) and exact Taylor-coefficient
extraction for rational series of the shape ``c*(1+t)^a / prod(1+d_i*t)``.
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class PolynomialError(ValueError):
    """Structural misuse: mismatched variable counts, bad indices, and the like."""


class SingularMatrixError(ArithmeticError):
    """Exact linear solve hit a singular matrix."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class GaussianRational:
    """An element of Q(i), held exactly."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    @staticmethod
    def coerce(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(_as_fraction(value))

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        denom = other.re * other.re + other.im * other.im
        if denom == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / denom,
            (self.im * other.re - self.re * other.im) / denom,
        )

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = ONE
        base = self
        k = exponent
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|z|^2, an exact nonnegative rational."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_coefficient(self)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def format_coefficient(value: GaussianRational) -> str:
    """Render a Gaussian rational as ``a/b``, ``c/d*i`` or ``(a/b+c/d*i)``."""
    re, im = value.re, value.im
    if im == 0:
        return str(re)
    if re == 0:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        return f"{im}*i"
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    istr = "i" if mag == 1 else f"{mag}*i"
    return f"({re}{sign}{istr})"


def _prune(terms: dict) -> dict:
    return {e: c for e, c in terms.items() if not c.is_zero()}


class SparsePoly:
    """Multivariate polynomial with GaussianRational coefficients, stored sparsely."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None):
        if nvars < 0:
            raise PolynomialError("nvars must be nonnegative")
        self.nvars = nvars
        clean: dict = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise PolynomialError(
                        f"exponent vector {exps} has length {len(exps)}, expected {nvars}"
                    )
                if any(e < 0 for e in exps):
                    raise PolynomialError(f"negative exponent in {exps}")
                coeff = GaussianRational.coerce(coeff)
                if not coeff.is_zero():
                    prev = clean.get(exps)
                    clean[exps] = coeff if prev is None else prev + coeff
            clean = _prune(clean)
        self._terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "SparsePoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: GaussianRational.coerce(value)})

    @classmethod
    def variable(cls, nvars: int, idx: int) -> "SparsePoly":
        if not 0 <= idx < nvars:
            raise PolynomialError(f"variable index {idx} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[idx] = 1
        return cls(nvars, {tuple(exps): ONE})

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], coeff=1) -> "SparsePoly":
        return cls(nvars, {tuple(exps): GaussianRational.coerce(coeff)})

    # -- inspection ----------------------------------------------------------

    def items(self):
        return self._terms.items()

    def sorted_terms(self) -> list:
        """Terms in canonical (graded-lex descending) order."""
        return sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def coefficient(self, exps: Sequence[int]) -> GaussianRational:
        return self._terms.get(tuple(exps), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self._terms.values())

    # -- arithmetic ----------------------------------------------------------

    def _check_compatible(self, other: "SparsePoly"):
        if self.nvars != other.nvars:
            raise PolynomialError(
                f"operands have {self.nvars} and {other.nvars} variables"
            )

    def __add__(self, other):
        if not isinstance(other, SparsePoly):
            other = SparsePoly.constant(self.nvars, other)
        self._check_compatible(other)
        terms = dict(self._terms)
        for exps, coeff in other._terms.items():
            prev = terms.get(exps)
            terms[exps] = coeff if prev is None else prev + coeff
        out = SparsePoly(self.nvars)
        out._terms = _prune(terms)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = SparsePoly(self.nvars)
        out._terms = {e: -c for e, c in self._terms.items()}
        return out

    def __sub__(self, other):
        if not isinstance(other, SparsePoly):
            other = SparsePoly.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        self._check_compatible(other)
        terms: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                prev = terms.get(key)
                terms[key] = prod if prev is None else prev + prod
        out = SparsePoly(self.nvars)
        out._terms = _prune(terms)
        return out

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, value) -> "SparsePoly":
        c = GaussianRational.coerce(value)
        out = SparsePoly(self.nvars)
        if not c.is_zero():
            out._terms = _prune({e: k * c for e, k in self._terms.items()})
        return out

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise PolynomialError("polynomial exponent must be a nonnegative integer")
        result = SparsePoly.constant(self.nvars, 1)
        base = self
        k = exponent
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    # -- calculus and evaluation ----------------------------------------------

    def diff(self, var: int) -> "SparsePoly":
        """Exact formal partial derivative with respect to variable ``var``."""
        if not 0 <= var < self.nvars:
            raise PolynomialError(f"variable index {var} out of range")
        terms: dict = {}
        for exps, coeff in self._terms.items():
            e = exps[var]
            if e == 0:
                continue
            lowered = list(exps)
            lowered[var] = e - 1
            key = tuple(lowered)
            contrib = coeff * e
            prev = terms.get(key)
            terms[key] = contrib if prev is None else prev + contrib
        out = SparsePoly(self.nvars)
        out._terms = _prune(terms)
        return out

    def eval(self, values: Sequence) -> GaussianRational:
        """Exact evaluation at a full point (one value per variable)."""
        if len(values) != self.nvars:
            raise PolynomialError(f"expected {self.nvars} values, got {len(values)}")
        point = [GaussianRational.coerce(v) for v in values]
        total = ZERO
        for exps, coeff in self._terms.items():
            term = coeff
            for v, e in zip(point, exps):
                if e:
                    term = term * v**e
            total = total + term
        return total

    def substitute(self, polys: Sequence["SparsePoly"]) -> "SparsePoly":
        """Exact composition: replace variable ``i`` by ``polys[i]``."""
        if len(polys) != self.nvars:
            raise PolynomialError(f"expected {self.nvars} substitutions, got {len(polys)}")
        if not polys:
            out_nvars = 0
        else:
            out_nvars = polys[0].nvars
            for p in polys:
                if p.nvars != out_nvars:
                    raise PolynomialError("substitution polynomials disagree on nvars")
        # Cache powers of each replacement polynomial as needed.
        powers: list[dict[int, SparsePoly]] = [
            {0: SparsePoly.constant(out_nvars, 1)} for _ in polys
        ]

        def power(i: int, e: int) -> SparsePoly:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * polys[i]
            return cache[e]

        total = SparsePoly.zero(out_nvars)
        for exps, coeff in self._terms.items():
            term = SparsePoly.constant(out_nvars, coeff)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def to_complex_terms(self) -> dict:
        """Coefficients as Python complex, for handing to the numeric solver."""
        return {e: c.to_complex() for e, c in self._terms.items()}

    def __repr__(self):
        return f"SparsePoly({self.nvars}, {format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def poly_gcd_content(values: Iterable[Fraction]) -> Fraction:
    """Positive gcd of a nonempty collection of rationals."""
    num = 0
    den = 1
    for v in values:
        num = math.gcd(num, abs(v.numerator))
        den = den * v.denominator // math.gcd(den, v.denominator)
    return Fraction(num, den)


def content_normalize(p: SparsePoly) -> tuple[SparsePoly, GaussianRational]:
    """Split ``p`` into a canonical representative and its scalar content.

    Returns ``(p / c, c)`` where ``c`` is the positive rational gcd of the
    coefficients, negated if needed so the canonically-first term of the
    normalized polynomial has positive coefficient.  Requires a nonzero
    polynomial with real rational coefficients.
    """
    if p.is_zero():
        raise PolynomialError("cannot normalize the zero polynomial")
    if not p.is_real():
        raise PolynomialError("content normalization requires real coefficients")
    content = poly_gcd_content(c.re for _, c in p.items())
    lead = p.sorted_terms()[0][1]
    if lead.re < 0:
        content = -content
    c = GaussianRational(content)
    return p.scale(ONE / c), c


# -- rational series --------------------------------------------------------


@dataclass(frozen=True)
class RationalSeriesSpec:
    """The rational function ``scalar * (1+t)^a / prod_i (1 + d_i t)``."""

    scalar: Fraction
    numerator_binomial_power: int
    denominator_factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "scalar", _as_fraction(self.scalar))
        object.__setattr__(
            self, "denominator_factors", tuple(self.denominator_factors)
        )
        if self.numerator_binomial_power < 0:
            raise ValueError("numerator power must be nonnegative")
        if any(d < 1 for d in self.denominator_factors):
            raise ValueError("denominator factors must satisfy d >= 1")


def series_coefficient(spec: RationalSeriesSpec, k: int) -> Fraction:
    """Exact Taylor coefficient of t^k of the series described by ``spec``."""
    if k < 0:
        raise ValueError("series order must be nonnegative")
    # Truncated coefficient vector of scalar * (1+t)^a.
    coeffs = [
        spec.scalar * math.comb(spec.numerator_binomial_power, j) for j in range(k + 1)
    ]
    # Multiply by 1/(1+d t) = sum_j (-d)^j t^j, truncated at order k.
    for d in spec.denominator_factors:
        out = [Fraction(0)] * (k + 1)
        for j, c in enumerate(coeffs):
            if c == 0:
                continue
            sign = c
            for m in range(j, k + 1):
                out[m] += sign
                sign *= -d
        coeffs = out
    return coeffs[k]


# -- text serialization ------------------------------------------------------


def _default_names(nvars: int) -> list[str]:
    return [f"z{i}" for i in range(nvars)]


def format_poly(p: SparsePoly, names: Sequence[str] | None = None) -> str:
    """Canonical text form: graded-lex descending terms, compact monomials."""
    if p.is_zero():
        return "0"
    names = list(names) if names is not None else _default_names(p.nvars)
    pieces: list[str] = []
    for exps, coeff in p.sorted_terms():
        mono = "".join(
            names[i] + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e
        )
        if not mono:
            text = format_coefficient(coeff)
        elif coeff == 1:
            text = mono
        elif coeff == GaussianRational(-1):
            text = "-" + mono
        else:
            text = format_coefficient(coeff) + mono
        if pieces and not text.startswith("-"):
            pieces.append("+")
        pieces.append(text)
    return "".join(pieces)


_TOKEN = _re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_]+[0-9]*)|(?P<op>[-+*^()]))"
)


def parse_poly(text: str, names: Sequence[str], nvars: int | None = None) -> SparsePoly:
    """Parse the serialization produced by :func:`format_poly`.

    Accepts optional ``*`` between factors, ``^`` powers, the imaginary unit
    ``i``, parenthesized complex coefficients, and redundant whitespace.
    ``names`` fixes the variable order (and count, unless ``nvars`` says
    otherwise).
    """
    names = list(names)
    if nvars is None:
        nvars = len(names)
    index = {name: k for k, name in enumerate(names)}
    if "i" in index:
        raise PolynomialError("variable name 'i' collides with the imaginary unit")

    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise PolynomialError(f"cannot tokenize {text[pos:]!r}")
            break
        tokens.append(m.group(m.lastgroup))
        pos = m.end()

    k = 0

    def peek():
        return tokens[k] if k < len(tokens) else None

    def take():
        nonlocal k
        tok = tokens[k]
        k += 1
        return tok

    def parse_sum() -> SparsePoly:
        nonlocal k
        total = SparsePoly.zero(nvars)
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        while True:
            total = total + parse_term().scale(sign)
            if peek() in ("+", "-"):
                sign = -1 if take() == "-" else 1
            else:
                return total

    def parse_term() -> SparsePoly:
        result = parse_factor()
        while True:
            nxt = peek()
            if nxt == "*":
                take()
                result = result * parse_factor()
            elif nxt is not None and nxt not in ("+", "-", ")"):
                result = result * parse_factor()
            else:
                return result

    def parse_factor() -> SparsePoly:
        tok = take() if peek() is not None else None
        if tok is None:
            raise PolynomialError("unexpected end of input")
        if tok == "(":
            inner = parse_sum()
            if peek() != ")":
                raise PolynomialError("unbalanced parenthesis")
            take()
            base = inner
        elif tok == "i":
            base = SparsePoly.constant(nvars, I)
        elif tok in index:
            base = SparsePoly.variable(nvars, index[tok])
        elif tok and (tok[0].isdigit()):
            base = SparsePoly.constant(nvars, Fraction(tok))
        else:
            raise PolynomialError(f"unexpected token {tok!r}")
        if peek() == "^":
            take()
            exp_tok = take() if peek() is not None else None
            if exp_tok is None or not exp_tok.isdigit():
                raise PolynomialError("exponent must be a nonnegative integer")
            base = base ** int(exp_tok)
        return base

    if not tokens:
        return SparsePoly.zero(nvars)
    result = parse_sum()
    if k != len(tokens):
        raise PolynomialError(f"trailing tokens near {tokens[k:]!r}")
    return result


# -- exact linear algebra ----------------------------------------------------


def exact_solve(matrix: Sequence[Sequence[GaussianRational]], rhs: Sequence[GaussianRational]) -> list[GaussianRational]:
    """Solve a square exact linear system by Gaussian elimination."""
    n = len(matrix)
    rows = [[GaussianRational.coerce(v) for v in row] + [GaussianRational.coerce(rhs[r])]
            for r, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not rows[r][col].is_zero()), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = ONE / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and not rows[r][col].is_zero():
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [rows[r][n] for r in range(n)]


def exact_inverse(matrix: Sequence[Sequence[GaussianRational]]) -> list[list[GaussianRational]]:
    n = len(matrix)
    aug = [
        [GaussianRational.coerce(v) for v in row]
        + [ONE if r == c else ZERO for c in range(n)]
        for r, row in enumerate(matrix)
    ]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = ONE / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def exact_det(matrix: Sequence[Sequence[GaussianRational]]) -> GaussianRational:
    n = len(matrix)
    rows = [[GaussianRational.coerce(v) for v in row] for row in matrix]
    det = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if not rows[r][col].is_zero()), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det = det * rows[col][col]
        inv = ONE / rows[col][col]
        for r in range(col + 1, n):
            if not rows[r][col].is_zero():
                factor = rows[r][col] * inv
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


def exact_rank_sparse(rows: Iterable[Mapping[int, GaussianRational]]) -> int:
    """Rank of a sparse exact matrix given as per-row {column: value} maps."""
    pivots: dict[int, dict[int, GaussianRational]] = {}
    rank = 0
    for row in rows:
        work = {c: v for c, v in row.items() if not v.is_zero()}
        while work:
            col = min(work)
            pivot_row = pivots.get(col)
            if pivot_row is None:
                # Normalize so the pivot entry is 1, then store.
                inv = ONE / work[col]
                pivots[col] = {c: v * inv for c, v in work.items()}
                rank += 1
                break
            factor = work[col]
            for c, v in pivot_row.items():
                delta = factor * v
                cur = work.get(c)
                new = delta.__neg__() if cur is None else cur - delta
                if new.is_zero():
                    work.pop(c, None)
                else:
                    work[c] = new
    return rank
