"""Sparse trivariate polynomials in (xi, eta, zeta) with exact rational coefficients.

Only what the wedge element needs is provided: ring operations, partial
derivatives, evaluation and exact integration over the reference wedge
``0 <= xi, 0 <= eta, xi + eta <= 1, -1 <= zeta <= 1``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from numbers import Rational
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

Number = Union[int, Fraction]

VARIABLES = ("xi", "eta", "zeta")


class Monomial(NamedTuple):
    """Exponent triple of ``xi**a * eta**b * zeta**c``."""

    a: int = 0
    b: int = 0
    c: int = 0

    @property
    def degree(self) -> int:
        return self.a + self.b + self.c

    def __mul__(self, other: "Monomial") -> "Monomial":  # type: ignore[override]
        return Monomial(self.a + other.a, self.b + other.b, self.c + other.c)


def _graded_lex_key(m: Monomial) -> tuple[int, int, int, int]:
    return (m.degree, -m.a, -m.b, -m.c)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        # exact binary value, no decimal re-parsing
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class Poly3:
    """Immutable polynomial stored as a canonical ``{Monomial: Fraction}`` map.

    Zero coefficients are never stored, so two equal polynomials always have
    identical term maps and ``==`` is structural.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Iterable[int], object] | None = None):
        canon: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            m = Monomial(*mono)
            if min(m) < 0:
                raise ValueError(f"negative exponent in {tuple(m)}")
            q = _as_fraction(coeff)
            if q:
                canon[m] = canon.get(m, Fraction(0)) + q
                if not canon[m]:
                    del canon[m]
        self._terms = canon
        self._hash = None

    @classmethod
    def _from_canonical(cls, terms: dict[Monomial, Fraction]) -> "Poly3":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, value) -> "Poly3":
        return cls({(0, 0, 0): value})

    @classmethod
    def variable(cls, name: str) -> "Poly3":
        exps = [0, 0, 0]
        exps[VARIABLES.index(name)] = 1
        return cls({tuple(exps): 1})

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, c: int = 0, coeff=1) -> "Poly3":
        return cls({(a, b, c): coeff})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    def coeff(self, a: int = 0, b: int = 0, c: int = 0) -> Fraction:
        return self._terms.get(Monomial(a, b, c), Fraction(0))

    def monomials(self) -> list[Monomial]:
        return sorted(self._terms, key=_graded_lex_key)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((m.degree for m in self._terms), default=-1)

    def degree_in(self, var: str) -> int:
        idx = VARIABLES.index(var)
        return max((m[idx] for m in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda kv: _graded_lex_key(kv[0])))

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly3):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly3.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "Poly3(0)"
        parts = []
        for m, q in self:
            factors = [f"{v}^{e}" if e > 1 else v for v, e in zip(VARIABLES, m) if e]
            parts.append("*".join([str(q)] + factors) if factors else str(q))
        return "Poly3(" + " + ".join(parts) + ")"

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly3":
        if isinstance(other, Poly3):
            return other
        return Poly3.constant(other)

    def __add__(self, other) -> "Poly3":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, q in other._terms.items():
            s = out.get(m, 0) + q
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly3._from_canonical(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly3":
        return Poly3._from_canonical({m: -q for m, q in self._terms.items()})

    def __sub__(self, other) -> "Poly3":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly3":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly3":
        if not isinstance(other, Poly3):
            s = _as_fraction(other)
            if not s:
                return Poly3()
            return Poly3._from_canonical({m: q * s for m, q in self._terms.items()})
        out: dict[Monomial, Fraction] = {}
        for (a1, b1, c1), q1 in self._terms.items():
            for (a2, b2, c2), q2 in other._terms.items():
                m = Monomial(a1 + a2, b1 + b2, c1 + c2)
                out[m] = out.get(m, 0) + q1 * q2
        return Poly3._from_canonical({m: q for m, q in out.items() if q})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly3":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly3.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus and evaluation ------------------------------------------

    def diff(self, var: str) -> "Poly3":
        """Exact partial derivative with respect to ``xi``, ``eta`` or ``zeta``."""
        idx = VARIABLES.index(var)
        out = {}
        for m, q in self._terms.items():
            e = m[idx]
            if e:
                exps = list(m)
                exps[idx] = e - 1
                out[Monomial(*exps)] = q * e
        return Poly3._from_canonical(out)

    def __call__(self, xi, eta, zeta):
        return self.eval((xi, eta, zeta))

    def eval(self, point):
        """Evaluate at ``point``.

        Exact when every coordinate is an int/Fraction, plain float arithmetic
        otherwise (numpy arrays broadcast as well).
        """
        x, y, z = point
        exact = all(isinstance(v, (int, Fraction)) for v in (x, y, z))
        total = Fraction(0) if exact else 0.0
        for (a, b, c), q in self._terms.items():
            coeff = q if exact else float(q)
            total = total + coeff * x**a * y**b * z**c
        return total

    def integrate(self) -> Fraction:
        return wedge_integral(self)

    def dump(self) -> str:
        """One ``coeff xi^a eta^b zeta^c`` line per term, graded-lex order."""
        return "\n".join(f"{q} xi^{m.a} eta^{m.b} zeta^{m.c}" for m, q in self)


def poly_add(p: Poly3, q: Poly3) -> Poly3:
    return p + q


def poly_mul(p: Poly3, q: Poly3) -> Poly3:
    return p * q


def poly_eval(p: Poly3, point):
    return p.eval(point)


def poly_diff(p: Poly3, var: str) -> Poly3:
    return p.diff(var)


@lru_cache(maxsize=None)
def monomial_integral(a: int, b: int, c: int) -> Fraction:
    """Exact integral of ``xi^a eta^b zeta^c`` over the reference wedge.

    Triangle part ``a! b! / (a+b+2)!`` times the zeta part over [-1, 1].
    """
    if min(a, b, c) < 0:
        raise ValueError("exponents must be non-negative")
    tri = Fraction(factorial(a) * factorial(b), factorial(a + b + 2))
    line = Fraction(2, c + 1) if c % 2 == 0 else Fraction(0)
    return tri * line


def wedge_integral(p: Poly3) -> Fraction:
    return sum((q * monomial_integral(*m) for m, q in p._terms.items()), Fraction(0))


def integrate_product(p: Poly3, q: Poly3) -> Fraction:
    """``wedge_integral(p * q)`` without materialising the product."""
    total = Fraction(0)
    for (a1, b1, c1), q1 in p._terms.items():
        for (a2, b2, c2), q2 in q._terms.items():
            total += q1 * q2 * monomial_integral(a1 + a2, b1 + b2, c1 + c2)
    return total


XI = Poly3.variable("xi")
ETA = Poly3.variable("eta")
ZETA = Poly3.variable("zeta")
ONE = Poly3.constant(1)
