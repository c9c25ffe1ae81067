"""Exact arithmetic over Q: rationals, square classes, quadratic elements,
quadratic residue symbols and integer factorization.

Rationals are :class:`fractions.Fraction` throughout; square classes of
``Q^x / Q^x2`` are represented by their unique signed squarefree integer.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction, str]
SquareClass = int

TRIAL_DIVISION_LIMIT = 10**6


def to_rational(x: RationalLike) -> Fraction:
    """Convert *x* to a Fraction, refusing floats and bools."""
    if isinstance(x, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {x!r}") from exc
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(q: Fraction | int) -> str:
    """Serialize as ``"p/q"`` in lowest terms, or ``"p"`` when q = 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_sqrt(q: Fraction | int) -> Fraction | None:
    """Return the non-negative rational square root of *q*, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def is_square(q: Fraction | int) -> bool:
    return rational_sqrt(q) is not None


# -- primes and factorization -------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a non-trivial factor of the odd composite *n*."""
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _factor_into(n: int, out: list[int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out.append(n)
        return
    d = _pollard_brent(n)
    _factor_into(d, out)
    _factor_into(n // d, out)


def factor(n: int) -> tuple[int, list[int]]:
    """Factor a nonzero integer.

    Returns ``(sign, primes)`` with ``primes`` sorted and repeated according
    to multiplicity, so that ``sign * prod(primes) == n``.

    >>> factor(12)
    (1, [2, 2, 3])
    >>> factor(-11)
    (-1, [11])
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    primes: list[int] = []
    while n % 2 == 0:
        primes.append(2)
        n //= 2
    p = 3
    while p * p <= n and p <= TRIAL_DIVISION_LIMIT:
        while n % p == 0:
            primes.append(p)
            n //= p
        p += 2
    if n > 1:
        rest: list[int] = []
        _factor_into(n, rest)
        primes.extend(rest)
    return sign, sorted(primes)


def prime_divisors(n: int) -> list[int]:
    """Distinct primes dividing the nonzero integer *n*."""
    return sorted(set(factor(n)[1]))


def squarefree_part(n: int) -> int:
    """Signed squarefree integer in the square class of the nonzero integer *n*."""
    sign, primes = factor(n)
    out = sign
    for p in set(primes):
        if primes.count(p) % 2:
            out *= p
    return out


def sqfree_class(q: RationalLike) -> SquareClass:
    """Canonical representative of the square class of a nonzero rational.

    >>> sqfree_class(Fraction(8, 9)), sqfree_class(-4), sqfree_class(12)
    (2, -1, 3)
    """
    q = to_rational(q)
    if q == 0:
        raise ValueError("zero has no square class")
    return squarefree_part(q.numerator * q.denominator)


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# -- residue symbols ----------------------------------------------------------

def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi symbol needs an odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p; 0 when p divides a."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    return jacobi(a, p)


# -- quadratic elements -------------------------------------------------------

@dataclass(frozen=True)
class QuadElem:
    """``x + y*sqrt(delta)`` in ``Q[T]/(T^2 - delta)``.

    ``delta`` is any rational (square classes, non-reduced radicands and the
    degenerate radicand 0 all occur in practice); it is fixed per context and
    mixing radicands is an error.
    """

    x: Fraction
    y: Fraction
    delta: Fraction

    def __post_init__(self):
        for name in ("x", "y", "delta"):
            object.__setattr__(self, name, to_rational(getattr(self, name)))

    def _check(self, other: QuadElem) -> None:
        if self.delta != other.delta:
            raise ValueError("quadratic elements over different radicands")

    def __add__(self, other: QuadElem) -> QuadElem:
        self._check(other)
        return QuadElem(self.x + other.x, self.y + other.y, self.delta)

    def __sub__(self, other: QuadElem) -> QuadElem:
        self._check(other)
        return QuadElem(self.x - other.x, self.y - other.y, self.delta)

    def __neg__(self) -> QuadElem:
        return QuadElem(-self.x, -self.y, self.delta)

    def __mul__(self, other):
        if isinstance(other, QuadElem):
            self._check(other)
            return QuadElem(self.x * other.x + self.delta * self.y * other.y,
                            self.x * other.y + self.y * other.x, self.delta)
        other = to_rational(other)
        return QuadElem(self.x * other, self.y * other, self.delta)

    __rmul__ = __mul__

    def conj(self) -> QuadElem:
        return QuadElem(self.x, -self.y, self.delta)

    def norm(self) -> Fraction:
        return quad_norm(self)

    def inverse(self) -> QuadElem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("element of norm zero is not invertible")
        return self.conj() * (1 / n)

    def is_rational(self) -> bool:
        return self.y == 0


def quad_norm(z: QuadElem) -> Fraction:
    """Norm ``x^2 - delta*y^2``."""
    return z.x * z.x - z.delta * z.y * z.y
