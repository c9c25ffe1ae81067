"""Quaternion algebras (a, b) over Q, Hilbert symbols and 2-torsion Brauer
classes stored as their (even) sets of ramified places.

A place is either a prime ``int`` or the string ``"inf"`` for the real place.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .exact import RationalLike, legendre, prime_divisors, sqfree_class, valuation

INF = "inf"
Place = Union[int, str]


def place_key(v: Place) -> tuple[int, int]:
    """Sort key: primes ascending, the real place last."""
    return (1, 0) if v == INF else (0, v)


def parse_place(v) -> Place:
    if v in (INF, "oo", "infinity", "∞"):
        return INF
    p = int(v)
    if p < 2:
        raise ValueError(f"not a place: {v!r}")
    return p


def _eps(u: int) -> int:
    return ((u - 1) // 2) % 2


def _omega(u: int) -> int:
    return ((u * u - 1) // 8) % 2


def hilbert_symbol(a: RationalLike, b: RationalLike, v: Place) -> int:
    """Local Hilbert symbol ``(a, b)_v`` in {-1, +1}."""
    a, b = sqfree_class(a), sqfree_class(b)
    if v == INF:
        return -1 if a < 0 and b < 0 else 1
    p = int(v)
    alpha, beta = valuation(a, p), valuation(b, p)
    u, w = a // p**alpha, b // p**beta
    if p == 2:
        e = _eps(u) * _eps(w) + alpha * _omega(w) + beta * _omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * legendre(u, p) ** beta * legendre(w, p) ** alpha


@dataclass(frozen=True)
class BrauerClass2:
    """A class in Br(Q)[2], recorded by its ramification set."""

    ramified: tuple = ()

    def __post_init__(self):
        places = sorted({parse_place(v) for v in self.ramified}, key=place_key)
        if len(places) % 2:
            raise ValueError(f"odd number of ramified places {places} violates the product formula")
        object.__setattr__(self, "ramified", tuple(places))

    def is_trivial(self) -> bool:
        return not self.ramified

    def __add__(self, other: BrauerClass2) -> BrauerClass2:
        return class_add(self, other)

    def __iter__(self):
        return iter(self.ramified)

    def __len__(self) -> int:
        return len(self.ramified)

    def sort_key(self) -> list[tuple[int, int]]:
        return [place_key(v) for v in self.ramified]

    def to_json(self) -> list:
        return list(self.ramified)

    @classmethod
    def from_json(cls, data: Iterable) -> BrauerClass2:
        return cls(tuple(data))

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in self.ramified) + "}"


TRIVIAL = BrauerClass2()


def class_add(c1: BrauerClass2, c2: BrauerClass2) -> BrauerClass2:
    """Sum in Br(Q)[2]: symmetric difference of ramification sets."""
    return BrauerClass2(tuple(set(c1.ramified) ^ set(c2.ramified)))


def ramified_places(a: RationalLike, b: RationalLike) -> BrauerClass2:
    """Places where the quaternion algebra (a, b) does not split."""
    a, b = sqfree_class(a), sqfree_class(b)
    candidates: list[Place] = [INF, 2] + [p for p in prime_divisors(a * b) if p != 2]
    return BrauerClass2(tuple(v for v in candidates if hilbert_symbol(a, b, v) == -1))


def is_split(a: RationalLike, b: RationalLike) -> bool:
    return ramified_places(a, b).is_trivial()


def is_local_square(q: RationalLike, v: Place) -> bool:
    """Whether the nonzero rational q is a square in Q_v."""
    d = sqfree_class(q)
    if v == INF:
        return d > 0
    p = int(v)
    if d % p == 0:
        return False
    if p == 2:
        return d % 8 == 1
    return legendre(d, p) == 1


@dataclass(frozen=True)
class QuaternionSymbol:
    """The quaternion algebra (a, b) with a, b reduced to square classes."""

    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "a", sqfree_class(self.a))
        object.__setattr__(self, "b", sqfree_class(self.b))

    def ramified(self) -> BrauerClass2:
        return ramified_places(self.a, self.b)

    def is_split(self) -> bool:
        return self.ramified().is_trivial()


def nu(alpha1: RationalLike, norm: RationalLike) -> BrauerClass2:
    """The degree-two invariant (alpha1) u (N(u)) of a class with norm N(u)."""
    return ramified_places(alpha1, norm)


def nu_tilde(alpha1: RationalLike, alpha2: RationalLike, norm: RationalLike) -> BrauerClass2:
    """Image of ``nu`` modulo the subgroup generated by (alpha1) u (alpha2).

    The coset has two elements; the lexicographically smaller ramification
    list (real place last) is returned.  It is empty exactly on the two
    decomposable classes.
    """
    v = nu(alpha1, norm)
    w = class_add(v, ramified_places(alpha1, alpha2))
    return min(v, w, key=BrauerClass2.sort_key)
