"""Similarity classes of 4-dimensional forms with a fixed generic asymmetry.

Fix the model ``b = b_{a1} (x) b_{a2}`` with both ``alpha_i = a_i^2 - 4``
nonsquare.  Forms whose asymmetry is conjugate to that of ``b`` are, up to
similarity, the forms ``b_u(x, y) = b(x, u^{-1} y)`` where ``u = r I + s M``
ranges over ``K^x`` and ``M`` realizes ``sqrt(alpha1) (x) sqrt(alpha2)``.
Two such forms are similar iff the classes of ``u`` agree in
``K^x / Q^x N_{L/K}(L^x)``; over Q this is read off from a quaternion
symbol.

This needs the centralizer of the asymmetry to be the 4-dimensional algebra
``L``, which fails exactly when ``a2 = +-a1``: the asymmetry then has a
repeated eigenvalue +-1 and its centralizer has dimension 6 (or 8 when
``a1 = a2 = 0``).  Such contexts are flagged ``degenerate`` and handled by
:mod:`bilindec.degenerate`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .bilinear import A_matrix, BilinearSpace, I2, I4, asymmetry, std_ba, tensor_form
from .brauer import is_split
from .exact import RationalLike, format_rational, rational_sqrt, sqfree_class, to_rational
from .linalg import QMatrix, conjugator, inverse, kron


class InternalConsistencyError(AssertionError):
    """An identity that the theory guarantees failed to hold."""


class DegenerateContextError(ValueError):
    """The K-class of a form is not a similarity invariant in this context."""


def S_matrix(a: RationalLike) -> QMatrix:
    """``2 A_a - a I``: squares to ``(a^2 - 4) I`` and is skew for b_a."""
    a = to_rational(a)
    return A_matrix(a) * 2 - I2 * a


@dataclass(frozen=True)
class GenericContext:
    a1: Fraction
    a2: Fraction

    def __post_init__(self):
        a1, a2 = to_rational(self.a1), to_rational(self.a2)
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)
        for a in (a1, a2):
            if a in (2, -2):
                raise ValueError(f"parameter {a} is excluded (a = +-2)")
            if rational_sqrt(a * a - 4) is not None:
                raise ValueError(f"a^2 - 4 is a square for a = {a}; not a generic parameter")

    @property
    def alpha1(self) -> Fraction:
        return self.a1 * self.a1 - 4

    @property
    def alpha2(self) -> Fraction:
        return self.a2 * self.a2 - 4

    @property
    def alpha1_class(self) -> int:
        return sqfree_class(self.alpha1)

    @property
    def alpha2_class(self) -> int:
        return sqfree_class(self.alpha2)

    @property
    def delta(self) -> int:
        """Square class of the discriminant of K."""
        return sqfree_class(self.alpha1 * self.alpha2)

    @property
    def split(self) -> bool:
        return self.delta == 1

    @property
    def t(self) -> Fraction | None:
        """Positive t with alpha2 = alpha1 t^2 when K is split."""
        return rational_sqrt(self.alpha2 / self.alpha1)

    @property
    def degenerate(self) -> bool:
        """a2 = +-a1: the centralizer of the asymmetry is larger than L."""
        return self.a2 == self.a1 or self.a2 == -self.a1

    @cached_property
    def model(self) -> BilinearSpace:
        return tensor_form(std_ba(self.a1), std_ba(self.a2))

    @property
    def G(self) -> QMatrix:
        return self.model.gram

    @cached_property
    def asym(self) -> QMatrix:
        return kron(A_matrix(self.a1), A_matrix(self.a2))

    @cached_property
    def S1(self) -> QMatrix:
        return kron(S_matrix(self.a1), I2)

    @cached_property
    def S2(self) -> QMatrix:
        return kron(I2, S_matrix(self.a2))

    @cached_property
    def M(self) -> QMatrix:
        return kron(S_matrix(self.a1), S_matrix(self.a2))

    # -- K arithmetic ------------------------------------------------------

    def rs(self, u: KClassElem) -> tuple[Fraction, Fraction]:
        """Field coordinates (r, s) of u; split elements go through theta_inv."""
        if u.kind == "field":
            return u.r, u.s
        return theta_inv(self, u.lam)

    def norm(self, u: KClassElem) -> Fraction:
        if u.kind == "split":
            return u.lam
        return u.r * u.r - self.alpha1 * self.alpha2 * u.s * u.s

    def mul(self, u: KClassElem, v: KClassElem) -> KClassElem:
        r1, s1 = self.rs(u)
        r2, s2 = self.rs(v)
        d = self.alpha1 * self.alpha2
        return KClassElem.field(r1 * r2 + d * s1 * s2, r1 * s2 + r2 * s1)

    def inv(self, u: KClassElem) -> KClassElem:
        r, s = self.rs(u)
        n = r * r - self.alpha1 * self.alpha2 * s * s
        if n == 0:
            raise ZeroDivisionError("class element of norm zero")
        return KClassElem.field(r / n, -s / n)

    def matrix(self, u: KClassElem) -> QMatrix:
        r, s = self.rs(u)
        return I4 * r + self.M * s

    def to_json(self) -> dict:
        return {"a1": format_rational(self.a1), "a2": format_rational(self.a2)}


@dataclass(frozen=True)
class KClassElem:
    """An element of K^x: ``r + s sqrt(a1)(x)sqrt(a2)``, or its image lam
    under theta when K is split."""

    kind: str = "field"
    r: Fraction | None = None
    s: Fraction | None = None
    lam: Fraction | None = None

    @classmethod
    def field(cls, r: RationalLike, s: RationalLike) -> KClassElem:
        r, s = to_rational(r), to_rational(s)
        if r == 0 and s == 0:
            raise ValueError("zero is not a class element")
        return cls("field", r, s, None)

    @classmethod
    def split_elem(cls, lam: RationalLike) -> KClassElem:
        lam = to_rational(lam)
        if lam == 0:
            raise ValueError("theta image must be nonzero")
        return cls("split", None, None, lam)

    def to_json(self) -> dict:
        if self.kind == "field":
            return {"kind": "field", "r": format_rational(self.r), "s": format_rational(self.s)}
        return {"kind": "split", "lambda": format_rational(self.lam)}

    @classmethod
    def from_json(cls, data: dict) -> KClassElem:
        if data.get("kind", "field") == "split":
            return cls.split_elem(data["lambda"])
        return cls.field(data["r"], data["s"])


def as_class_elem(u) -> KClassElem:
    if isinstance(u, KClassElem):
        return u
    r, s = u
    return KClassElem.field(r, s)


# -- the biquadratic algebra L -----------------------------------------------

@dataclass(frozen=True)
class LElem:
    """``c0 + c1 e1 + c2 e2 + c3 e1 e2`` with ``e1^2 = alpha1``, ``e2^2 = alpha2``."""

    c: tuple
    alpha1: Fraction
    alpha2: Fraction

    def __post_init__(self):
        c = tuple(to_rational(x) for x in self.c)
        if len(c) != 4:
            raise ValueError("LElem needs four coordinates")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "alpha1", to_rational(self.alpha1))
        object.__setattr__(self, "alpha2", to_rational(self.alpha2))

    @classmethod
    def of(cls, ctx: GenericContext, *c) -> LElem:
        return cls(tuple(c), ctx.alpha1, ctx.alpha2)

    def _new(self, c) -> LElem:
        return LElem(tuple(c), self.alpha1, self.alpha2)

    def __add__(self, other: LElem) -> LElem:
        return self._new(x + y for x, y in zip(self.c, other.c))

    def __sub__(self, other: LElem) -> LElem:
        return self._new(x - y for x, y in zip(self.c, other.c))

    def __mul__(self, other):
        if not isinstance(other, LElem):
            k = to_rational(other)
            return self._new(x * k for x in self.c)
        if (self.alpha1, self.alpha2) != (other.alpha1, other.alpha2):
            raise ValueError("elements of different algebras")
        x0, x1, x2, x3 = self.c
        y0, y1, y2, y3 = other.c
        p, q = self.alpha1, self.alpha2
        return self._new((
            x0 * y0 + p * x1 * y1 + q * x2 * y2 + p * q * x3 * y3,
            x0 * y1 + x1 * y0 + q * (x2 * y3 + x3 * y2),
            x0 * y2 + x2 * y0 + p * (x1 * y3 + x3 * y1),
            x0 * y3 + x3 * y0 + x1 * y2 + x2 * y1,
        ))

    __rmul__ = __mul__

    def sigma1(self) -> LElem:
        """Fixes e1, negates e2."""
        c0, c1, c2, c3 = self.c
        return self._new((c0, c1, -c2, -c3))

    def sigma2(self) -> LElem:
        """Negates e1, fixes e2."""
        c0, c1, c2, c3 = self.c
        return self._new((c0, -c1, c2, -c3))

    def sigma3(self) -> LElem:
        """Negates e1 and e2, fixes e1 e2."""
        c0, c1, c2, c3 = self.c
        return self._new((c0, -c1, -c2, c3))

    def norm_LK(self) -> LElem:
        return self * self.sigma3()

    def norm_LM(self) -> LElem:
        return self * self.sigma1()

    def norm_LF(self) -> Fraction:
        return (self * self.sigma1() * self.sigma2() * self.sigma3()).c[0]

    def inverse(self) -> LElem:
        n = self.norm_LF()
        if n == 0:
            raise ZeroDivisionError("element of L is not invertible")
        return self.sigma1() * self.sigma2() * self.sigma3() * (1 / n)

    def in_K(self) -> bool:
        return self.c[1] == 0 and self.c[2] == 0

    def in_M(self) -> bool:
        return self.c[2] == 0 and self.c[3] == 0

    def is_rational(self) -> bool:
        return self.c[1] == self.c[2] == self.c[3] == 0

    def matrix(self, ctx: GenericContext) -> QMatrix:
        """Action on V: e1 by S_{a1} (x) I, e2 by I (x) S_{a2}."""
        c0, c1, c2, c3 = self.c
        return I4 * c0 + ctx.S1 * c1 + ctx.S2 * c2 + ctx.M * c3


def k_to_L(ctx: GenericContext, u: KClassElem) -> LElem:
    r, s = ctx.rs(u)
    return LElem.of(ctx, r, 0, 0, s)


# -- class elements of forms --------------------------------------------------

def _rs_from_matrix(ctx: GenericContext, U: QMatrix) -> tuple[Fraction, Fraction]:
    s = U[0, 3] / ctx.M[0, 3]
    r = U[0, 0] - s * ctx.M[0, 0]
    if U != I4 * r + ctx.M * s:
        raise InternalConsistencyError("symmetric element is not in span{I, M}")
    return r, s


def _wrap(ctx: GenericContext, r: Fraction, s: Fraction) -> KClassElem:
    if ctx.split:
        return KClassElem.split_elem(theta(ctx, KClassElem.field(r, s)))
    return KClassElem.field(r, s)


def sym_element(ctx: GenericContext, b: BilinearSpace, conj: QMatrix | None = None) -> KClassElem:
    """Class element u with ``b`` similar to ``form_from_class(ctx, u)``.

    ``conj`` may supply a matrix f with ``asymmetry(b) = f ctx.asym f^{-1}``.
    """
    if b.dim != 4:
        raise ValueError("sym_element expects a 4-dimensional space")
    if ctx.degenerate:
        raise DegenerateContextError(
            f"a2 = +-a1 ({ctx.a1}, {ctx.a2}): the class element depends on the conjugator")
    a_b = asymmetry(b)
    f = conj if conj is not None else conjugator(ctx.asym, a_b)
    if f is None:
        raise ValueError("asymmetry is not conjugate to the model asymmetry")
    if a_b @ f != f @ ctx.asym:
        raise ValueError("supplied conjugator does not intertwine the asymmetries")
    C = f.T @ b.gram @ f
    r, s = _rs_from_matrix(ctx, inverse(C) @ ctx.G)
    return _wrap(ctx, r, s)


def form_from_class(ctx: GenericContext, u) -> BilinearSpace:
    """The form ``b_u(x, y) = b(x, u^{-1} y)``, Gram ``G U^{-1}``."""
    u = as_class_elem(u)
    if ctx.norm(u) == 0:
        raise ValueError("class element has norm zero")
    return BilinearSpace(ctx.G @ inverse(ctx.matrix(u)))


def class_is_trivial(ctx: GenericContext, u) -> bool:
    return is_split(ctx.alpha1, ctx.norm(as_class_elem(u)))


def class_equal(ctx: GenericContext, u1, u2) -> bool:
    return is_split(ctx.alpha1, ctx.norm(as_class_elem(u1)) * ctx.norm(as_class_elem(u2)))


def sqrt_class(ctx: GenericContext) -> KClassElem:
    """The element sqrt(alpha1) (x) sqrt(alpha2), i.e. (r, s) = (0, 1)."""
    return _wrap(ctx, Fraction(0), Fraction(1))


def is_decomposable_class(ctx: GenericContext, u) -> bool:
    n = ctx.norm(as_class_elem(u))
    return is_split(ctx.alpha1, n) or is_split(ctx.alpha1, -ctx.alpha1 * ctx.alpha2 * n)


def theta(ctx: GenericContext, u) -> Fraction:
    """Split K only: ``(r + s t alpha1) / (r - s t alpha1)``."""
    if not ctx.split:
        raise ValueError("theta is defined only when alpha1 * alpha2 is a square")
    u = as_class_elem(u)
    if u.kind == "split":
        return u.lam
    k = u.s * ctx.t * ctx.alpha1
    if u.r == k or u.r == -k:
        raise ValueError("element is not invertible in K")
    return (u.r + k) / (u.r - k)


def theta_inv(ctx: GenericContext, lam: RationalLike) -> tuple[Fraction, Fraction]:
    """Field coordinates of an element with theta-image lam and norm lam."""
    if not ctx.split:
        raise ValueError("theta is defined only when alpha1 * alpha2 is a square")
    lam = to_rational(lam)
    if lam == 0:
        raise ValueError("theta image must be nonzero")
    return (lam + 1) / 2, (lam - 1) / (2 * ctx.alpha1 * ctx.t)
