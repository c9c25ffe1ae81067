"""Infinite families of indecomposable forms with trivial determinant.

For a generic context with K = Q(sqrt m), m squarefree with Z[sqrt m] a PID,
every prime p inert in Q(sqrt alpha1) and split in K yields an element
pi_p = x + y sqrt(m) of norm +-p.  The forms attached to distinct pi_p are
pairwise non-similar and none of them is decomposable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .bilinear import BilinearSpace
from .config import NORM_BOUND, PID_WHITELIST, PRIME_WINDOW
from .correspondence import GenericContext, KClassElem, class_equal, form_from_class
from .decomp import Verdict, decide
from .exact import is_prime, legendre, prime_divisors, rational_sqrt
from .linalg import QMatrix


@dataclass(frozen=True)
class FamilyParams:
    ctx: GenericContext
    window: int = PRIME_WINDOW
    norm_bound: int = NORM_BOUND
    allow_unlisted: bool = False

    def __post_init__(self):
        m = self.m
        if m <= 1:
            raise ValueError(f"K = Q(sqrt {m}) is not a real quadratic field")
        if m not in PID_WHITELIST and not self.allow_unlisted:
            raise ValueError(f"m = {m} is not on the principal-ideal whitelist")

    @property
    def m(self) -> int:
        return self.ctx.delta

    @property
    def k(self):
        """sqrt(alpha1 alpha2 / m), so that sqrt(m) = (1/k) sqrt(alpha1)(x)sqrt(alpha2)."""
        return rational_sqrt(self.ctx.alpha1 * self.ctx.alpha2 / self.m)

    @property
    def excluded(self) -> set[int]:
        a = self.ctx.alpha1
        return {2} | set(prime_divisors(self.m)) | set(prime_divisors(a.numerator)) \
            | set(prime_divisors(a.denominator))

    @classmethod
    def of(cls, a1, a2, **kw) -> FamilyParams:
        return cls(GenericContext(a1, a2), **kw)


@dataclass(frozen=True)
class PiGenerator:
    p: int
    x: int
    y: int
    sign: int

    def norm(self, m: int) -> int:
        return self.x * self.x - m * self.y * self.y


def screen_prime(p: int, params: FamilyParams) -> bool:
    """p inert in Q(sqrt alpha1) and split in K."""
    if not is_prime(p) or p in params.excluded:
        raise ValueError(f"prime {p} is excluded from screening")
    return legendre(params.ctx.alpha1_class, p) == -1 and legendre(params.m, p) == 1


def norm_equation(m: int, p: int, bound: int = NORM_BOUND) -> PiGenerator:
    """Smallest (y >= 0, then x > 0) solution of x^2 - m y^2 = +-p."""
    for y in range(bound + 1):
        best = None
        for sign in (-1, 1):
            t = m * y * y + sign * p
            if t <= 0:
                continue
            x = math.isqrt(t)
            if x * x == t and (best is None or x < best[0]):
                best = (x, sign)
        if best is not None:
            return PiGenerator(p, best[0], y, best[1])
    raise ArithmeticError(f"no solution of x^2 - {m} y^2 = +-{p} with y <= {bound}")


def bp_matrix(x, y) -> BilinearSpace:
    """Gram matrix of the form attached to x + y sqrt(3) for the context (a1, a2) = (0, 1)."""
    return BilinearSpace(QMatrix([
        [2 * x - 2 * y, 2 * x + 2 * y, 2 * x, 2 * x],
        [-4 * y, 2 * x - 2 * y, 0, 2 * x],
        [-2 * y, 2 * y, x - y, x + y],
        [-4 * y, -2 * y, -2 * y, x - y],
    ]))


@dataclass(frozen=True)
class FamilyMember:
    p: int
    pi: PiGenerator
    class_elem: KClassElem
    form: BilinearSpace
    verdict: Verdict

    def to_json(self) -> dict:
        w = self.verdict.witness
        return {
            "p": self.p,
            "x": self.pi.x,
            "y": self.pi.y,
            "sign": self.pi.sign,
            "class_element": self.class_elem.to_json(),
            "gram": self.form.gram.to_json(),
            "verdict": self.verdict.status,
            "witness": None if w is None else w.to_json(),
        }


@dataclass
class FamilyResult:
    members: list = field(default_factory=list)
    complete: bool = True

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, i):
        return self.members[i]


def _is_worked_example(params: FamilyParams) -> bool:
    return (params.ctx.a1, params.ctx.a2) == (0, 1)


def family_generate(params: FamilyParams, count: int) -> FamilyResult:
    """The first ``count`` screened primes with their forms and verdicts."""
    if count < 1:
        raise ValueError("count must be positive")
    ctx = params.ctx
    out = FamilyResult()
    excluded = params.excluded
    for p in range(3, params.window + 1):
        if not is_prime(p) or p in excluded or not screen_prime(p, params):
            continue
        pi = norm_equation(params.m, p, params.norm_bound)
        u = KClassElem.field(pi.x, pi.y / params.k)
        form = bp_matrix(pi.x, pi.y) if _is_worked_example(params) else form_from_class(ctx, u)
        verdict = decide(form, prefer=(ctx.a1, ctx.a2))
        out.members.append(FamilyMember(p, pi, u, form, verdict))
        if len(out.members) == count:
            return out
    out.complete = False
    return out


def pairwise_distinct(ctx: GenericContext, elems) -> bool:
    elems = list(elems)
    return all(not class_equal(ctx, elems[i], elems[j])
               for i in range(len(elems)) for j in range(i + 1, len(elems)))
