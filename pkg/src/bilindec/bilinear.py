"""Non-degenerate bilinear spaces of dimension 2 and 4 over Q.

Conventions: a bilinear form is given by its Gram matrix ``B`` in a fixed
basis, ``b(x, y) = x^T B y``.  The asymmetry is ``B^{-1} B^T`` and the
adjoint anti-automorphism sends ``f`` to ``B^{-1} f^T B``.  Tensor products
use :func:`bilindec.linalg.kron`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import RationalLike, format_rational, rational_sqrt, sqfree_class, to_rational
from .linalg import QMatrix, QPoly, as_matrix, charpoly, conjugator, det, inverse, invariant_factors, kron

I2 = QMatrix.identity(2)
I4 = QMatrix.identity(4)
H = QMatrix([[0, 1], [-1, 0]])


@dataclass(frozen=True)
class BilinearSpace:
    gram: QMatrix

    def __post_init__(self):
        g = as_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        if not g.is_square or g.rows not in (2, 4):
            raise ValueError(f"Gram matrix must be 2x2 or 4x4, got {g.shape}")
        if det(g) == 0:
            raise ValueError("degenerate bilinear form (det = 0)")

    @property
    def dim(self) -> int:
        return self.gram.rows

    def __call__(self, x: Sequence, y: Sequence) -> Fraction:
        g = self.gram
        return sum((to_rational(x[i]) * g[i, j] * to_rational(y[j])
                    for i in range(self.dim) for j in range(self.dim)), Fraction(0))

    def to_json(self) -> dict:
        return {"dim": self.dim, "gram": self.gram.to_json()}

    @classmethod
    def from_json(cls, data) -> BilinearSpace:
        if isinstance(data, dict):
            space = cls(QMatrix(data["gram"]))
            if "dim" in data and int(data["dim"]) != space.dim:
                raise ValueError("'dim' does not match the Gram matrix")
            return space
        return cls(QMatrix(data))


def asymmetry(b: BilinearSpace) -> QMatrix:
    """The endomorphism a_b with b(x, y) = b(y, a_b x)."""
    return inverse(b.gram) @ b.gram.T


def adjoint_map(b: BilinearSpace, M: QMatrix) -> QMatrix:
    """sigma_b(M), characterized by b(Mx, y) = b(x, sigma_b(M) y)."""
    if M.shape != (b.dim, b.dim):
        raise ValueError("endomorphism size does not match the space")
    return inverse(b.gram) @ M.T @ b.gram


def det_class(b: BilinearSpace) -> int:
    return sqfree_class(det(b.gram))


def A_matrix(a: RationalLike) -> QMatrix:
    """Asymmetry of b_a: [[a-1, -1], [2-a, 1]]."""
    a = to_rational(a)
    return QMatrix([[a - 1, -1], [2 - a, 1]])


def std_ba(a: RationalLike) -> BilinearSpace:
    """The standard form b_a with Gram [[1, 1], [0, 1/(2-a)]]."""
    a = to_rational(a)
    if a == 2:
        raise ValueError("b_a is undefined for a = 2")
    return BilinearSpace(QMatrix([[1, 1], [0, 1 / (2 - a)]]))


def tensor_form(b1: BilinearSpace, b2: BilinearSpace) -> BilinearSpace:
    if b1.dim != 2 or b2.dim != 2:
        raise ValueError("tensor_form expects two 2-dimensional spaces")
    return BilinearSpace(kron(b1.gram, b2.gram))


# -- dimension two -------------------------------------------------------------

@dataclass(frozen=True)
class Dim2Class:
    """Similarity type of a 2-dimensional space together with a witness:
    ``lam * g^T * model.gram * g == gram``."""

    kind: str  # "symmetric" | "alternating" | "ba_similar"
    param: Fraction | int | None  # d for symmetric, a for ba_similar
    model: BilinearSpace
    g: QMatrix
    lam: Fraction

    def verify(self, b: BilinearSpace) -> bool:
        return (self.g.T @ self.model.gram @ self.g) * self.lam == b.gram


def _anisotropic_vector(G: QMatrix) -> list[Fraction]:
    for v in ([1, 0], [0, 1], [1, 1]):
        if _form(G, v, v) != 0:
            return [Fraction(x) for x in v]
    raise ValueError("form is alternating")


def _form(G: QMatrix, x, y) -> Fraction:
    return sum((x[i] * G[i, j] * y[j] for i in range(G.rows) for j in range(G.cols)), Fraction(0))


def classify_dim2(b: BilinearSpace) -> Dim2Class:
    """Symmetric <1, d>, alternating h, or similar to b_a, with explicit similarity."""
    if b.dim != 2:
        raise ValueError("classify_dim2 expects a 2-dimensional space")
    G = b.gram
    a_b = asymmetry(b)
    if a_b == I2:
        e1 = _anisotropic_vector(G)
        Ge1 = [G[0, 0] * e1[0] + G[0, 1] * e1[1], G[1, 0] * e1[0] + G[1, 1] * e1[1]]
        e2 = [-Ge1[1], Ge1[0]]
        T = QMatrix([[e1[0], e2[0]], [e1[1], e2[1]]])
        alpha, beta = _form(G, e1, e1), _form(G, e2, e2)
        d = sqfree_class(alpha * beta)
        k = rational_sqrt(beta / alpha / d)
        g = QMatrix.diag(1, k) @ inverse(T)
        return Dim2Class("symmetric", d, BilinearSpace(QMatrix.diag(1, d)), g, alpha)
    if a_b == -I2:
        return Dim2Class("alternating", None, BilinearSpace(H), I2, G[0, 1])
    a = a_b.trace()
    e1 = _anisotropic_vector(G)
    alpha = _form(G, e1, e1)
    # e2 spans the kernel of b(., e1)
    Ge1 = [G[0, 0] * e1[0] + G[0, 1] * e1[1], G[1, 0] * e1[0] + G[1, 1] * e1[1]]
    e2 = [-Ge1[1], Ge1[0]]
    beta = _form(G, e1, e2)
    e2 = [x * alpha / beta for x in e2]
    T = QMatrix([[e1[0], e2[0]], [e1[1], e2[1]]])
    return Dim2Class("ba_similar", a, std_ba(a), inverse(T), alpha)


# -- tensor parameters -----------------------------------------------------------

def chi_tensor(a1: RationalLike, a2: RationalLike) -> QPoly:
    """Characteristic polynomial of A_{a1} (x) A_{a2}:
    X^4 - a1 a2 X^3 + (a1^2 + a2^2 - 2) X^2 - a1 a2 X + 1."""
    a1, a2 = to_rational(a1), to_rational(a2)
    p = a1 * a2
    return QPoly([1, -p, a1 * a1 + a2 * a2 - 2, -p, 1])


def recover_tensor_parameters(chi: QPoly) -> list[tuple[Fraction, Fraction]]:
    """All unordered rational pairs (a1, a2) with chi_tensor(a1, a2) == chi.

    Pairs are returned with a1 <= a2, sorted; both sign patterns (a1, a2) and
    (-a1, -a2) appear when rational.
    """
    if chi.degree != 4 or chi.lead != 1 or chi[0] != 1 or not chi.is_palindromic():
        raise ValueError("expected a monic palindromic quartic with constant term 1")
    c3, c2 = -chi[3], chi[2]
    s = rational_sqrt(c2 + 2 + 2 * c3)
    d = rational_sqrt(c2 + 2 - 2 * c3)
    if s is None or d is None:
        return []
    pairs = set()
    for es in (1, -1):
        for ed in (1, -1):
            x, y = (es * s + ed * d) / 2, (es * s - ed * d) / 2
            pairs.add((min(x, y), max(x, y)))
    return sorted(pairs)


# -- dimension four --------------------------------------------------------------

@dataclass(frozen=True)
class Factor2:
    """A 2-dimensional model factor: the unit form <1,1>, the hyperbolic
    alternating form h, or a standard b_a."""

    label: str  # "unit" | "h" | "b"
    a: Fraction

    @property
    def space(self) -> BilinearSpace:
        if self.label == "unit":
            return BilinearSpace(I2)
        if self.label == "h":
            return BilinearSpace(H)
        return std_ba(self.a)

    @property
    def asym(self) -> QMatrix:
        if self.label == "unit":
            return I2
        if self.label == "h":
            return -I2
        return A_matrix(self.a)

    def alpha(self) -> Fraction:
        return self.a * self.a - 4

    def to_json(self) -> dict:
        return {"label": self.label, "a": format_rational(self.a)}

    @classmethod
    def from_json(cls, data) -> Factor2:
        return cls(data["label"], to_rational(data["a"]))


def model_factors(a: Fraction) -> list[Factor2]:
    """The 2-dimensional model asymmetries with trace a."""
    if a == 2:
        return [Factor2("unit", a)]
    if a == -2:
        return [Factor2("b", a), Factor2("h", a)]
    return [Factor2("b", a)]


def _nonsquare(q: Fraction) -> bool:
    return q != 0 and rational_sqrt(q) is None


@dataclass(frozen=True)
class AsymmetryClass4:
    """Outcome of :func:`classify_asymmetry4`.

    ``factors`` is the matched model (phi1, phi2), in the canonical position
    used by the decomposition routines, and ``conj`` satisfies
    ``asymmetry(b') = conj @ kron(phi1.asym, phi2.asym) @ conj^{-1}``.
    """

    kind: str  # symmetric | skew | generic | nongeneric | none
    case: str | None = None  # i | ii | iii for nongeneric
    factors: tuple | None = None
    conj: QMatrix | None = None
    candidates: tuple = field(default_factory=tuple)

    @property
    def params(self) -> tuple[Fraction, Fraction] | None:
        if self.factors is None:
            return None
        return self.factors[0].a, self.factors[1].a

    def to_json(self) -> dict:
        out = {"kind": self.kind, "case": self.case,
               "candidates": [[format_rational(x), format_rational(y)] for x, y in self.candidates]}
        if self.factors is not None:
            out["factors"] = [f.to_json() for f in self.factors]
            out["params"] = [format_rational(x) for x in self.params]
        return out


def _match_kind(f1: Factor2, f2: Factor2) -> tuple[int, str, str | None] | None:
    """Rank a model (f1, f2) in canonical position; lower rank is preferred."""
    def generic_b(f):
        return f.label == "b" and f.a not in (2, -2) and _nonsquare(f.alpha())

    if generic_b(f1) and generic_b(f2):
        return 0, "generic", None
    if f2.label == "b" and f2.a not in (2, -2) and not _nonsquare(f2.alpha()):
        return 1, "nongeneric", "i"
    if f1.label == "unit" and generic_b(f2):
        return 2, "nongeneric", "ii"
    if f2.label == "b" and f2.a == -2 and (f1.label in ("unit", "h") or f1.a == -2 or generic_b(f1)):
        return 3, "nongeneric", "iii"
    return None


def classify_asymmetry4(b: BilinearSpace, prefer: tuple | None = None) -> AsymmetryClass4:
    """Decide whether the asymmetry of a 4-dimensional space is decomposable
    and, if so, of which type.

    Candidate parameter pairs come from the characteristic polynomial; each
    ordered pair and each compatible choice of 2-dimensional models is tested
    for conjugacy by invariant factors.  ``prefer`` selects the ordered pair
    (a1, a2) to report when several models match equally well.
    """
    if b.dim != 4:
        raise ValueError("classify_asymmetry4 expects a 4-dimensional space")
    a_b = asymmetry(b)
    if a_b == I4:
        return AsymmetryClass4("symmetric")
    if a_b == -I4:
        return AsymmetryClass4("skew")
    chi = charpoly(a_b)
    candidates = tuple(recover_tensor_parameters(chi))
    if not candidates:
        return AsymmetryClass4("none", candidates=candidates)

    ordered = []
    for x, y in sorted(candidates, key=lambda p: (-(p[0] + p[1]), p)):
        for pair in ((x, y), (y, x)):
            if pair not in ordered:
                ordered.append(pair)
    if prefer is not None:
        prefer = (to_rational(prefer[0]), to_rational(prefer[1]))
        if prefer in ordered:
            ordered.remove(prefer)
            ordered.insert(0, prefer)

    target = invariant_factors(a_b)
    best = None
    for a1, a2 in ordered:
        for f1 in model_factors(a1):
            for f2 in model_factors(a2):
                ranked = _match_kind(f1, f2)
                if ranked is None or (best is not None and ranked[0] >= best[0][0]):
                    continue
                model = kron(f1.asym, f2.asym)
                if invariant_factors(model) == target:
                    best = (ranked, f1, f2, model)
    if best is None:
        return AsymmetryClass4("none", candidates=candidates)
    (_, kind, case), f1, f2, model = best
    conj = conjugator(model, a_b)
    return AsymmetryClass4(kind, case, (f1, f2), conj, candidates)


def model_space(factors: tuple) -> BilinearSpace:
    return tensor_form(factors[0].space, factors[1].space)
