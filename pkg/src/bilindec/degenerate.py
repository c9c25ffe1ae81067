"""Decomposability when ``a2 = +-a1``.

Here the asymmetry ``A = A_{a1} (x) A_{a2}`` has a 2-dimensional eigenspace
for +1 (``a2 = a1``) or -1 (``a2 = -a1``), and both when ``a1 = a2 = 0``.
The remaining invariant plane ``W`` carries an action of ``Q(sqrt alpha1)``
(or of ``Q x Q`` when alpha1 is a square, which happens for the non-generic
pair ``b_a (x) b_a``).
Any form with asymmetry ``A`` is an orthogonal sum over these blocks:

* on the +1 eigenspace a symmetric binary form,
* on the -1 eigenspace an alternating form (unique up to scaling),
* on ``W`` a scalar multiple of the model's restriction.

A similarity ``lam h^T D h = C`` with ``h`` commuting with ``A`` exists iff it
exists blockwise with a common ``lam``.  The alternating block imposes no
condition; ``W`` forces ``lam`` into a coset of the norm group of
``Q(sqrt alpha1)``; the symmetric block needs ``C1 ~ lam D1`` as quadratic
forms.  That last condition is decided by local symbols, and a global ``lam``
exists iff no place obstructs it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .bilinear import BilinearSpace, asymmetry, std_ba
from .brauer import Place, is_local_square, is_split, ramified_places
from .config import CONIC_BOUND
from .bilinear import A_matrix, I2
from .correspondence import GenericContext, InternalConsistencyError, S_matrix
from .decomp import DecisionOnly, GenericDecompCert, sign_flip_conjugator, norm_from_M
from .exact import RationalLike, rational_sqrt, to_rational
from .linalg import QMatrix, conjugator, det, inverse, kron, nullspace, rref


@dataclass(frozen=True)
class Pair:
    """The data of ``b_{a1} (x) b_{a2}`` used here, for a2 = +-a1 != +-2.

    Unlike :class:`GenericContext` this allows a square alpha1.
    """

    a1: Fraction
    a2: Fraction

    def __post_init__(self):
        a1, a2 = to_rational(self.a1), to_rational(self.a2)
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)
        if a1 in (2, -2) or a2 not in (a1, -a1):
            raise ValueError("need a2 = +-a1 with a1 != +-2")

    @classmethod
    def of(cls, ctx: GenericContext | Pair | tuple) -> Pair:
        if isinstance(ctx, Pair):
            return ctx
        if isinstance(ctx, tuple):
            return cls(*ctx)
        return cls(ctx.a1, ctx.a2)

    degenerate = True

    @property
    def alpha1(self) -> Fraction:
        return self.a1 * self.a1 - 4

    @property
    def asym(self) -> QMatrix:
        return kron(A_matrix(self.a1), A_matrix(self.a2))

    @property
    def S1(self) -> QMatrix:
        return kron(S_matrix(self.a1), I2)


@dataclass(frozen=True)
class Block:
    kind: str  # sym | alt | field
    idx: tuple


@dataclass(frozen=True)
class AdaptedBasis:
    P: QMatrix
    blocks: tuple

    def block(self, kind: str) -> Block | None:
        return next((b for b in self.blocks if b.kind == kind), None)


@dataclass(frozen=True)
class BlockObstruction:
    """Why neither decomposable model is similar to the form.

    ``reasons`` pairs a model label with either ``"discriminant"`` (the
    symmetric blocks have different determinant classes) or a place where no
    admissible scaling makes the symmetric blocks isometric.
    """

    reasons: tuple

    def to_json(self) -> dict:
        return {"type": "block_obstruction",
                "reasons": [{"model": m, "obstruction": r} for m, r in self.reasons]}


def adapted_basis(ctx: GenericContext | Pair | tuple) -> AdaptedBasis:
    """Columns spanning the +1 / -1 eigenspaces first, then ``W``."""
    A = Pair.of(ctx).asym
    I = QMatrix.identity(4)
    cols, blocks = [], []
    for eps, kind in ((1, "sym"), (-1, "alt")):
        vs = nullspace(A - I * eps)
        if len(vs) == 2:
            blocks.append(Block(kind, (len(cols), len(cols) + 1)))
            cols += vs
    if len(cols) == 2:
        eps = 1 if blocks[0].kind == "sym" else -1
        rows, _ = rref((A - I * eps).T)
        blocks.append(Block("field", (2, 3)))
        cols += [r for r in rows if any(r)]
    if len(cols) != 4:
        raise InternalConsistencyError("eigenspace dimensions do not add up")
    return AdaptedBasis(QMatrix(cols).T, tuple(blocks))


def _sub(M: QMatrix, idx: tuple) -> QMatrix:
    return QMatrix([[M[i, j] for j in idx] for i in idx])


def _diagonalize2(S: QMatrix) -> tuple[QMatrix, Fraction, Fraction]:
    """T with ``T^T S T = diag(d1, d2)`` for a symmetric nondegenerate 2x2 S."""
    a, b, c = S[0, 0], S[0, 1], S[1, 1]
    if a != 0:
        T = QMatrix([[1, -b / a], [0, 1]])
    elif c != 0:
        T = QMatrix([[0, 1], [1, -b / c]])
    else:
        T = QMatrix([[1, 1], [1, -1]])
    D = T.T @ S @ T
    return T, D[0, 0], D[1, 1]


def _binary_isometry(C1: QMatrix, D1: QMatrix, lam: Fraction, bound: int) -> QMatrix | None:
    """h with ``lam h^T D1 h = C1``, or None if the conic search runs out."""
    Tc, c1, c2 = _diagonalize2(C1)
    Td, d1, d2 = _diagonalize2(D1)
    # c1 X^2 + c2 Y^2 = lam d1
    sol = norm_from_M(-c2 / c1, lam * d1 / c1, bound)
    if sol is None:
        return None
    X, Y = sol
    k = rational_sqrt(c1 * c2 * d1 / d2)
    if k is None:
        raise InternalConsistencyError("binary forms with unequal discriminants")
    basis = QMatrix([[X, -c2 * Y / k], [Y, c1 * X / k]])
    h = Td @ inverse(Tc @ basis)
    if (h.T @ D1 @ h) * lam != C1:
        raise InternalConsistencyError("binary isometry does not verify")
    return h


def _norm_pairs(bound: int) -> Iterator[tuple[int, int]]:
    for h in range(1, bound + 1):
        for x in range(0, h + 1):
            for y in ((h,) if x < h else range(0, h + 1)):
                if math.gcd(x, y) == 1:
                    yield x, y
                    if y:
                        yield x, -y


def _sym_obstruction(ctx: Pair, e: Fraction, minus_disc: Fraction) -> Place | None:
    """First place where no norm n from Q(sqrt alpha1) makes (e n, -disc) split."""
    for v in ramified_places(e, minus_disc).ramified:
        if is_local_square(minus_disc * ctx.alpha1, v):
            return v
    return None


@dataclass(frozen=True)
class _Attempt:
    cert: object = None
    obstruction: object = None


def _try_model(ctx: Pair, basis: AdaptedBasis, Cp: QMatrix, target: QMatrix,
               fP: QMatrix, flip: bool, bound: int) -> _Attempt:
    a1, a2 = (-ctx.a1, -ctx.a2) if flip else (ctx.a1, ctx.a2)
    factors = (std_ba(a1), std_ba(a2))
    fD = sign_flip_conjugator(ctx.a1, ctx.a2) if flip else QMatrix.identity(4)
    fDP = fD @ basis.P
    CD = fDP.T @ kron(factors[0].gram, factors[1].gram) @ fDP
    label = "degenerate sign-flipped model" if flip else "degenerate model"

    sym, alt, fld = basis.block("sym"), basis.block("alt"), basis.block("field")
    rho = None
    if fld is not None:
        C2, D2 = _sub(Cp, fld.idx), _sub(CD, fld.idx)
        rho = C2[0, 0] / D2[0, 0] if D2[0, 0] != 0 else C2[0, 1] / D2[0, 1]
        if C2 != D2 * rho:
            raise InternalConsistencyError("field blocks are not proportional")

    lam, y_norm = Fraction(1), None
    h_sym = None
    if sym is not None:
        C1, D1 = _sub(Cp, sym.idx), _sub(CD, sym.idx)
        if rational_sqrt(det(C1) / det(D1)) is None:
            return _Attempt(obstruction=(label, "discriminant"))
        _, c1, c2 = _diagonalize2(C1)
        _, d1, _ = _diagonalize2(D1)
        minus_disc = -c1 * c2
        if fld is None:
            lam = d1 * c1
        else:
            e = rho * d1 * c1
            place = _sym_obstruction(ctx, e, minus_disc)
            if place is not None:
                return _Attempt(obstruction=(label, place))
            for x, y in _norm_pairs(bound):
                n = Fraction(x * x) - ctx.alpha1 * y * y
                if n != 0 and is_split(e * n, minus_disc):
                    lam, y_norm = rho / n, (x, y)
                    break
            else:
                return _Attempt(cert=DecisionOnly("search-bound-exceeded"))
        h_sym = _binary_isometry(C1, D1, lam, bound)
        if h_sym is None:
            return _Attempt(cert=DecisionOnly("search-bound-exceeded"))
    elif fld is not None:
        lam = rho

    h = [[Fraction(0)] * 4 for _ in range(4)]
    if sym is not None:
        for i in range(2):
            for j in range(2):
                h[sym.idx[i]][sym.idx[j]] = h_sym[i, j]
    if alt is not None:
        C3, D3 = _sub(Cp, alt.idx), _sub(CD, alt.idx)
        i, j = alt.idx
        h[i][i] = C3[0, 1] / (lam * D3[0, 1])
        h[j][j] = Fraction(1)
    if fld is not None:
        x, y = y_norm if y_norm is not None else (1, 0)
        S_ad = inverse(basis.P) @ ctx.S1 @ basis.P
        for i in fld.idx:
            for j in fld.idx:
                h[i][j] = S_ad[i, j] * y + (x if i == j else 0)
    H = QMatrix(h)
    g = fDP @ H @ inverse(fP)
    cert = GenericDecompCert(factors, g, lam, target, label)
    if not cert.verify():
        raise InternalConsistencyError("degenerate certificate does not verify")
    return _Attempt(cert=cert)


def decide_degenerate(ctx: GenericContext | Pair | tuple, b: BilinearSpace, conj: QMatrix | None = None,
                      bound: int = CONIC_BOUND) -> tuple[str, object]:
    """``("decomposable", certificate)`` or ``("indecomposable", BlockObstruction)``.

    The certificate is a :class:`GenericDecompCert`, or a :class:`DecisionOnly`
    when the local criterion says yes but the bounded search found no scaling.
    """
    ctx = Pair.of(ctx)
    basis = adapted_basis(ctx)
    f = conj if conj is not None else conjugator(ctx.asym, asymmetry(b))
    if f is None:
        raise ValueError("asymmetry is not conjugate to the model asymmetry")
    fP = f @ basis.P
    Cp = fP.T @ b.gram @ fP
    reasons = []
    for flip in (False, True):
        att = _try_model(ctx, basis, Cp, b.gram, fP, flip, bound)
        if att.cert is not None:
            return "decomposable", att.cert
        reasons.append(att.obstruction)
    return "indecomposable", BlockObstruction(tuple(reasons))


__all__ = ["AdaptedBasis", "Block", "BlockObstruction", "Pair", "adapted_basis", "decide_degenerate"]
