from fractions import Fraction

import pytest

from bilindec.bilinear import A_matrix
from bilindec.decomp import sign_flip_conjugator
from bilindec.linalg import (
    QMatrix, QPoly, charpoly, conjugator, det, invariant_factors, inverse, kron, nullspace,
)
from randgen import generic_a, invertible, matrix, rng

X = QPoly([0, 1])
I2, I4 = QMatrix.identity(2), QMatrix.identity(4)


def test_charpoly_examples():
    assert charpoly(A_matrix(0)) == QPoly([1, 0, 1])
    assert charpoly(I4) == QPoly.from_roots(1, 1, 1, 1)
    assert charpoly(kron(A_matrix(0), A_matrix(1))) == QPoly([1, 0, -1, 0, 1])


def test_charpoly_rejects_non_square():
    with pytest.raises(ValueError):
        charpoly(QMatrix([[1, 2, 3], [4, 5, 6]]))


def test_cayley_hamilton_random():
    r = rng(10)
    for _ in range(200):
        M = matrix(r, 4)
        assert charpoly(M)(M).is_zero()


def test_charpoly_against_sympy():
    sympy = pytest.importorskip("sympy")
    r = rng(11)
    for _ in range(25):
        M = matrix(r, 4)
        ref = sympy.Matrix(M.tolist()).charpoly().all_coeffs()
        assert list(reversed(charpoly(M).coeffs)) == [Fraction(int(c.p), int(c.q)) for c in ref]


def test_kron_examples():
    assert kron(I2, I2) == I4
    assert kron(QMatrix.diag(1, 2), QMatrix.diag(3, 4)) == QMatrix.diag(3, 4, 6, 8)
    A0, A1 = A_matrix(0), A_matrix(1)
    # first row: (a0_00 * A1 row 0, a0_01 * A1 row 0) = (-1*(0, -1), -1*(0, -1))
    assert kron(A0, A1)[0] == tuple(Fraction(v) for v in (0, 1, 0, 1))


# Smith normal forms of xI - M over Q[x], computed with sympy and frozen.
INVARIANT_FACTORS = [
    (kron(A_matrix(0), A_matrix(0)), [QPoly([-1, 0, 1]), QPoly([-1, 0, 1])]),
    (kron(A_matrix(0), A_matrix(1)), [QPoly([1, 0, -1, 0, 1])]),
    (I2, [QPoly([-1, 1]), QPoly([-1, 1])]),
    (kron(A_matrix(1), A_matrix(-2)), [QPoly([1, 1, 1]) * QPoly([1, 1, 1])]),
    (kron(I2, A_matrix(Fraction(5, 2))), [QPoly([1, Fraction(-5, 2), 1])] * 2),
]


@pytest.mark.parametrize("M, expected", INVARIANT_FACTORS)
def test_invariant_factors_frozen(M, expected):
    assert invariant_factors(M) == expected


def test_invariant_factors_cyclic_two_by_two():
    for a in (0, 1, 3, Fraction(1, 3)):
        assert invariant_factors(A_matrix(a)) == [QPoly([1, -a, 1])]


def test_invariant_factors_divisibility_and_product():
    r = rng(12)
    for _ in range(60):
        M = matrix(r, 4, num=2, den=1)
        facs = invariant_factors(M)
        prod = QPoly([1])
        for f in facs:
            assert f.lead == 1
            prod = prod * f
        assert prod == charpoly(M)
        for f, g in zip(facs, facs[1:]):
            assert (g % f).degree == -1


def test_conjugator_examples():
    A = kron(A_matrix(0), A_matrix(1))
    assert conjugator(A, A) == I4
    assert conjugator(I2, -I2) is None
    B = kron(A_matrix(0), A_matrix(-1))
    P = conjugator(A, B)
    assert P is not None and B @ P == P @ A
    Pe = sign_flip_conjugator(0, 1)
    assert B == Pe @ A @ inverse(Pe)


def test_conjugator_on_random_similar_pairs():
    r = rng(13)
    for _ in range(30):
        A = matrix(r, 4, num=3, den=1)
        Q = invertible(r, 4, num=3, den=1)
        B = Q @ A @ inverse(Q)
        P = conjugator(A, B)
        assert P is not None and det(P) != 0 and B @ P == P @ A
        assert conjugator(A, B) == P  # deterministic


def test_conjugator_iff_invariant_factors():
    r = rng(14)
    models = [kron(A_matrix(generic_a(r)), A_matrix(generic_a(r))) for _ in range(6)]
    models += [kron(A_matrix(0), A_matrix(0)), kron(I2, A_matrix(0)), kron(A_matrix(1), A_matrix(-2))]
    for A in models:
        for B in models:
            same = invariant_factors(A) == invariant_factors(B)
            assert (conjugator(A, B) is not None) == same


def test_det_inverse_examples():
    assert det(I4) == 1
    assert det(QMatrix([[1, 1], [0, Fraction(1, 2 - 1)]])) == 1
    assert inverse(QMatrix([[1, 1], [0, 1]])) == QMatrix([[1, -1], [0, 1]])
    with pytest.raises(ZeroDivisionError):
        inverse(QMatrix([[1, 2], [2, 4]]))


def test_inverse_random():
    r = rng(15)
    for _ in range(100):
        M = invertible(r, 4)
        assert M @ inverse(M) == I4


def test_nullspace():
    M = QMatrix([[1, 2, 3], [2, 4, 6]])
    basis = nullspace(M)
    assert len(basis) == 2
    for v in basis:
        assert all(sum(M[i, j] * v[j] for j in range(3)) == 0 for i in range(2))


def test_json_round_trip():
    M = QMatrix([[Fraction(1, 2), -3], [0, Fraction(-7, 9)]])
    assert M.to_json() == [["1/2", "-3"], ["0", "-7/9"]]
    assert QMatrix.from_json(M.to_json()) == M


def test_poly_arithmetic():
    p = QPoly([1, -4, 6, -4, 1])
    assert p == QPoly.from_roots(1, 1, 1, 1)
    q, rem = divmod(p, QPoly([-1, 1]))
    assert rem.degree == -1 and q == QPoly.from_roots(1, 1, 1)
    assert p.is_palindromic() and not QPoly([1, 2, 3]).is_palindromic()
    assert str(QPoly([1, 0, -1, 0, 1])) == "X^4 - X^2 + 1"
