from fractions import Fraction

import pytest

from bilindec.bilinear import BilinearSpace, I4, asymmetry, det_class, std_ba, tensor_form
from bilindec.correspondence import (
    DegenerateContextError, GenericContext, KClassElem, LElem, class_equal, class_is_trivial, form_from_class,
    is_decomposable_class, sqrt_class, sym_element, theta, theta_inv,
)
from bilindec.decomp import sign_flip_conjugator
from bilindec.linalg import QMatrix, inverse
from randgen import generic_a, invertible, nonzero_rational, rational, rng

CTX = GenericContext(0, 1)
PI11 = KClassElem.field(8, Fraction(5, 2))
PI23 = KClassElem.field(2, Fraction(3, 2))


def random_ctx(r) -> GenericContext:
    """A context where the centralizer of the asymmetry is L (a2 != +-a1)."""
    while True:
        ctx = GenericContext(generic_a(r), generic_a(r))
        if not ctx.degenerate:
            return ctx


def random_u(r, ctx) -> KClassElem:
    while True:
        x, y = rational(r), rational(r)
        if (x or y) and x * x != ctx.alpha1 * ctx.alpha2 * y * y:
            return KClassElem.field(x, y)


def hide(b: BilinearSpace, r) -> BilinearSpace:
    Q = invertible(r, 4, num=3, den=1)
    return BilinearSpace(Q.T @ b.gram @ Q * nonzero_rational(r))


def test_context_invariants():
    assert (CTX.alpha1, CTX.alpha2, CTX.delta, CTX.split) == (-4, -3, 3, False)
    r = rng(40)
    for _ in range(20):
        ctx = random_ctx(r)
        assert ctx.M @ ctx.M == I4 * (ctx.alpha1 * ctx.alpha2)
        assert ctx.M[0, 3] == 4
    with pytest.raises(ValueError):
        GenericContext(2, 1)
    with pytest.raises(ValueError):
        GenericContext(Fraction(5, 2), 1)


def test_sym_element_examples():
    u = sym_element(CTX, CTX.model)
    assert (u.r, u.s) == (1, 0)
    b_minus = tensor_form(std_ba(0), std_ba(-1))
    u = sym_element(CTX, b_minus, conj=sign_flip_conjugator(0, 1))
    assert (u.r, u.s) == (0, Fraction(1, 6))
    assert class_equal(CTX, sym_element(CTX, b_minus), (0, 1))


def test_sym_element_rejects_wrong_asymmetry():
    with pytest.raises(ValueError):
        sym_element(CTX, BilinearSpace(I4))


def test_round_trip_random():
    r = rng(41)
    for _ in range(50):
        ctx = random_ctx(r)
        u = random_u(r, ctx)
        b = hide(form_from_class(ctx, u), r)
        assert class_equal(ctx, sym_element(ctx, b), u)


def test_form_from_class():
    assert form_from_class(CTX, (1, 0)).gram == CTX.G
    r = rng(42)
    for _ in range(30):
        ctx = random_ctx(r)
        u = random_u(r, ctx)
        b = form_from_class(ctx, u)
        assert asymmetry(b) == ctx.asym
        assert det_class(b) == 1
    with pytest.raises(ValueError):
        form_from_class(GenericContext(3, 3), (1, Fraction(1, 5)))


def test_scaling_invariance():
    r = rng(43)
    for _ in range(20):
        ctx = random_ctx(r)
        u = random_u(r, ctx)
        lam = nonzero_rational(r)
        lu = KClassElem.field(u.r * lam, u.s * lam)
        assert form_from_class(ctx, lu).gram * lam == form_from_class(ctx, u).gram
        assert class_equal(ctx, u, lu)


def test_norm_invariance_under_centralizer():
    r = rng(44)
    for _ in range(20):
        ctx = random_ctx(r)
        u = random_u(r, ctx)
        v = LElem.of(ctx, *(rational(r) for _ in range(4)))
        if v.norm_LF() == 0:
            continue
        # u' = v u v* in L; v* is sigma3(v)
        w = v * LElem.of(ctx, u.r, 0, 0, u.s) * v.sigma3()
        assert w.in_K()
        u2 = KClassElem.field(w.c[0], w.c[3])
        assert class_equal(ctx, u, u2)
        V = v.matrix(ctx)
        G1, G2 = form_from_class(ctx, u).gram, form_from_class(ctx, u2).gram
        assert V.T @ G2 @ V == G1


def test_class_triviality_examples():
    assert class_is_trivial(CTX, (1, 0))
    assert CTX.norm(PI11) == -11
    assert not class_is_trivial(CTX, PI11)
    assert not class_is_trivial(CTX, (0, 1))


def test_class_equal_examples_and_equivalence():
    assert class_equal(CTX, PI11, PI11)
    assert not class_equal(CTX, PI11, PI23)
    assert class_equal(CTX, PI11, (40, Fraction(25, 2)))
    r = rng(45)
    elems = [random_u(r, CTX) for _ in range(20)]
    for a in elems:
        assert class_equal(CTX, a, a)
        for b in elems:
            assert class_equal(CTX, a, b) == class_equal(CTX, b, a)
            for c in elems:
                if class_equal(CTX, a, b) and class_equal(CTX, b, c):
                    assert class_equal(CTX, a, c)


def test_is_decomposable_class_examples():
    assert is_decomposable_class(CTX, (1, 0))
    assert is_decomposable_class(CTX, (0, 7))
    assert not is_decomposable_class(CTX, PI11)


def test_theta_split_context():
    ctx = GenericContext(3, 3)
    assert ctx.split and ctx.t == 1
    assert theta(ctx, (1, 0)) == 1
    assert theta(ctx, (0, 1)) == -1
    r = rng(46)
    for _ in range(20):
        lam = nonzero_rational(r)
        rs = theta_inv(ctx, lam)
        u = KClassElem.field(*rs)
        assert ctx.norm(u) == lam
        assert theta(ctx, u) == lam
    with pytest.raises(ValueError):
        theta(CTX, (1, 0))
    with pytest.raises(ValueError):
        theta(ctx, (5, 1))


@pytest.mark.parametrize("a1,a2,t", [(3, 7, 3), (1, Fraction(11, 7), Fraction(5, 7))])
def test_split_context_round_trip(a1, a2, t):
    ctx = GenericContext(a1, a2)
    assert ctx.split and not ctx.degenerate and ctx.t == t
    r = rng(47)
    for _ in range(10):
        u = random_u(r, ctx)
        v = sym_element(ctx, hide(form_from_class(ctx, u), r))
        assert v.kind == "split"
        assert class_equal(ctx, u, v)
    assert sqrt_class(ctx).kind == "split"


@pytest.mark.parametrize("a1,a2", [(1, -1), (3, 3), (0, 0), (Fraction(1, 2), Fraction(-1, 2))])
def test_degenerate_context_centralizer_is_larger(a1, a2):
    from bilindec.linalg import intertwiners

    ctx = GenericContext(a1, a2)
    assert ctx.degenerate
    assert len(intertwiners(ctx.asym, ctx.asym)) == (8 if a1 == 0 else 6)
    with pytest.raises(DegenerateContextError):
        sym_element(ctx, ctx.model)


def test_degenerate_context_classes_collapse():
    # a2 = -a1: forms from K-classes that differ are nevertheless similar
    from bilindec.decomp import decide

    ctx = GenericContext(1, -1)
    u = KClassElem.field(-3, Fraction(-8, 3))
    assert not class_is_trivial(ctx, u) and not is_decomposable_class(ctx, u)
    v = decide(form_from_class(ctx, u))
    assert v.status == "decomposable"
    assert v.certificate.verify()


def test_lelem_automorphisms():
    ctx = CTX
    e3 = LElem.of(ctx, 0, 0, 0, 1)
    assert e3.sigma3() == e3
    z = LElem.of(ctx, 1, 1, 0, 0)
    assert z.norm_LK() == LElem.of(ctx, 1 - ctx.alpha1, 0, 0, 0)
    r = rng(48)
    for _ in range(50):
        z = LElem.of(ctx, *(rational(r) for _ in range(4)))
        w = LElem.of(ctx, *(rational(r) for _ in range(4)))
        assert z.sigma1().sigma2() == z.sigma3()
        assert z.norm_LK().in_K() and z.norm_LM().in_M()
        assert (z * w).matrix(ctx) == z.matrix(ctx) @ w.matrix(ctx)
        assert (z * w).sigma1() == z.sigma1() * w.sigma1()
        if z.norm_LF():
            assert z * z.inverse() == LElem.of(ctx, 1, 0, 0, 0)
    # sigma3 realizes the adjoint involution of the model form on L
    z = LElem.of(ctx, 1, 2, 3, 4)
    Z = z.matrix(ctx)
    assert inverse(ctx.G) @ Z.T @ ctx.G == z.sigma3().matrix(ctx)


def test_class_elem_json():
    assert PI11.to_json() == {"kind": "field", "r": "8", "s": "5/2"}
    assert KClassElem.from_json(PI11.to_json()) == PI11
    s = KClassElem.split_elem(Fraction(-7, 3))
    assert s.to_json() == {"kind": "split", "lambda": "-7/3"}
    assert KClassElem.from_json(s.to_json()) == s
    with pytest.raises(ValueError):
        KClassElem.field(0, 0)
