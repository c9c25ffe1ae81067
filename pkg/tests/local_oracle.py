"""Brute-force local solvability of z^2 = a x^2 + b y^2, independent of
the Hilbert-symbol formulas.

For squarefree a, b a primitive solution modulo p^3 (odd p) or 2^5 lifts
to Q_p by Hensel's lemma, and conversely.
"""

from bilindec.exact import prime_divisors


def solvable_at(a: int, b: int, p) -> bool:
    if p == "inf":
        return a > 0 or b > 0
    q = p ** (5 if p == 2 else 3)
    sq = {}
    for z in range(q):
        sq.setdefault(z * z % q, z)
    # charts: x = 1; x in pZ and y = 1; x, y in pZ and z = 1
    for y in range(q):
        if (a + b * y * y) % q in sq:
            return True
    for x in range(0, q, p):
        if (a * x * x + b) % q in sq:
            return True
    for x in range(0, q, p):
        for y in range(0, q, p):
            if (a * x * x + b * y * y - 1) % q == 0:
                return True
    return False


def split_by_brute_force(a: int, b: int) -> bool:
    places = ["inf", 2] + [p for p in prime_divisors(a * b) if p != 2]
    return all(solvable_at(a, b, v) for v in places)
