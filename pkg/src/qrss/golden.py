"""Worked-example values for the (q, k, L, n) = (7, 3, 2, 4) scheme.

Public points x = (1, 3), y = (6, 2, 4, 5), secret |1,5>.  The coefficient
scheme example uses share points (2, 3, 1, 6).
"""

Q, K, L, N = 7, 3, 2, 4
X = (1, 3)
Y = (6, 2, 4, 5)
SECRET = (1, 5)

OGAWA_X = (2, 3, 1, 6)

# coefficient vectors with values (1, 5) at x = (1, 3)
D_SET = [(6, 2, 0), (2, 5, 1), (5, 1, 2), (1, 4, 3), (4, 0, 4), (0, 3, 5), (3, 6, 6)]

# shares of |1,5>, same order as D_SET
ENCODED = [(4, 3, 0, 2), (5, 2, 3, 3), (6, 1, 6, 4), (0, 0, 2, 5),
           (1, 6, 5, 6), (2, 5, 1, 0), (3, 4, 4, 1)]

M_FIRST = [[1, 1, 1], [6, 2, 4], [1, 4, 2]]
M_FIRST_INV = [[1, 1, 1], [3, 4, 1], [4, 2, 5]]
M_SECOND = [[1, 1, 1], [1, 3, 5], [1, 2, 4]]

# after the first decoding map on shares {1, 2, 3}
PARTIAL_DECODE = [(6, 2, 0, 2), (2, 5, 1, 3), (5, 1, 2, 4), (1, 4, 3, 5),
                  (4, 0, 4, 6), (0, 3, 5, 0), (3, 6, 6, 1)]

FINAL_DECODE = [(1, 5, e, e) for e in range(Q)]

# |s_2 = 5> with the first secret qudit purified by one reference qudit;
# keys are reference values, each block lists the share tuples (amplitude 1/7)
PURIFIED_BLOCKS = {
    0: [(2, 6, 4, 3), (3, 5, 0, 4), (4, 4, 3, 5), (5, 3, 6, 6), (6, 2, 2, 0), (0, 1, 5, 1), (1, 0, 1, 2)],
    1: ENCODED,
    2: [(6, 0, 3, 1), (0, 6, 6, 2), (1, 5, 2, 3), (2, 4, 5, 4), (3, 3, 1, 5), (4, 2, 4, 6), (5, 1, 0, 0)],
    3: [(1, 4, 6, 0), (2, 3, 2, 1), (3, 2, 5, 2), (4, 1, 1, 3), (5, 0, 4, 4), (6, 6, 0, 5), (0, 5, 3, 6)],
    4: [(3, 1, 2, 6), (4, 0, 5, 0), (5, 6, 1, 1), (6, 5, 4, 2), (0, 4, 0, 3), (1, 3, 3, 4), (2, 2, 6, 5)],
    5: [(5, 5, 5, 5), (6, 4, 1, 6), (0, 3, 4, 0), (1, 2, 0, 1), (2, 1, 3, 2), (3, 0, 6, 3), (4, 6, 2, 4)],
    6: [(0, 2, 1, 4), (1, 1, 4, 5), (2, 0, 0, 6), (3, 6, 3, 0), (4, 5, 6, 1), (5, 4, 2, 2), (6, 3, 5, 3)],
}

# leak on the coefficient scheme: 4*p(1) - 4*p(6) = s_2
LEAK_J = (3, 4)
LEAK_WEIGHTS = (4, 3)
ATTACK_MATRIX = [[4, 4], [3, 4]]


def strong_params():
    from .scheme import Params

    return Params(q=Q, k=K, L=L, x=X, y=Y)


def ogawa_params():
    from .scheme import OgawaParams

    return OgawaParams(q=Q, k=K, L=L, x=OGAWA_X)


def small_params():
    from .scheme import Params

    return Params(q=5, k=2, L=1, x=(0,), y=(1, 2, 3))
