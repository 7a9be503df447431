"""Random generators shared by the property and acceptance tests."""

import random
from fractions import Fraction

from pipsheaf.exact import ComplexRational
from pipsheaf.operators import OperatorSymbol, SymbolExponent, is_homomorphism
from pipsheaf.sheaf import random_vector
from pipsheaf.vectors import PipVector


def random_operator(rng: random.Random, L, *, exps=(-2, -1, 0, 1, 2), vanish=0.15, max_terms=3, max_matrix=2):
    k = L.blocks
    diag = {}
    for _ in range(rng.randint(0, max_terms)):
        vals = [None if rng.random() < vanish else Fraction(rng.choice(exps)) for _ in range(k)]
        if all(v is None for v in vals):
            vals[0] = Fraction(0)
        diag[SymbolExponent(vals)] = ComplexRational(rng.randint(-3, 3), rng.randint(-1, 1)) or ComplexRational(1)
    size = rng.randint(0, max_matrix)
    matrix = [[ComplexRational(rng.randint(-2, 2), rng.randint(-1, 1) if rng.random() < 0.3 else 0)
               for _ in range(size)] for _ in range(size)]
    return OperatorSymbol(L, diag, matrix)


def random_homomorphism(rng: random.Random, L):
    while True:
        A = random_operator(rng, L, exps=(-2, -1, 0))
        if is_homomorphism(A):
            return A


def compatible_pair(rng: random.Random, L):
    r = rng.choice(list(L))
    return random_vector(rng, L.blocks, r), random_vector(rng, L.blocks, -r), r


def random_tail_vector(rng: random.Random, k: int) -> PipVector:
    tails = {j: [(rng.randint(-3, 3), Fraction(rng.randint(-8, 2), rng.choice((1, 2, 4))))]
             for j in range(k) if rng.random() < 0.8}
    N = rng.randint(0, 3)
    return PipVector(k, {n: rng.randint(-3, 3) for n in range(1, N + 1)}, N, tails)
