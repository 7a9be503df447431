from fractions import Fraction

import numpy as np
import pytest

from pipsheaf.exact import ComplexRational, ParseError, format_rational, parse_complex, parse_rational
from pipsheaf.linalg import column_space_dim, field_rank, inverse, nullspace, rank, rank_fraction_free


@pytest.mark.parametrize("text, value", [("3/4", Fraction(3, 4)), ("-2", Fraction(-2)), (" 5 / 10 ", Fraction(1, 2))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["0.5", "1/0", "x", 0.5, True])
def test_parse_rational_rejects(bad):
    with pytest.raises((ParseError, ZeroDivisionError)):
        parse_rational(bad)


def test_format_roundtrip():
    for q in (Fraction(-7, 3), Fraction(4), Fraction(0)):
        assert parse_rational(format_rational(q)) == q


def test_complex_arithmetic():
    i = ComplexRational(0, 1)
    assert i * i == -1
    assert (1 / ComplexRational(1, 1)) == ComplexRational(Fraction(1, 2), Fraction(-1, 2))
    assert parse_complex("1/2", "-3").conjugate() == ComplexRational(Fraction(1, 2), 3)
    assert hash(ComplexRational(2)) == hash(Fraction(2))


def test_rank_routines_agree_on_known_matrices():
    m = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank_fraction_free(m) == column_space_dim(m) == rank(m) == 2
    assert rank([[0, 0], [0, 0]]) == 0
    assert rank([]) == 0


def test_rank_against_numpy_on_random_integer_matrices():
    rng = np.random.default_rng(3)
    for _ in range(50):
        m = rng.integers(-2, 3, size=(rng.integers(1, 7), rng.integers(1, 7)))
        m[:, 0] = m[:, -1]  # force some dependence
        expected = np.linalg.matrix_rank(m.astype(float))
        rows = m.tolist()
        assert rank_fraction_free(rows) == expected
        assert column_space_dim(rows) == expected


def test_inverse_and_field_rank():
    one, zero = ComplexRational(1), ComplexRational()
    F = [[ComplexRational(2), ComplexRational(0, 1)], [zero, ComplexRational(4)]]
    Finv = inverse(F, one, zero)
    prod = [[sum((F[i][k] * Finv[k][j] for k in range(2)), zero) for j in range(2)] for i in range(2)]
    assert prod == [[one, zero], [zero, one]]
    assert inverse([[1, 2], [2, 4]]) is None
    assert field_rank([[one, one], [one, one]]) == 1


def test_nullspace():
    m = [[1, 1, 0], [0, 0, 1]]
    basis = nullspace(m, 3)
    assert len(basis) == 1
    x = basis[0]
    assert all(sum(a * b for a, b in zip(row, x)) == 0 for row in m)
