import random
from itertools import permutations, product

import pytest

from pqvw.algebra import (
    BadArity,
    OpSum,
    Term,
    bracket2,
    bracket3_closed,
    bracket_coeff,
    bracket_multilinear,
    bracketn_closed,
    derive_sign,
    known_signs,
    nested_coeff,
    recursion_weights,
    sign_of,
    sort_with_sign,
    vandermonde_det,
)
from pqvw.ring import LPoly, Scalar, classical_value, pq_number, q_number, specialize_pq

Q = LPoly.monomial(0, 1)
PINV = LPoly.monomial(-1, 0)


def laplace_det(matrix):
    """Independent determinant oracle: recursive cofactor expansion."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = LPoly.zero()
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        cof = matrix[0][j] * laplace_det(minor)
        total = total + (cof if j % 2 == 0 else -cof)
    return total


def closed_matrix(indices):
    n = len(indices)
    off = 2 * ((n - 1) // 2)
    return [
        [LPoly.monomial((t - off) * i, t * i) for i in indices] for t in range(n)
    ]


class TestBracket2:
    def test_examples(self):
        assert bracket2(0, 1) == Term(Scalar(LPoly.one().scale(-1), 0), 1)
        assert bracket2(m := 2, m).is_zero
        assert bracket2(1, 0) == Term(Scalar(LPoly.one(), 0), 1)

    def test_skew_window(self):
        for m, n in product(range(-4, 5), repeat=2):
            assert bracket2(n, m).coeff == -bracket2(m, n).coeff

    def test_index_grading(self):
        for m, n in product(range(-4, 5), repeat=2):
            assert bracket2(m, n).index == m + n

    def test_specialization_chain(self):
        for m, n in product(range(-5, 6), repeat=2):
            spec = specialize_pq(bracket2(m, n).coeff)
            assert spec == q_number(m - n)
            assert classical_value(spec) == m - n


class TestVandermonde:
    def test_factored_form_n3(self):
        # p^-2 q (pq - 1) (q + p^-1) (q - p^-1)^2, expanded
        expected = (
            LPoly.monomial(-2, 1)
            * (LPoly.monomial(1, 1) - LPoly.one())
            * (Q + PINV)
            * (Q - PINV) ** 2
        )
        assert vandermonde_det((0, 1, 2)) == expected

    def test_matches_cofactor_oracle(self):
        rng = random.Random(11)
        for n in (3, 4, 5):
            for _ in range(8):
                idx = tuple(rng.sample(range(-4, 5), n))
                assert vandermonde_det(idx) == laplace_det(closed_matrix(idx))

    def test_repeated_index_vanishes(self):
        assert vandermonde_det((1, 1, 2)).is_zero
        assert vandermonde_det((0, -2, 3, -2)).is_zero

    def test_column_swap_flips_sign(self):
        assert vandermonde_det((1, 0, 2)) == -vandermonde_det((0, 1, 2))

    def test_divisible_by_divisor_power(self):
        for idx in [(0, 1, 2), (-2, 1, 3), (0, 1, 2, 3), (-2, -1, 0, 1, 2)]:
            n = len(idx)
            vandermonde_det(idx).exact_div(Scalar.DIVISOR ** (n - 1))

    def test_arity_guard(self):
        with pytest.raises(BadArity):
            vandermonde_det((0, 1))


class TestBracket3:
    def test_regression_pin(self):
        term = bracket3_closed(0, 1, 2)
        assert term.coeff.canonical() == "1*p^0*q^-2 + -1*p^2*q^0"
        assert term.index == 3

    def test_repeated_zero(self):
        assert bracket3_closed(1, 1, 4).is_zero

    def test_swap_negates(self):
        assert bracket3_closed(1, 0, 2).coeff == -bracket3_closed(0, 1, 2).coeff

    def test_agrees_with_general_form(self):
        for idx in product(range(-2, 3), repeat=3):
            assert bracket3_closed(*idx) == bracketn_closed(idx)


class TestRecursionWeights:
    def test_values(self):
        assert (recursion_weights(4).x, recursion_weights(4).y) == (2, 0)
        assert (recursion_weights(5).x, recursion_weights(5).y) == (2, -1)
        assert (recursion_weights(6).x, recursion_weights(6).y) == (3, 0)
        assert (recursion_weights(7).x, recursion_weights(7).y) == (3, -1)

    def test_base_case_guarded(self):
        with pytest.raises(BadArity):
            recursion_weights(3)


class TestSignTable:
    def test_frozen_values(self):
        assert derive_sign(3) == -1
        assert derive_sign(4) == 1
        assert derive_sign(5) == 1
        assert derive_sign(6) == -1

    def test_witness_independence(self):
        for witness in [(0, 1, 2, 3), (-2, -1, 1, 2), (-1, 0, 2, 3)]:
            assert derive_sign(4, witness) == 1
        for witness in [(0, 1, 2, 3, 4), (-2, -1, 0, 1, 2)]:
            assert derive_sign(5, witness) == 1

    def test_degenerate_witness_rejected(self):
        with pytest.raises(ValueError):
            derive_sign(4, (0, 0, 1, 2))

    def test_table_snapshot(self):
        sign_of(4)
        assert known_signs()[3] == -1
        assert known_signs()[4] == 1


class TestBracketN:
    def test_regression_pin_n4(self):
        term = bracketn_closed((0, 1, 2, 3))
        expected = (
            "-1*p^1*q^-2 + 2*p^3*q^0 + 1*p^4*q^1 + -1*p^5*q^2 + -2*p^6*q^3 + 1*p^8*q^5"
        )
        assert term.coeff.canonical() == expected
        assert term.index == 6

    def test_index_is_total_sum(self):
        rng = random.Random(3)
        for n in (3, 4, 5):
            for _ in range(20):
                idx = tuple(rng.randint(-3, 3) for _ in range(n))
                assert bracketn_closed(idx).index == sum(idx)

    def test_repeated_zero_fast_path(self):
        assert bracketn_closed((2, -1, 2, 0)).is_zero

    def test_antisymmetry_exhaustive_n3(self):
        for base in permutations(range(-2, 3), 3):
            reference = bracketn_closed(base)
            for perm in permutations(range(3)):
                idx = tuple(base[i] for i in perm)
                _, sign = sort_with_sign(perm)
                got = bracketn_closed(idx)
                assert got.coeff == (reference.coeff if sign > 0 else -reference.coeff) or (
                    reference.is_zero and got.is_zero
                )

    def test_antisymmetry_sampled_n4_n5(self):
        rng = random.Random(17)
        for n in (4, 5):
            for _ in range(12):
                base = tuple(rng.sample(range(-3, 4), n))
                reference = bracketn_closed(base)
                perm = tuple(rng.sample(range(n), n))
                _, sign = sort_with_sign(perm)
                idx = tuple(base[i] for i in perm)
                assert bracketn_closed(idx).coeff == (
                    reference.coeff if sign > 0 else -reference.coeff
                )

    def test_arity_guard(self):
        with pytest.raises(BadArity):
            bracketn_closed((0, 1))


class TestCachedAccessors:
    def test_bracket_coeff_matches_direct(self):
        rng = random.Random(23)
        for n in (2, 3, 4):
            for _ in range(30):
                idx = tuple(rng.randint(-3, 3) for _ in range(n))
                direct = bracket2(*idx) if n == 2 else bracketn_closed(idx)
                assert bracket_coeff(idx) == direct.coeff

    def test_nested_matches_manual_product(self):
        inner, rest = (0, 1, 2), (-1, 1)
        manual = bracketn_closed(inner).coeff * bracketn_closed((-1, 3, 1)).coeff
        assert nested_coeff(inner, rest, 1) == manual

    def test_nested_zero_shortcuts(self):
        assert nested_coeff((0, 0, 1), (2, 3), 0).is_zero
        assert nested_coeff((0, 1, 2), (3, 4), 1).is_zero  # outer repeats 3


class TestTermAndOpSum:
    def test_zero_terms_compare_equal(self):
        assert Term(Scalar.zero(), 5) == Term.zero()
        assert Term(Scalar.zero(), 5) == Term(Scalar.zero(), -3)

    def test_nonzero_terms_compare_structurally(self):
        one = Scalar(LPoly.one(), 0)
        assert Term(one, 2) == Term(one, 2)
        assert Term(one, 2) != Term(one, 3)

    def test_multilinear_singletons(self):
        args = [OpSum.generator(i) for i in (0, 1, 2)]
        assert bracket_multilinear(args) == OpSum.from_term(bracketn_closed((0, 1, 2)))

    def test_multilinear_zero_slot(self):
        args = [OpSum.generator(0), OpSum(), OpSum.generator(2)]
        assert bracket_multilinear(args).is_zero

    def test_multilinear_scaling(self):
        c = pq_number(2)
        args = [OpSum.generator(0), OpSum.generator(1), OpSum.generator(2)]
        scaled = [OpSum.generator(0, c), OpSum.generator(1), OpSum.generator(2)]
        assert bracket_multilinear(scaled) == bracket_multilinear(args).scale(c)

    def test_multilinear_expands_sums(self):
        two_slot = [
            OpSum({0: Scalar(LPoly.one(), 0), 1: Scalar(LPoly.one(), 0)}),
            OpSum.generator(2),
        ]
        expected = OpSum.from_term(bracket2(0, 2)) + OpSum.from_term(bracket2(1, 2))
        assert bracket_multilinear(two_slot) == expected
