from __future__ import annotations

import math
import random

import pytest

from ppscert.lattice import HnfBasis, RankDeficientError, hnf, verify_hnf
from ppscert.ntheory import _bareiss_determinant


def random_full_rank(rnd: random.Random, m: int, u: int):
    """m x u integer matrix whose rows span a full-rank lattice."""
    while True:
        rows = [[rnd.randint(-9, 9) for _ in range(u)] for _ in range(m)]
        square = [rows[i][:] for i in range(u)]
        if _bareiss_determinant(square) != 0:
            return tuple(tuple(r) for r in rows)


def gram_determinant(rows, u):
    """|det| of the lattice as gcd of all u x u minors, the textbook definition."""
    import itertools

    g = 0
    for picks in itertools.combinations(range(len(rows)), u):
        sub = [list(rows[i]) for i in picks]
        g = math.gcd(g, abs(_bareiss_determinant(sub)))
    return g


def test_hnf_structure_and_witness():
    rnd = random.Random(61)
    for _ in range(60):
        u = rnd.randint(1, 4)
        m = rnd.randint(u, u + 3)
        rows = random_full_rank(rnd, m, u)
        basis = hnf(rows)
        b = basis.basis
        assert len(b) == u
        for i in range(u):
            assert b[i][i] > 0
            for j in range(i + 1, u):
                assert b[i][j] == 0
            for k in range(i):
                assert 0 <= b[i][k] < b[k][k]
        # witness must be square, unimodular, and reproduce [B; 0]
        w = basis.witness
        assert len(w) == m
        assert abs(_bareiss_determinant([list(r) for r in w])) == 1
        for i in range(m):
            prod = tuple(sum(w[i][k] * rows[k][j] for k in range(m)) for j in range(u))
            assert prod == (b[i] if i < u else (0,) * u)
        assert verify_hnf(rows, basis)


def test_hnf_determinant_equals_gcd_of_minors():
    rnd = random.Random(67)
    for _ in range(40):
        u = rnd.randint(1, 3)
        m = rnd.randint(u, u + 2)
        rows = random_full_rank(rnd, m, u)
        assert hnf(rows).determinant == gram_determinant(rows, u)


def test_hnf_idempotent_and_row_op_invariant():
    rnd = random.Random(71)
    for _ in range(40):
        u = rnd.randint(1, 4)
        m = rnd.randint(u, u + 2)
        rows = random_full_rank(rnd, m, u)
        basis = hnf(rows)
        # feeding the basis back yields the identical basis
        assert hnf(basis.basis).basis == basis.basis
        # unimodular row operations never change the canonical basis
        mutated = [list(r) for r in rows]
        for _ in range(6):
            i, j = rnd.randrange(m), rnd.randrange(m)
            if i != j:
                c = rnd.randint(-3, 3)
                mutated[i] = [a + c * b for a, b in zip(mutated[i], mutated[j])]
        if _bareiss_determinant([r[:u] for r in mutated[:u]]) != 0 or m > u:
            try:
                assert hnf(tuple(tuple(r) for r in mutated)).basis == basis.basis
            except RankDeficientError:
                pytest.fail("unimodular row operations cannot drop rank")


def test_hnf_known_small_cases():
    basis = hnf(((2, 0), (0, 2), (1, 1)))
    assert basis.basis == ((2, 0), (1, 1))
    assert basis.determinant == 2
    basis2 = hnf(((1, 0), (0, 1)))
    assert basis2.basis == ((1, 0), (0, 1))
    basis3 = hnf(((6,), (4,)))
    assert basis3.basis == ((2,),)


def test_hnf_rank_deficient_raises():
    with pytest.raises(RankDeficientError):
        hnf(((1, 2), (2, 4)))
    with pytest.raises(RankDeficientError):
        hnf(((0, 0), (0, 0)))
    with pytest.raises(RankDeficientError):
        hnf(((1, 2, 3), (4, 5, 6)))  # fewer rows than columns


def test_hnf_input_validation():
    with pytest.raises(ValueError):
        hnf(())
    with pytest.raises(ValueError):
        hnf(((1, 2), (1,)))


def test_verify_hnf_rejects_perturbations():
    rnd = random.Random(73)
    rows = random_full_rank(rnd, 4, 3)
    basis = hnf(rows)
    assert verify_hnf(rows, basis)
    # perturbed basis entry
    b = [list(r) for r in basis.basis]
    b[1][0] += 1
    assert not verify_hnf(rows, HnfBasis(basis=tuple(tuple(r) for r in b)))
    # scaled basis spans a sublattice only
    b2 = [[2 * x for x in r] for r in basis.basis]
    assert not verify_hnf(rows, HnfBasis(basis=tuple(tuple(r) for r in b2)))
    # perturbed witness
    w = [list(r) for r in basis.witness]
    w[0][0] += 1
    assert not verify_hnf(rows, HnfBasis(basis=basis.basis, witness=tuple(tuple(r) for r in w)))
    # witness-free check still validates the basis itself
    assert verify_hnf(rows, HnfBasis(basis=basis.basis))


def test_verify_hnf_rejects_wrong_shape():
    rows = ((2, 0), (0, 2))
    basis = hnf(rows)
    assert not verify_hnf(((2, 0, 0), (0, 2, 0)), basis)
    assert not verify_hnf(rows, HnfBasis(basis=((2, 0),)))
    assert not verify_hnf(rows, HnfBasis(basis=((2, 1), (0, 2))))  # above-diagonal entry


def test_golden_reduced_pipeline_bases():
    from ppscert.stickelberger import FieldContext, build_relation_matrix, reduce_by_conjugation

    red31 = reduce_by_conjugation(build_relation_matrix(FieldContext(p=31, f=5)))
    b31 = hnf(red31)
    assert b31.basis == ((18, 0, 0), (8, 2, 0), (15, 1, 1))
    assert b31.diag == (18, 2, 1)
    assert b31.determinant == 36
    assert verify_hnf(red31, b31)
