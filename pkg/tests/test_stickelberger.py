from __future__ import annotations

import random

import pytest

from ppscert.ntheory import is_prime, smallest_primitive_root
from ppscert.stickelberger import (
    FieldContext,
    build_relation_matrix,
    format_matrix,
    k_coeff,
    m_coeff,
    parse_matrix,
    reduce_by_conjugation,
)


def test_field_context_defaults_and_validation():
    ctx = FieldContext(p=31, f=5)
    assert ctx.w == 3
    assert ctx.g == 6
    assert ctx.u == 3
    ctx151 = FieldContext(p=151, f=15)
    assert ctx151.w == 6
    assert ctx151.g == 10
    assert ctx151.u == 5
    with pytest.raises(ValueError):
        FieldContext(p=31, f=6)  # even order
    with pytest.raises(ValueError):
        FieldContext(p=31, f=7)  # does not divide p - 1
    with pytest.raises(ValueError):
        FieldContext(p=31, f=5, w=2)  # 2 is not a primitive root mod 31
    with pytest.raises(ValueError):
        FieldContext(p=33, f=5)


def test_k_coeff_row_sum_identity():
    # sum over a of floor(c a / p) = (c - 1)(p - 1) / 2
    rnd = random.Random(41)
    pairs = []
    while len(pairs) < 100:
        p = rnd.choice([p for p in range(3, 152) if is_prime(p)])
        c = rnd.randint(1, p - 1)
        pairs.append((p, c))
    for p, c in pairs:
        total = sum(k_coeff(c, a, p) for a in range(1, p))
        assert total == (c - 1) * (p - 1) // 2


def test_m_coeff_row_sum_identity():
    # the regrouped coefficients keep the same row sums
    rnd = random.Random(43)
    checked = 0
    while checked < 100:
        p = rnd.choice([p for p in range(7, 152) if is_prime(p)])
        odd_divs = [f for f in range(3, p, 2) if (p - 1) % f == 0 and ((p - 1) // f) % 2 == 0]
        if not odd_divs:
            continue
        f = rnd.choice(odd_divs)
        ctx = FieldContext(p=p, f=f)
        c = rnd.randint(1, p - 1)
        total = sum(m_coeff(c, s, ctx) for s in range(1, ctx.g + 1))
        # each m-row aggregates f of the k-columns, so the g column groups
        # partition all p - 1 of them
        assert total == (c - 1) * (p - 1) // 2
        checked += 1


def test_k_coeff_validates():
    with pytest.raises(ValueError):
        k_coeff(2, 0, 31)
    with pytest.raises(ValueError):
        k_coeff(2, 31, 31)
    with pytest.raises(ValueError):
        k_coeff(0, 1, 31)


def test_relation_matrix_shape_and_labels():
    ctx = FieldContext(p=31, f=5)
    m = build_relation_matrix(ctx)
    # p - 1 regrouped rows, one full-sum row, u conjugation rows
    assert len(m.rows) == 34
    assert all(len(r) == 6 for r in m.rows)
    assert m.labels[0] == "STICK(1)"
    assert m.labels[29] == "STICK(30)"
    assert m.labels[30] == "SUM"
    assert m.labels[31:] == ("CONJ(1)", "CONJ(2)", "CONJ(3)")
    assert m.rows[0] == (0, 0, 0, 0, 0, 0)
    assert m.rows[30] == (1, 1, 1, 1, 1, 1)
    assert m.rows[31] == (1, 0, 0, 1, 0, 0)
    assert m.rows[33] == (0, 0, 1, 0, 0, 1)


def test_conjugation_reduction_shape_and_content():
    ctx = FieldContext(p=31, f=5)
    m = build_relation_matrix(ctx)
    red = reduce_by_conjugation(m)
    assert len(red) == 31  # conjugation rows consumed
    assert all(len(r) == 3 for r in red)
    # reduction maps row to (row[k] - row[u + k])
    for label, row, short in zip(m.labels, m.rows, red):
        assert short == tuple(row[k] - row[k + 3] for k in range(3))
    # the SUM row becomes zero under conjugation folding
    assert red[30] == (0, 0, 0)


def test_m_coeff_matches_matrix_rows():
    ctx = FieldContext(p=139, f=23)
    m = build_relation_matrix(ctx)
    rnd = random.Random(47)
    for _ in range(30):
        c = rnd.randint(1, 138)
        s = rnd.randint(1, ctx.g)
        assert m.rows[c - 1][s - 1] == m_coeff(c, s, ctx)


def test_matrix_text_round_trip():
    rnd = random.Random(53)
    for _ in range(20):
        rows = tuple(
            tuple(rnd.randint(-99, 99) for _ in range(rnd.randint(1, 6))) for _ in range(rnd.randint(1, 8))
        )
        width = len(rows[0])
        rows = tuple(r[:width] + (0,) * (width - len(r)) for r in rows)
        text = format_matrix(rows)
        assert parse_matrix(text) == rows
    text = format_matrix(((1, 2), (3, 4)))
    assert text == "2 2\n1 2\n3 4\n"
    assert parse_matrix("# comment\n2 2\n1 2\n3 4\n") == ((1, 2), (3, 4))


def test_parse_matrix_validates():
    with pytest.raises(ValueError):
        parse_matrix("2 2\n1 2\n3\n")
    with pytest.raises(ValueError):
        parse_matrix("")
    with pytest.raises(ValueError):
        parse_matrix("1 2\n1 2\n3 4\n")


def test_primitive_root_variation_keeps_column_multiset():
    # different primitive roots permute the matrix columns within each row
    # group; the sorted row multiset of the Stickelberger block is invariant
    base = None
    p, f = 31, 5
    for w in range(2, p):
        try:
            ctx = FieldContext(p=p, f=f, w=w)
        except ValueError:
            continue
        m = build_relation_matrix(ctx)
        stick = tuple(sorted(tuple(sorted(r)) for r in m.rows[: p - 1]))
        if base is None:
            base = stick
        else:
            assert stick == base


def test_smallest_primitive_root_used_by_default():
    for p, f in ((31, 5), (127, 9), (139, 23), (151, 15)):
        assert FieldContext(p=p, f=f).w == smallest_primitive_root(p)
