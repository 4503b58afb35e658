"""Stickelberger relation matrices for subfields of the p-th cyclotomic field.

For an odd prime p, an odd order f dividing p-1 and a primitive root w mod p,
let E be the degree g = (p-1)/f subfield fixed by the index-g subgroup of
Galois. The classes x_1..x_g of the primes above a completely split rational
prime satisfy one integer relation per multiplier c in 1..p-1, obtained by
pushing the annihilator (c - sigma_c) * theta of the class group down to E:

    sum_s m(c, s) * x_s = 0,   m(c, s) = sum_t floor(c * w**(-t*g - s + 1) mod p / p)

with the exponent read mod p-1. Two more families of relations always hold:
the classes sum to zero, and complex conjugation pairs x_k with x_{u+k},
u = g/2, giving x_k + x_{u+k} = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from ppscert.ntheory import is_prime, multiplicative_order, smallest_primitive_root

__all__ = [
    "FieldContext",
    "StickelbergerMatrix",
    "k_coeff",
    "m_coeff",
    "build_relation_matrix",
    "reduce_by_conjugation",
    "format_matrix",
    "parse_matrix",
]


@dataclass(frozen=True)
class FieldContext:
    """Degree data (p, f, w) for the fixed field of the order-f subgroup."""

    p: int
    f: int
    w: int | None = None

    def __post_init__(self) -> None:
        if self.p < 3 or not is_prime(self.p):
            raise ValueError("p must be an odd prime")
        if self.f < 1 or self.f % 2 == 0:
            raise ValueError("f must be odd and positive")
        if (self.p - 1) % self.f:
            raise ValueError("f must divide p - 1")
        if ((self.p - 1) // self.f) % 2:
            raise ValueError("the residue degree leaves an odd-index subgroup; g must be even")
        if self.w is None:
            object.__setattr__(self, "w", smallest_primitive_root(self.p))
        elif multiplicative_order(self.w, self.p) != self.p - 1:
            raise ValueError(f"{self.w} is not a primitive root mod {self.p}")

    @property
    def g(self) -> int:
        return (self.p - 1) // self.f

    @property
    def u(self) -> int:
        return self.g // 2


@dataclass(frozen=True)
class StickelbergerMatrix:
    """Labeled relation rows on the classes x_1..x_g."""

    ctx: FieldContext
    rows: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]


def k_coeff(c: int, a: int, p: int) -> int:
    """floor(c*a/p) for 1 <= a <= p-1; the annihilator coefficient at sigma_a**-1."""
    if not 1 <= a <= p - 1:
        raise ValueError("a must lie in 1..p-1")
    if c < 1:
        raise ValueError("c must be positive")
    return c * a // p


def _power_table(ctx: FieldContext) -> list[int]:
    table = [1] * (ctx.p - 1)
    for i in range(1, ctx.p - 1):
        table[i] = table[i - 1] * ctx.w % ctx.p
    return table


def m_coeff(c: int, s: int, ctx: FieldContext) -> int:
    """Relation coefficient of x_s in the pushed-down annihilator for multiplier c."""
    if not 1 <= s <= ctx.g:
        raise ValueError("column index must lie in 1..g")
    table = _power_table(ctx)
    n = ctx.p - 1
    return sum(k_coeff(c, table[(-t * ctx.g - s + 1) % n], ctx.p) for t in range(ctx.f))


def build_relation_matrix(ctx: FieldContext) -> StickelbergerMatrix:
    """All relation rows: one per multiplier c, the full-sum row, the conjugation rows.

    Shape is (p + u) x g.  The c = 1 row is identically zero and is kept so row
    indices line up with multipliers.
    """
    p, f, g, u = ctx.p, ctx.f, ctx.g, ctx.u
    table = _power_table(ctx)
    n = p - 1
    rows: list[tuple[int, ...]] = []
    labels: list[str] = []
    for c in range(1, p):
        row = []
        for s in range(1, g + 1):
            acc = 0
            for t in range(f):
                a = table[(-t * g - s + 1) % n]
                acc += c * a // p
            row.append(acc)
        rows.append(tuple(row))
        labels.append(f"STICK({c})")
    rows.append((1,) * g)
    labels.append("SUM")
    for k in range(1, u + 1):
        row = [0] * g
        row[k - 1] = 1
        row[u + k - 1] = 1
        rows.append(tuple(row))
        labels.append(f"CONJ({k})")
    return StickelbergerMatrix(ctx=ctx, rows=tuple(rows), labels=tuple(labels))


def reduce_by_conjugation(matrix: StickelbergerMatrix) -> tuple[tuple[int, ...], ...]:
    """Substitute x_{u+k} = -x_k, keeping the p non-conjugation rows on x_1..x_u."""
    u = matrix.ctx.u
    out = []
    for row, label in zip(matrix.rows, matrix.labels):
        if label.startswith("CONJ"):
            continue
        out.append(tuple(row[k] - row[u + k] for k in range(u)))
    return tuple(out)


# ---------------------------------------------------------------------------
# text format shared by the lattice tooling and the CLI


def format_matrix(rows) -> str:
    """Canonical text: a "rows cols" header line, then space-separated rows."""
    rows = [tuple(int(x) for x in r) for r in rows]
    if not rows:
        raise ValueError("matrix must have at least one row")
    cols = len(rows[0])
    if any(len(r) != cols for r in rows):
        raise ValueError("ragged matrix")
    lines = [f"{len(rows)} {cols}"]
    lines.extend(" ".join(str(x) for x in r) for r in rows)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> tuple[tuple[int, ...], ...]:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty matrix text")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError("matrix header must be 'rows cols'")
    nrows, ncols = int(header[0]), int(header[1])
    if len(lines) - 1 != nrows:
        raise ValueError("row count does not match header")
    rows = []
    for ln in lines[1:]:
        row = tuple(int(tok) for tok in ln.split())
        if len(row) != ncols:
            raise ValueError("column count does not match header")
        rows.append(row)
    return tuple(rows)
