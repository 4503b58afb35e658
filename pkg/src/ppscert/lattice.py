"""Canonical triangular bases of integer row lattices, with transform witnesses.

The normal form used throughout: rows are relations, the basis B is lower
triangular with positive diagonal, and in every column the entries below the
pivot are reduced into [0, pivot). That form is the unique such basis of the
row lattice, so equal lattices give bit-identical bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["RankDeficientError", "HnfBasis", "hnf", "verify_hnf"]

_DET_CHECK_PRIME = (1 << 61) - 1


class RankDeficientError(ValueError):
    """The rows do not span a full-rank sublattice."""


@dataclass(frozen=True)
class HnfBasis:
    """Canonical basis plus the unimodular row transform that produced it."""

    basis: tuple[tuple[int, ...], ...]
    witness: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def diag(self) -> tuple[int, ...]:
        return tuple(self.basis[i][i] for i in range(len(self.basis)))

    @property
    def determinant(self) -> int:
        out = 1
        for d in self.diag:
            out *= d
        return out


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = a*x + b*y and g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf(rows) -> HnfBasis:
    """Canonical lower-triangular basis of the lattice spanned by the rows.

    Raises RankDeficientError unless the rows span all of Q**u. The returned
    witness U is unimodular by construction and satisfies U * rows = [B; 0].
    """
    work = [list(int(x) for x in r) for r in rows]
    if not work:
        raise ValueError("matrix must have at least one row")
    m = len(work)
    u = len(work[0])
    if u == 0 or any(len(r) != u for r in work):
        raise ValueError("matrix must be rectangular with at least one column")
    trans = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    active = list(range(m))
    pivot_of_col: list[int] = [-1] * u

    for j in range(u - 1, -1, -1):
        nonzero = [i for i in active if work[i][j] != 0]
        if not nonzero:
            raise RankDeficientError(f"no pivot available for column {j + 1}")
        acc = nonzero[0]
        for r in nonzero[1:]:
            a, b = work[acc][j], work[r][j]
            g, x, y = _ext_gcd(a, b)
            aa, bb = a // g, b // g
            row_acc, row_r = work[acc], work[r]
            work[acc] = [x * p + y * q for p, q in zip(row_acc, row_r)]
            work[r] = [-bb * p + aa * q for p, q in zip(row_acc, row_r)]
            t_acc, t_r = trans[acc], trans[r]
            trans[acc] = [x * p + y * q for p, q in zip(t_acc, t_r)]
            trans[r] = [-bb * p + aa * q for p, q in zip(t_acc, t_r)]
        if work[acc][j] < 0:
            work[acc] = [-x for x in work[acc]]
            trans[acc] = [-x for x in trans[acc]]
        pivot_of_col[j] = acc
        active.remove(acc)

    for i in active:
        if any(work[i]):
            raise ArithmeticError("elimination left a nonzero non-pivot row")

    # below-pivot reduction, right to left so later steps stay reduced
    for i in range(u):
        row_i = pivot_of_col[i]
        for j in range(i - 1, -1, -1):
            d = work[pivot_of_col[j]][j]
            q = work[row_i][j] // d
            if q:
                row_j, t_j = work[pivot_of_col[j]], trans[pivot_of_col[j]]
                work[row_i] = [a - q * b for a, b in zip(work[row_i], row_j)]
                trans[row_i] = [a - q * b for a, b in zip(trans[row_i], t_j)]

    order = pivot_of_col + active
    basis = tuple(tuple(work[r]) for r in pivot_of_col)
    witness = tuple(tuple(trans[r]) for r in order)
    return HnfBasis(basis=basis, witness=witness)


def _structure_ok(basis: tuple[tuple[int, ...], ...]) -> bool:
    u = len(basis)
    if u == 0 or any(len(r) != u for r in basis):
        return False
    for i in range(u):
        if basis[i][i] <= 0:
            return False
        if any(basis[i][j] != 0 for j in range(i + 1, u)):
            return False
        if any(not 0 <= basis[i][j] < basis[j][j] for j in range(i)):
            return False
    return True


def _reduces_to_zero(vec, basis) -> bool:
    x = [int(v) for v in vec]
    u = len(basis)
    for i in range(u - 1, -1, -1):
        q, r = divmod(x[i], basis[i][i])
        if r:
            return False
        if q:
            x = [a - q * b for a, b in zip(x, basis[i])]
    return not any(x)


def _det_mod(rows, q: int) -> int:
    n = len(rows)
    m = [[x % q for x in r] for r in rows]
    det = 1
    for j in range(n):
        piv = next((i for i in range(j, n) if m[i][j]), None)
        if piv is None:
            return 0
        if piv != j:
            m[j], m[piv] = m[piv], m[j]
            det = -det % q
        inv = pow(m[j][j], q - 2, q)
        det = det * m[j][j] % q
        for i in range(j + 1, n):
            factor = m[i][j] * inv % q
            if factor:
                m[i] = [(a - factor * b) % q for a, b in zip(m[i], m[j])]
    return det % q


def verify_hnf(rows, basis: HnfBasis) -> bool:
    """Replay check: structure, mutual lattice containment, and the witness product.

    Containment is tested by exact back-substitution in both directions, so a
    basis for any other lattice, or any perturbed entry, is rejected. When a
    witness is present it must reproduce [B; 0] exactly; its determinant is
    spot-checked modulo a fixed prime (it is +-1 by construction).
    """
    try:
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        b = basis.basis
        if not _structure_ok(b):
            return False
        u = len(b)
        if any(len(r) != u for r in rows):
            return False
        # every input row lies in the lattice of B
        if not all(_reduces_to_zero(r, b) for r in rows):
            return False
        # every basis row lies in the input row lattice
        canonical = hnf(rows).basis
        if not all(_reduces_to_zero(r, canonical) for r in b):
            return False
        if basis.witness:
            m = len(rows)
            w = basis.witness
            if len(w) != m or any(len(r) != m for r in w):
                return False
            for i in range(m):
                prod = [sum(w[i][k] * rows[k][j] for k in range(m)) for j in range(u)]
                expected = list(b[i]) if i < u else [0] * u
                if prod != expected:
                    return False
            if _det_mod(w, _DET_CHECK_PRIME) not in (1, _DET_CHECK_PRIME - 1):
                return False
        return True
    except (ValueError, RankDeficientError, ArithmeticError):
        return False
