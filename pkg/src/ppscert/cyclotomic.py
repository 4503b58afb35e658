"""Exact arithmetic in Z[zeta_p] and perfect-sequence autocorrelation tests.

Elements are written on the power basis 1, z, ..., z**(p-2) of the p-th
cyclotomic field, with z**(p-1) rewritten as -(1 + z + ... + z**(p-2)).
Sequences take values among the p-th roots of unity, recorded by exponent;
an almost p-ary sequence additionally holds one zero entry at index 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ppscert.ntheory import is_prime

__all__ = [
    "P_ARY",
    "ALMOST_P_ARY",
    "CycInt",
    "PSequence",
    "conj",
    "autocorrelation",
    "in_phase_value",
    "is_perfect",
    "brute_force_search",
    "verify_norm_witness",
    "seq_to_text",
    "seq_from_text",
]

P_ARY = "p-ary"
ALMOST_P_ARY = "almost-p-ary"

_SEARCH_GUARD = 100_000_000


@dataclass(frozen=True)
class CycInt:
    """Element of Z[zeta_p] as a coefficient vector of length p-1."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.p < 3 or not is_prime(self.p):
            raise ValueError("p must be an odd prime")
        if len(self.coeffs) != self.p - 1:
            raise ValueError("coefficient vector must have length p-1")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    # -- constructors

    @classmethod
    def zero(cls, p: int) -> "CycInt":
        return cls(p, (0,) * (p - 1))

    @classmethod
    def from_int(cls, p: int, n: int) -> "CycInt":
        return cls(p, (n,) + (0,) * (p - 2))

    @classmethod
    def zeta_power(cls, p: int, k: int) -> "CycInt":
        counts = [0] * p
        counts[k % p] = 1
        return cls._from_exponent_counts(p, counts)

    @classmethod
    def _from_exponent_counts(cls, p: int, counts: list[int]) -> "CycInt":
        # counts[k] copies of z**k; fold z**(p-1) into the basis
        top = counts[p - 1]
        return cls(p, tuple(counts[k] - top for k in range(p - 1)))

    # -- ring structure

    def _lift(self) -> list[int]:
        return list(self.coeffs) + [0]

    def __add__(self, other: "CycInt") -> "CycInt":
        self._check(other)
        return CycInt(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CycInt") -> "CycInt":
        self._check(other)
        return CycInt(self.p, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CycInt":
        return CycInt(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other: "CycInt") -> "CycInt":
        self._check(other)
        p = self.p
        a, b = self._lift(), other._lift()
        counts = [0] * p
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        k = i + j
                        if k >= p:
                            k -= p
                        counts[k] += ai * bj
        return CycInt._from_exponent_counts(p, counts)

    def conj(self) -> "CycInt":
        """Image under zeta -> zeta**(-1)."""
        p = self.p
        counts = [0] * p
        for k, c in enumerate(self._lift()):
            counts[(p - k) % p] += c
        return CycInt._from_exponent_counts(p, counts)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _check(self, other: "CycInt") -> None:
        if self.p != other.p:
            raise ValueError("mixed cyclotomic orders")


def conj(z: CycInt) -> CycInt:
    return z.conj()


# ---------------------------------------------------------------------------
# sequences


@dataclass(frozen=True)
class PSequence:
    """Periodic sequence over p-th roots of unity, zero entry allowed at index 0."""

    p: int
    n: int
    kind: str
    exponents: tuple[int | None, ...]

    def __post_init__(self) -> None:
        if self.p < 3 or not is_prime(self.p):
            raise ValueError("p must be an odd prime")
        if self.kind not in (P_ARY, ALMOST_P_ARY):
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        if self.n < 2:
            raise ValueError("period must be at least 2")
        if len(self.exponents) != self.n:
            raise ValueError("exponent vector does not match the period")
        exps = []
        for i, e in enumerate(self.exponents):
            if e is None:
                if self.kind != ALMOST_P_ARY or i != 0:
                    raise ValueError("zero entry is only allowed at index 0 of an almost p-ary sequence")
                exps.append(None)
            else:
                exps.append(int(e) % self.p)
        if self.kind == ALMOST_P_ARY and exps[0] is not None:
            raise ValueError("an almost p-ary sequence has its zero entry at index 0")
        object.__setattr__(self, "exponents", tuple(exps))


def in_phase_value(s: PSequence) -> int:
    """The t = 0 correlation value: the number of nonzero entries."""
    return sum(1 for e in s.exponents if e is not None)


def autocorrelation(s: PSequence, t: int) -> CycInt:
    """Sum of a_k * conj(a_{k+t}) over one period, as an exact cyclotomic integer."""
    if not 1 <= t <= s.n - 1:
        raise ValueError("shift must lie in 1..n-1")
    counts = [0] * s.p
    exps = s.exponents
    for k in range(s.n):
        b1 = exps[k]
        b2 = exps[(k + t) % s.n]
        if b1 is None or b2 is None:
            continue
        counts[(b1 - b2) % s.p] += 1
    return CycInt._from_exponent_counts(s.p, counts)


def _perfect_exponents(p: int, n: int, exps: tuple[int | None, ...]) -> bool:
    # A count vector (c_0..c_{p-1}) sums to zero in Z[zeta_p] exactly when all
    # counts are equal, so each shift needs every difference class hit m//p times.
    m = sum(1 for e in exps if e is not None)
    if m % p:
        return False
    allowed = m // p
    for t in range(1, n):
        counts = [0] * p
        for k in range(n):
            b1 = exps[k]
            b2 = exps[k + t - n]
            if b1 is None or b2 is None:
                continue
            d = b1 - b2
            c = counts[d % p] + 1
            if c > allowed:
                return False
            counts[d % p] = c
    return True


def is_perfect(s: PSequence) -> bool:
    """True when every out-of-phase autocorrelation vanishes."""
    return _perfect_exponents(s.p, s.n, s.exponents)


def brute_force_search(p: int, n: int, kind: str = P_ARY) -> PSequence | None:
    """First perfect sequence in lexicographic exponent order, or None.

    Guarded: the scan refuses spaces with p**n beyond 10**8.
    """
    if p < 3 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    if kind not in (P_ARY, ALMOST_P_ARY):
        raise ValueError(f"unknown sequence kind {kind!r}")
    if n < 2:
        raise ValueError("period must be at least 2")
    if p**n > _SEARCH_GUARD:
        raise ValueError("search space exceeds the p**n <= 10**8 guard")
    prefix: tuple[int | None, ...] = (None,) if kind == ALMOST_P_ARY else ()
    free = n - len(prefix)
    for tail in itertools.product(range(p), repeat=free):
        exps = prefix + tail
        if _perfect_exponents(p, n, exps):
            return PSequence(p=p, n=n, kind=kind, exponents=exps)
    return None


def verify_norm_witness(alpha: CycInt, n: int) -> bool:
    """Check alpha * conj(alpha) == n exactly."""
    return (alpha * alpha.conj()) == CycInt.from_int(alpha.p, n)


# ---------------------------------------------------------------------------
# text format: "p n kind e0 e1 ... e(n-1)", zero entry written Z


def seq_to_text(s: PSequence) -> str:
    body = " ".join("Z" if e is None else str(e) for e in s.exponents)
    return f"{s.p} {s.n} {s.kind} {body}"


def seq_from_text(text: str) -> PSequence:
    parts = text.split()
    if len(parts) < 4:
        raise ValueError("sequence text needs p, n, kind and exponents")
    p, n, kind = int(parts[0]), int(parts[1]), parts[2]
    raw = parts[3:]
    if len(raw) != n:
        raise ValueError("exponent count does not match the declared period")
    exps = tuple(None if tok == "Z" else int(tok) for tok in raw)
    return PSequence(p=p, n=n, kind=kind, exponents=exps)
