"""Modular, polynomial and class-number primitives over exact integers.

Everything in this module is exact except relative_class_number_minus, which
evaluates an analytic product in guarded complex precision and refuses to
return anything the second, higher-precision pass does not confirm.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass

import mpmath

__all__ = [
    "PrecisionError",
    "PrimePower",
    "IntPolynomial",
    "is_prime",
    "factorint",
    "prime_power_decomposition",
    "divisors",
    "euler_phi",
    "multiplicative_order",
    "smallest_primitive_root",
    "legendre_symbol",
    "is_self_conjugate",
    "poly_from_text",
    "poly_to_text",
    "poly_has_root_mod",
    "poly_discriminant",
    "relative_class_number_minus",
]

# Below this bound the fixed witness set is a proven deterministic test.
_MR_DETERMINISTIC_BOUND = 1 << 64
_MR_FIXED_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_PROBABLE_ROUNDS = 66  # error probability < 4**-66 < 2**-128
_TRIAL_LIMIT = 10_000
_RHO_INPUT_BOUND = 1 << 128
_ROOT_SCAN_BOUND = 1 << 16


class PrecisionError(ArithmeticError):
    """Guarded-precision evaluation failed to pin down an integer."""


# ---------------------------------------------------------------------------
# primality and factoring


def _miller_rabin_witness(n: int, a: int) -> bool:
    """Return True if a witnesses the compositeness of odd n > 2."""
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality test, deterministic below 2**64, 66-round probabilistic above."""
    if n < 0:
        raise ValueError("primality queries take non-negative input")
    if n < 2:
        return False
    for p in _MR_FIXED_WITNESSES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < _MR_DETERMINISTIC_BOUND:
        witnesses = _MR_FIXED_WITNESSES
    else:
        rnd = random.Random(n)
        witnesses = tuple(rnd.randrange(2, n - 1) for _ in range(_MR_PROBABLE_ROUNDS))
    return not any(_miller_rabin_witness(n, a) for a in witnesses)


def _pollard_rho(n: int) -> int:
    """One nontrivial factor of composite n, Brent's cycle variant."""
    if n % 2 == 0:
        return 2
    rnd = random.Random(n)
    while True:
        y = rnd.randrange(1, n)
        c = rnd.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorint(n: int) -> dict[int, int]:
    """Factor n >= 1 into {prime: exponent}; composite cofactors above 2**128 are refused."""
    if n < 1:
        raise ValueError("factorint takes positive input")
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 11
    while d <= _TRIAL_LIMIT and d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        if m > _RHO_INPUT_BOUND:
            raise ValueError("refusing to factor composite beyond 2**128")
        g = _pollard_rho(m)
        stack.append(g)
        stack.append(m // g)
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class PrimePower:
    """A prime together with a positive exponent."""

    p: int
    e: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.e < 1:
            raise ValueError("exponent must be positive")

    @property
    def value(self) -> int:
        return self.p**self.e


def prime_power_decomposition(n: int) -> list[PrimePower]:
    """n >= 1 as a list of PrimePower factors, primes ascending."""
    return [PrimePower(p, e) for p, e in factorint(n).items()]


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    out = [1]
    for p, e in factorint(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def euler_phi(n: int) -> int:
    out = n
    for p in factorint(n):
        out = out // p * (p - 1)
    return out


# ---------------------------------------------------------------------------
# multiplicative structure mod p


def multiplicative_order(q: int, p: int) -> int:
    """Order of q in the unit group mod the odd prime p."""
    if p < 3 or not is_prime(p):
        raise ValueError("modulus must be an odd prime")
    if math.gcd(q, p) != 1:
        raise ValueError("order undefined: arguments are not coprime")
    f = p - 1
    for r in factorint(p - 1):
        while f % r == 0 and pow(q, f // r, p) == 1:
            f //= r
    return f


def smallest_primitive_root(p: int) -> int:
    """Least w >= 2 generating the unit group mod the odd prime p."""
    if p < 3 or not is_prime(p):
        raise ValueError("modulus must be an odd prime")
    phi = p - 1
    prime_parts = tuple(factorint(phi))
    for w in range(2, p):
        if all(pow(w, phi // r, p) != 1 for r in prime_parts):
            return w
    raise ArithmeticError("unreachable: every odd prime has a primitive root")


def legendre_symbol(a: int, p: int) -> int:
    """Quadratic residue symbol (a|p) in {-1, 0, 1} for odd prime p."""
    if p < 3 or not is_prime(p):
        raise ValueError("modulus must be an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    if r == 1:
        return 1
    if r == p - 1:
        return -1
    raise ArithmeticError("modulus is not prime")


def is_self_conjugate(p: int, m: int) -> bool:
    """True when some power of the prime p is -1 modulo the p-free part of m."""
    if not is_prime(p):
        raise ValueError("first argument must be prime")
    if m < 1:
        raise ValueError("second argument must be positive")
    mprime = m
    while mprime % p == 0:
        mprime //= p
    if mprime <= 2:
        return True
    cur = p % mprime
    for _ in range(mprime):
        if cur == mprime - 1:
            return True
        cur = cur * p % mprime
    return False


# ---------------------------------------------------------------------------
# integer polynomials


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial; coefficients run from degree 0 upward."""

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(int(c) for c in self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading_coefficient(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def evaluate(self, x: int) -> int:
        out = 0
        for c in reversed(self.coefficients):
            out = out * x + c
        return out

    __call__ = evaluate

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coefficients) if i > 0))


def poly_to_text(f: IntPolynomial) -> str:
    """One line, decimal coefficients low degree first, space separated."""
    if f.is_zero:
        return "0"
    return " ".join(str(c) for c in f.coefficients)


def poly_from_text(text: str) -> IntPolynomial:
    parts = text.split()
    if not parts:
        raise ValueError("empty polynomial text")
    return IntPolynomial(tuple(int(tok) for tok in parts))


def _strip_mod(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _polymod_rem(a: list[int], b: list[int], q: int) -> list[int]:
    """Remainder of a by b over GF(q); b monic or invertible-lead, both stripped."""
    a = a[:]
    inv_lead = pow(b[-1], q - 2, q)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % q
        shift = len(a) - len(b)
        if coef:
            for i, bc in enumerate(b):
                a[shift + i] = (a[shift + i] - coef * bc) % q
        a.pop()
        _strip_mod(a)
        if not a:
            break
    return a


def _polymod_mul(a: list[int], b: list[int], mod: list[int], q: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ac in enumerate(a):
        if ac:
            for j, bc in enumerate(b):
                out[i + j] = (out[i + j] + ac * bc) % q
    _strip_mod(out)
    return _polymod_rem(out, mod, q) if len(out) >= len(mod) else out


def _poly_gcd_mod(a: list[int], b: list[int], q: int) -> list[int]:
    while b:
        a, b = b, _polymod_rem(a, b, q)
    return a


def poly_has_root_mod(f: IntPolynomial, q: int, method: str = "auto") -> bool:
    """Decide whether f has a root in GF(q), q prime.

    Small moduli are scanned directly; large ones go through
    gcd(f, x**q - x), whose degree counts the distinct roots.
    """
    if not is_prime(q):
        raise ValueError("modulus must be prime")
    red = _strip_mod([c % q for c in f.coefficients])
    if not red:
        raise ValueError("polynomial vanishes identically mod q")
    if len(red) == 1:
        return False
    if method == "auto":
        method = "eval" if q < _ROOT_SCAN_BOUND else "gcd"
    if method == "eval":
        for x in range(q):
            acc = 0
            for c in reversed(red):
                acc = (acc * x + c) % q
            if acc == 0:
                return True
        return False
    if method != "gcd":
        raise ValueError(f"unknown method {method!r}")
    inv_lead = pow(red[-1], q - 2, q)
    fhat = [c * inv_lead % q for c in red]
    # x**q mod fhat by square and multiply on the bits of q
    result = [1]
    base = [0, 1] if len(fhat) > 2 else _polymod_rem([0, 1], fhat, q)
    e = q
    while e:
        if e & 1:
            result = _polymod_mul(result, base, fhat, q)
        e >>= 1
        if e:
            base = _polymod_mul(base, base, fhat, q)
    # subtract x
    rem = result[:]
    while len(rem) < 2:
        rem.append(0)
    rem[1] = (rem[1] - 1) % q
    _strip_mod(rem)
    if not rem:
        return True  # f divides x**q - x, so it splits into distinct linear factors
    g = _poly_gcd_mod(fhat, rem, q)
    return len(g) >= 2


def _bareiss_determinant(mat: list[list[int]]) -> int:
    """Exact determinant by fraction-free elimination."""
    n = len(mat)
    if n == 0:
        return 1
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (pivot * m[i][j] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    if f.is_zero or g.is_zero:
        return 0
    m, n = f.degree, g.degree
    if m == 0:
        return f.coefficients[0] ** n
    if n == 0:
        return g.coefficients[0] ** m
    size = m + n
    fc = list(reversed(f.coefficients))
    gc = list(reversed(g.coefficients))
    rows = []
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    return _bareiss_determinant(rows)


def poly_discriminant(f: IntPolynomial) -> int:
    """Discriminant of f, exact, via the resultant with the derivative."""
    d = f.degree
    if d < 1:
        raise ValueError("discriminant needs degree at least 1")
    res = _resultant(f, f.derivative())
    quo, rem = divmod(res, f.leading_coefficient)
    if rem:
        raise ArithmeticError("resultant not divisible by leading coefficient")
    return -quo if (d * (d - 1) // 2) % 2 else quo


# ---------------------------------------------------------------------------
# relative class number


def _hminus_at_precision(p: int, ind: list[int], bits: int) -> int:
    n = p - 1
    with mpmath.workprec(bits):
        zeta = [mpmath.expjpi(mpmath.mpf(2 * k) / n) for k in range(n)]
        prod = mpmath.mpc(1)
        for j in range(1, n, 2):
            s = mpmath.mpc(0)
            for a in range(1, p):
                s += a * zeta[j * ind[a] % n]
            prod *= -s / (2 * p)
        val = 2 * p * prod
        nearest = int(mpmath.nint(val.real))
        if abs(val.imag) > 0.25 or abs(val.real - nearest) > 0.25 or nearest < 1:
            raise PrecisionError(f"class number product did not round cleanly at {bits} bits")
        return nearest


@functools.cache
def relative_class_number_minus(p: int) -> int:
    """Relative class number of the p-th cyclotomic field, p an odd prime <= 200.

    Computed as 2p times the product over odd characters of minus half the
    first generalized Bernoulli number, evaluated at working precision
    max(128, 4p) bits and confirmed at twice that precision.
    """
    if p > 200:
        raise ValueError("implementation envelope is p <= 200")
    if p < 3 or not is_prime(p):
        raise ValueError("argument must be an odd prime")
    w = smallest_primitive_root(p)
    ind = [0] * p
    acc = 1
    for k in range(p - 1):
        ind[acc] = k
        acc = acc * w % p
    bits = max(128, 4 * p)
    first = _hminus_at_precision(p, ind, bits)
    second = _hminus_at_precision(p, ind, 2 * bits)
    if first != second:
        raise PrecisionError("doubled-precision evaluation disagrees")
    return first
