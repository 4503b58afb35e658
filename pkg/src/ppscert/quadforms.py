"""Reduced binary quadratic forms and class numbers of imaginary quadratic orders."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["QuadForm", "reduced_forms", "class_number"]


@dataclass(frozen=True, order=True)
class QuadForm:
    """Form a*x**2 + b*x*y + c*y**2."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_reduced(self) -> bool:
        if not (abs(self.b) <= self.a <= self.c):
            return False
        if (abs(self.b) == self.a or self.a == self.c) and self.b < 0:
            return False
        return True


def reduced_forms(d: int) -> list[QuadForm]:
    """All reduced positive definite forms of discriminant d < 0, sorted by (a, b, c)."""
    if d >= 0:
        raise ValueError("discriminant must be negative")
    if d % 4 not in (0, 1):
        raise ValueError("discriminant must be 0 or 1 mod 4")
    forms = []
    a_max = math.isqrt(-d // 3)
    for a in range(1, a_max + 1):
        for b in range(-a, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            form = QuadForm(a, b, c)
            if form.is_reduced:
                forms.append(form)
    return sorted(forms)


def class_number(d: int) -> int:
    """Class number of discriminant d < 0: the count of reduced forms."""
    return len(reduced_forms(d))
