"""Integral binary quadratic forms f(x, y) = f2 x^2 + f1 xy + f0 y^2."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

_COEFF_BOUND = 2**63
_WIDE_BOUND = 2**127

Matrix = Sequence[Sequence[int]]


class FormKind(enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    NEGATIVE_DEFINITE = "NegativeDefinite"
    INDEFINITE = "Indefinite"
    DEGENERATE_SQUARE_DISC = "DegenerateSquareDisc"


@dataclass(frozen=True)
class FormClassification:
    kind: FormKind
    irreducible: bool
    primitive: bool
    admissible: bool


@dataclass(frozen=True)
class QuadForm:
    f2: int
    f1: int
    f0: int

    def __post_init__(self) -> None:
        for c in (self.f2, self.f1, self.f0):
            if not isinstance(c, int):
                raise TypeError("coefficients must be integers")
            if abs(c) >= _COEFF_BOUND:
                raise OverflowError("coefficient exceeds 63 bits")
        if self.f2 == self.f1 == self.f0 == 0:
            raise ValueError("the zero form is not allowed")
        if abs(self.f1 * self.f1 - 4 * self.f2 * self.f0) >= _WIDE_BOUND:
            raise OverflowError("discriminant exceeds 127 bits")

    @classmethod
    def parse(cls, text: str) -> QuadForm:
        """Parse the literal "f2,f1,f0"."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected 'f2,f1,f0', got {text!r}")
        return cls(*(int(p) for p in parts))

    def __str__(self) -> str:
        return f"{self.f2},{self.f1},{self.f0}"

    def __call__(self, x: int, y: int) -> int:
        return evaluate(self, x, y)

    @property
    def disc(self) -> int:
        return discriminant(self)

    @property
    def coeffs(self) -> tuple[int, int, int]:
        return (self.f2, self.f1, self.f0)


def discriminant(F: QuadForm) -> int:
    return F.f1 * F.f1 - 4 * F.f2 * F.f0


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def classify(F: QuadForm) -> FormClassification:
    d = discriminant(F)
    irreducible = not _is_square(d)
    primitive = math.gcd(F.f2, F.f1, F.f0) == 1
    if not irreducible:
        kind = FormKind.DEGENERATE_SQUARE_DISC
    elif d > 0:
        kind = FormKind.INDEFINITE
    else:
        kind = FormKind.POSITIVE_DEFINITE if F.f2 > 0 else FormKind.NEGATIVE_DEFINITE
    # f(x,1) = x(x+1) mod 2 exactly when f2, f1 odd and f0 even
    mod2_ok = not (F.f2 % 2 == 1 and F.f1 % 2 == 1 and F.f0 % 2 == 0)
    return FormClassification(kind, irreducible, primitive, irreducible and primitive and mod2_ok)


def require_admissible(F: QuadForm) -> None:
    if not classify(F).admissible:
        raise ValueError(f"form ({F}) is not admissible")


def evaluate(F: QuadForm, x: int, y: int) -> int:
    if abs(x) > 2**62 or abs(y) > 2**62:
        raise OverflowError("argument exceeds 62 bits")
    v = F.f2 * x * x + F.f1 * x * y + F.f0 * y * y
    if abs(v) >= _WIDE_BOUND:
        raise OverflowError("value exceeds 127 bits")
    return v


def transform(F: QuadForm, M: Matrix, action: str = "column") -> QuadForm:
    """Substitute a linear change of variables into F.

    With ``action="column"`` the result is g(x, y) = F(M (x, y)^T); with
    ``action="row"`` it is g(x, y) = F((x, y) M). The two differ by transposing M.
    """
    (a, b), (c, d) = M
    if a * d - b * c == 0:
        raise ValueError("singular matrix")
    if action == "row":
        b, c = c, b
    elif action != "column":
        raise ValueError("action must be 'column' or 'row'")
    # F(a x + b y, c x + d y)
    f2, f1, f0 = F.coeffs
    return QuadForm(
        f2 * a * a + f1 * a * c + f0 * c * c,
        2 * f2 * a * b + f1 * (a * d + b * c) + 2 * f0 * c * d,
        f2 * b * b + f1 * b * d + f0 * d * d,
    )


def rho(F: QuadForm, d: int) -> int:
    """Number of x mod d with f(x, 1) = 0 mod d."""
    from .modroots import roots_mod

    if d < 1:
        raise ValueError("d must be positive")
    require_admissible(F)
    return len(roots_mod(F, d).roots)
