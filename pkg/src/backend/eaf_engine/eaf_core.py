"""
EAF Engine - Euclidean Affine Functions
=======================================

Exact integer arithmetic under the Euclidean convention (0 <= r < |d|, also for
negative dividends) and the algebra of Euclidean affine functions

    f(r) = (alpha*r + beta) / delta

with their residual functions and minimal right inverses.

Core arithmetic is checked against a signed 64-bit working width; leaving it
raises `ArithmeticOverflowError` instead of wrapping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from ..config import CORE_WIDTH_BITS
from ..errors import ArithmeticOverflowError, DomainError


# =============================================================================
# Euclidean Division
# =============================================================================

class DivModResult(NamedTuple):
    quotient: int
    remainder: int


def check_width(value: int, bits: int = CORE_WIDTH_BITS, what: str = "intermediate") -> int:
    """Return `value` unchanged if it fits a signed `bits`-bit integer."""
    bound = 1 << (bits - 1)
    if not -bound <= value < bound:
        raise ArithmeticOverflowError(value, bits, what)
    return value


def euclidean_divmod(n: int, d: int) -> DivModResult:
    """Quotient and remainder with n = q*d + r and 0 <= r < |d|."""
    if d == 0:
        raise DomainError("division by zero", data={"n": n, "d": d})
    q, r = divmod(n, d)
    # Python floors toward -inf; for d < 0 that leaves r in (d, 0].
    if r < 0:
        q += 1
        r -= d
    return DivModResult(q, r)


def ediv(n: int, d: int) -> int:
    return euclidean_divmod(n, d).quotient


def emod(n: int, d: int) -> int:
    return euclidean_divmod(n, d).remainder


# =============================================================================
# Euclidean Affine Functions
# =============================================================================

@dataclass(frozen=True)
class Eaf:
    """f(r) = (alpha*r + beta)/delta. Only delta != 0 is enforced here."""

    alpha: int
    beta: int
    delta: int

    def __post_init__(self):
        if self.delta == 0:
            raise DomainError("an EAF needs delta != 0", data=self.to_dict())

    def __call__(self, r: int) -> int:
        return evaluate(self, r)

    def residual(self, r: int) -> int:
        return residual(self, r)

    def minimal_right_inverse(self) -> Eaf:
        return minimal_right_inverse(self)

    def numerator(self, r: int) -> int:
        product = check_width(self.alpha * r, what="alpha*r")
        return check_width(product + self.beta, what="alpha*r + beta")

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "delta": self.delta}

    @classmethod
    def from_dict(cls, data: dict) -> Eaf:
        return cls(int(data["alpha"]), int(data["beta"]), int(data["delta"]))

    def __str__(self) -> str:
        sign = "-" if self.beta < 0 else "+"
        return f"({self.alpha}*r {sign} {abs(self.beta)})/{self.delta}"


def evaluate(f: Eaf, r: int) -> int:
    return euclidean_divmod(f.numerator(r), f.delta).quotient


def residual(f: Eaf, r: int) -> int:
    return euclidean_divmod(f.numerator(r), f.delta).remainder


def require_invertible(f: Eaf) -> None:
    """Raise unless delta >= alpha > 0, the hypothesis of the inverse identities."""
    if f.alpha <= 0:
        raise DomainError(f"alpha > 0 required, got alpha={f.alpha}", data=f.to_dict())
    if f.delta < f.alpha:
        raise DomainError(
            f"delta >= alpha required, got delta={f.delta} < alpha={f.alpha}",
            data=f.to_dict(),
        )


def minimal_right_inverse(f: Eaf) -> Eaf:
    """f^(q) = (delta*q + alpha - beta - 1)/alpha, the smallest r with f(r) = q."""
    require_invertible(f)
    return Eaf(f.delta, f.alpha - f.beta - 1, f.alpha)


def lemma_quotient_identity(f: Eaf, r: int) -> bool:
    """alpha*(r/delta) == f(r) - f(r % delta)."""
    q, rem = euclidean_divmod(r, f.delta)
    return f.alpha * q == evaluate(f, r) - evaluate(f, rem)
