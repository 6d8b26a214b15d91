"""
EAF Engine - Fast Constant Search
=================================

Derives multiply-shift forms that provably agree with an EAF on an interval:

    (alpha*r + beta)/delta == (alpha'*r + beta')/2^k    for all r in [0, N)

Round-up and round-down searches are O(delta); plain division and remainder by a
constant have O(1) closed forms. Residual certificates extend an agreement of
quotients to an agreement of remainders.

Search intermediates are checked against a signed 128-bit width.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from ..config import MAX_SHIFT, SEARCH_CAP, SEARCH_WIDTH_BITS
from ..errors import (
    CertificateRefusedError,
    DomainError,
    SearchNotFoundError,
    UnsupportedParametersError,
)
from .eaf_core import Eaf, check_width, euclidean_divmod, minimal_right_inverse, require_invertible

logger = logging.getLogger("EAF.FastSearch")


# =============================================================================
# Constants & Enums
# =============================================================================

class Rounding(Enum):
    UP = "up"         # alpha' = 2^k*alpha/delta + 1
    DOWN = "down"     # alpha' = 2^k*alpha/delta, remainder > 0
    EXACT = "exact"   # delta divides 2^k*alpha, epsilon = 0


# =============================================================================
# Data Classes
# =============================================================================

@dataclass(frozen=True)
class FastEaf:
    """(alpha_p*r + beta_p)/2^k, valid on [0, n_bound)."""
    alpha_p: int
    beta_p: int
    k: int
    n_bound: int
    epsilon: int
    rounding: Rounding

    def evaluate(self, r: int) -> int:
        return (self.alpha_p * r + self.beta_p) >> self.k

    def residual(self, r: int) -> int:
        return (self.alpha_p * r + self.beta_p) & ((1 << self.k) - 1)

    def as_eaf(self) -> Eaf:
        return Eaf(self.alpha_p, self.beta_p, 1 << self.k)

    def to_dict(self) -> dict:
        return {
            "alpha_p": self.alpha_p,
            "beta_p": self.beta_p,
            "k": self.k,
            "n_bound": self.n_bound,
            "epsilon": self.epsilon,
            "rounding": self.rounding.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> FastEaf:
        return cls(
            alpha_p=int(data["alpha_p"]),
            beta_p=int(data["beta_p"]),
            k=int(data["k"]),
            n_bound=int(data["n_bound"]),
            epsilon=int(data["epsilon"]),
            rounding=Rounding(data["rounding"]),
        )


@dataclass(frozen=True)
class DivConstants:
    """n/delta == alpha_p*n/2^k on [0, n_bound), with alpha_p*delta = 2^k + epsilon."""
    delta: int
    k: int
    alpha_p: int
    epsilon: int
    n_bound: int

    def divide(self, n: int) -> int:
        return (self.alpha_p * n) >> self.k

    def to_fast_eaf(self) -> FastEaf:
        return FastEaf(self.alpha_p, 0, self.k, self.n_bound, self.epsilon, Rounding.UP)

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "k": self.k,
            "alpha_p": self.alpha_p,
            "epsilon": self.epsilon,
            "n_bound": self.n_bound,
        }

    @classmethod
    def from_dict(cls, data: dict) -> DivConstants:
        return cls(**{name: int(data[name]) for name in ("delta", "k", "alpha_p", "epsilon", "n_bound")})


@dataclass(frozen=True)
class RemConstants:
    """n%delta == delta*(alpha_p*n % 2^k)/2^k on [0, m_bound)."""
    delta: int
    k: int
    alpha_p: int
    epsilon: int
    m_bound: int

    def remainder(self, n: int) -> int:
        low = (self.alpha_p * n) & ((1 << self.k) - 1)
        return (self.delta * low) >> self.k

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "k": self.k,
            "alpha_p": self.alpha_p,
            "epsilon": self.epsilon,
            "m_bound": self.m_bound,
        }

    @classmethod
    def from_dict(cls, data: dict) -> RemConstants:
        return cls(**{name: int(data[name]) for name in ("delta", "k", "alpha_p", "epsilon", "m_bound")})


@dataclass(frozen=True)
class ResidualCertificate:
    """Proof that residual(f, r)/alpha == residual'(r)/alpha' on [lo, hi)."""
    f: Eaf
    f_fast: FastEaf
    lo: int
    hi: int

    def residual(self, r: int) -> int:
        if not self.lo <= r < self.hi:
            raise DomainError(f"r={r} outside the certified interval [{self.lo}, {self.hi})")
        return self.f_fast.residual(r) // self.f_fast.alpha_p

    def to_dict(self) -> dict:
        return {
            "f": self.f.to_dict(),
            "f_fast": self.f_fast.to_dict(),
            "lo": self.lo,
            "hi": self.hi,
        }


# =============================================================================
# Helpers
# =============================================================================

def _wide(value: int, what: str) -> int:
    return check_width(value, SEARCH_WIDTH_BITS, what)


def _require_search_params(f: Eaf, k: int) -> int:
    """Validate delta > 0 and the shift; return 2^k*alpha."""
    if f.delta <= 0:
        raise DomainError(f"fast forms need delta > 0, got delta={f.delta}", data=f.to_dict())
    if not 0 <= k <= MAX_SHIFT:
        raise DomainError(f"k must lie in [0, {MAX_SHIFT}], got {k}")
    return _wide(f.alpha << k, "2^k*alpha")


def _exact(f: Eaf, r: int) -> int:
    return euclidean_divmod(_wide(f.alpha * r + f.beta, "alpha*r + beta"), f.delta).quotient


def _offsets(f: Eaf, alpha_p: int, k: int) -> list[int]:
    """alpha'*r - 2^k*f(r) for r in [0, delta)."""
    return [
        _wide(alpha_p * r - (_exact(f, r) << k), "alpha'*r - 2^k*f(r)")
        for r in range(f.delta)
    ]


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def classify_multiplier(f: Eaf, alpha_p: int, k: int) -> tuple[Rounding, int]:
    """Rounding direction and epsilon of a multiplier chosen for f at shift k."""
    scaled = _require_search_params(f, k)
    quotient, rem = euclidean_divmod(scaled, f.delta)
    if rem == 0 and alpha_p == quotient:
        return Rounding.EXACT, 0
    if alpha_p == quotient + 1:
        return Rounding.UP, f.delta * alpha_p - scaled
    if alpha_p == quotient and rem > 0:
        return Rounding.DOWN, rem
    raise DomainError(
        f"alpha'={alpha_p} is neither rounding of 2^{k}*{f.alpha}/{f.delta}",
        data={"alpha_p": alpha_p, "k": k, **f.to_dict()},
    )


def fast_eaf_from_constants(f: Eaf, alpha_p: int, beta_p: int, k: int, n_bound: int = 0) -> FastEaf:
    """Wrap externally supplied constants as a FastEaf for f."""
    rounding, epsilon = classify_multiplier(f, alpha_p, k)
    if n_bound < 0:
        raise DomainError(f"N must be non-negative, got {n_bound}")
    return FastEaf(alpha_p, beta_p, k, n_bound, epsilon, rounding)


# =============================================================================
# General EAF Searches
# =============================================================================

def fast_eaf_up(f: Eaf, k: int) -> FastEaf:
    """Round-up multiplier: alpha' = 2^k*alpha/delta + 1, O(delta) search for beta' and N."""
    scaled = _require_search_params(f, k)
    alpha_p = scaled // f.delta + 1
    epsilon = f.delta - scaled % f.delta
    power = 1 << k

    offsets = _offsets(f, alpha_p, k)
    beta_p = -min(offsets)

    n_bound = None
    for r, offset in enumerate(offsets):
        gap = power - (offset + beta_p)
        q = _ceil_div(gap, epsilon) if gap > 0 else 0
        m = f.delta * q + r
        if n_bound is None or m < n_bound:
            n_bound = m

    logger.debug(f"up   {f} k={k}: alpha'={alpha_p} beta'={beta_p} eps={epsilon} N={n_bound}")
    return FastEaf(alpha_p, beta_p, k, n_bound, epsilon, Rounding.UP)


def fast_eaf_down(f: Eaf, k: int) -> FastEaf:
    """Round-down multiplier: alpha' = 2^k*alpha/delta, requires 2^k*alpha % delta > 0."""
    scaled = _require_search_params(f, k)
    epsilon = scaled % f.delta
    if epsilon == 0:
        raise DomainError(
            f"2^{k}*{f.alpha} is a multiple of {f.delta}; use the exact shift form (fast_eaf_exact)",
            data={"k": k, **f.to_dict()},
        )
    alpha_p = scaled // f.delta
    power = 1 << k

    offsets = _offsets(f, alpha_p, k)
    beta_p = min(power - 1 - offset for offset in offsets)

    n_bound = None
    for r, offset in enumerate(offsets):
        h = offset + beta_p
        q = h // epsilon + 1 if h >= 0 else 0
        m = f.delta * q + r
        if n_bound is None or m < n_bound:
            n_bound = m

    logger.debug(f"down {f} k={k}: alpha'={alpha_p} beta'={beta_p} eps={epsilon} N={n_bound}")
    return FastEaf(alpha_p, beta_p, k, n_bound, epsilon, Rounding.DOWN)


def fast_eaf_exact(f: Eaf, k: int, cap: int = SEARCH_CAP) -> FastEaf:
    """Shift form for delta dividing 2^k*alpha; periodic in r, so valid up to `cap` or not at all."""
    scaled = _require_search_params(f, k)
    if scaled % f.delta:
        raise DomainError(f"{f.delta} does not divide 2^{k}*{f.alpha}", data={"k": k, **f.to_dict()})
    alpha_p = scaled // f.delta
    power = 1 << k

    offsets = _offsets(f, alpha_p, k)
    beta_p = -min(offsets)
    failing = [r for r, offset in enumerate(offsets) if offset + beta_p >= power]
    n_bound = failing[0] if failing else cap

    logger.debug(f"exact {f} k={k}: alpha'={alpha_p} beta'={beta_p} N={n_bound}")
    return FastEaf(alpha_p, beta_p, k, n_bound, 0, Rounding.EXACT)


_TIE_ORDER = {Rounding.EXACT: 2, Rounding.UP: 1, Rounding.DOWN: 0}


def best_fast_eaf(f: Eaf, k: int, heuristic: bool = False, cap: int = SEARCH_CAP) -> FastEaf:
    """
    Pick the form with the larger N (ties go to round-up).

    With `heuristic` the direction with the smaller epsilon is taken without
    running the other search.
    """
    scaled = _require_search_params(f, k)
    rem = scaled % f.delta

    if heuristic:
        if rem == 0:
            return fast_eaf_exact(f, k, cap)
        eps_up, eps_down = f.delta - rem, rem
        return fast_eaf_down(f, k) if eps_down < eps_up else fast_eaf_up(f, k)

    candidates = [fast_eaf_up(f, k)]
    candidates.append(fast_eaf_exact(f, k, cap) if rem == 0 else fast_eaf_down(f, k))
    best = max(candidates, key=lambda c: (c.n_bound, _TIE_ORDER[c.rounding]))
    logger.debug(f"best {f} k={k}: {best.rounding.value} N={best.n_bound}")
    return best


# =============================================================================
# Division and Remainder by a Constant
# =============================================================================

def _round_up_multiplier(delta: int, k: int) -> tuple[int, int]:
    if delta <= 0:
        raise DomainError(f"divisor must be positive, got {delta}")
    if not 0 <= k <= MAX_SHIFT:
        raise DomainError(f"k must lie in [0, {MAX_SHIFT}], got {k}")
    power = 1 << k
    return power // delta + 1, delta - power % delta


def _smallest_supported_k(delta: int, k: int) -> Optional[int]:
    for candidate in range(k + 1, MAX_SHIFT + 1):
        alpha_p, epsilon = _round_up_multiplier(delta, candidate)
        if epsilon <= alpha_p:
            return candidate
    return None


def _require_supported(delta: int, k: int, alpha_p: int, epsilon: int) -> None:
    if epsilon > alpha_p:
        suggested = _smallest_supported_k(delta, k)
        raise UnsupportedParametersError(
            f"epsilon={epsilon} exceeds alpha'={alpha_p} for delta={delta}, k={k}; "
            f"try k={suggested}",
            suggested_k=suggested,
        )


def fast_division(delta: int, k: int) -> DivConstants:
    """O(1) constants for n/delta == alpha'*n/2^k on [0, ceil(alpha'/eps)*delta - 1)."""
    alpha_p, epsilon = _round_up_multiplier(delta, k)
    _require_supported(delta, k, alpha_p, epsilon)
    n_bound = _ceil_div(alpha_p, epsilon) * delta - 1
    return DivConstants(delta, k, alpha_p, epsilon, n_bound)


def fast_remainder(delta: int, k: int) -> RemConstants:
    """Constants for n%delta == delta*(alpha'*n % 2^k)/2^k on [0, ceil(2^k/eps))."""
    alpha_p, epsilon = _round_up_multiplier(delta, k)
    _require_supported(delta, k, alpha_p, epsilon)
    return RemConstants(delta, k, alpha_p, epsilon, _ceil_div(1 << k, epsilon))


def remainder_for_bitwidth(delta: int, w: int, l_max: int) -> RemConstants:
    """Smallest l <= l_max such that the remainder form at k = w + l covers [0, 2^w)."""
    if w < 0 or delta <= 0:
        raise DomainError(f"need delta > 0 and w >= 0, got delta={delta}, w={w}")
    for l in range(max(l_max, -1) + 1):
        k = w + l
        if k > MAX_SHIFT:
            break
        if delta - (1 << k) % delta <= (1 << l):
            try:
                constants = fast_remainder(delta, k)
            except UnsupportedParametersError:
                continue
            logger.debug(f"remainder %{delta} on {w} bits: l={l}, k={k}, alpha'={constants.alpha_p}")
            return constants
    raise SearchNotFoundError(f"no l <= {l_max} gives a {w}-bit remainder form for {delta}")


def find_min_k(
    f: Eaf, required_n: int, k_max: int = MAX_SHIFT, cap: int = SEARCH_CAP
) -> tuple[int, Union[FastEaf, DivConstants]]:
    """Smallest k <= k_max whose best constants are valid on at least [0, required_n)."""
    if required_n <= 0:
        raise DomainError(f"required N must be positive, got {required_n}")
    if not 0 <= k_max <= MAX_SHIFT:
        raise DomainError(f"k_max must lie in [0, {MAX_SHIFT}], got {k_max}")

    plain_division = f.alpha == 1 and f.beta == 0 and f.delta > 0
    best_n, best_k = -1, None

    for k in range(k_max + 1):
        if plain_division and (1 << k) % f.delta == 0:
            candidate = fast_eaf_exact(f, k, cap)
        elif plain_division:
            try:
                candidate = fast_division(f.delta, k)
            except UnsupportedParametersError:
                continue
        else:
            candidate = best_fast_eaf(f, k, cap=cap)

        if candidate.n_bound > best_n:
            best_n, best_k = candidate.n_bound, k
        if candidate.n_bound >= required_n:
            logger.debug(f"find_min_k {f}: k={k} N={candidate.n_bound} >= {required_n}")
            return k, candidate

    raise SearchNotFoundError(
        f"no k <= {k_max} reaches N >= {required_n} for {f}; best N={best_n} at k={best_k}",
        best_n=best_n,
        best_k=best_k,
    )


# =============================================================================
# Residual Certificates
# =============================================================================

def certify_residual(
    f: Eaf, f_fast: FastEaf, a: int, b: int, samples: int = 1000, seed: int = 0
) -> ResidualCertificate:
    """
    Check the hypotheses that carry f == f' on [a, b) over to remainders:
    a = f^(f(a)) and f'(a - 1) < f'(a). Agreement of f and f' itself is
    re-checked at the endpoints and at `samples` random points.
    """
    require_invertible(f)
    if b <= a:
        raise DomainError(f"empty interval [{a}, {b})")

    inverse = minimal_right_inverse(f)
    if inverse(f(a)) != a:
        raise CertificateRefusedError("a = f^(f(a))", f"f^(f({a})) = {inverse(f(a))}")
    if not f_fast.evaluate(a - 1) < f_fast.evaluate(a):
        raise CertificateRefusedError(
            "f'(a-1) < f'(a)",
            f"f'({a - 1}) = {f_fast.evaluate(a - 1)}, f'({a}) = {f_fast.evaluate(a)}",
        )

    rng = random.Random(seed)
    points = {a, a + 1, b - 2, b - 1} | {rng.randrange(a, b) for _ in range(samples)}
    for r in sorted(p for p in points if a <= p < b):
        if f(r) != f_fast.evaluate(r):
            raise CertificateRefusedError(
                "f == f' on [a, b)", f"f({r}) = {f(r)} but f'({r}) = {f_fast.evaluate(r)}"
            )

    logger.debug(f"certified residual of {f} on [{a}, {b})")
    return ResidualCertificate(f, f_fast, a, b)
