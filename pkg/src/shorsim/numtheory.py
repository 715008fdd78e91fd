"""Classical number theory for order finding and factor extraction.

All arithmetic is exact Python integer arithmetic; ``order`` is the oracle the
compiler relies on for redundancy removal and Fourier-transform elision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PreconditionError


def order(base: int, modulus: int) -> int:
    """Minimal r > 0 with base**r = 1 (mod modulus), by orbit iteration."""
    _check_coprime(base, modulus)
    r = 1
    value = base % modulus
    while value != 1:
        value = (value * base) % modulus
        r += 1
    return r


@dataclass(frozen=True)
class OrderProfile:
    """Order data for a co-prime pair: r, its log2 when r is a power of two,
    and the multiplicative orbit C**a mod N for a in [0, r)."""

    base: int
    modulus: int
    r: int
    log2_r: int | None
    orbit: tuple[int, ...]

    @classmethod
    def compute(cls, base: int, modulus: int) -> "OrderProfile":
        r = order(base, modulus)
        orbit = tuple(pow(base, a, modulus) for a in range(r))
        log2_r = r.bit_length() - 1 if r & (r - 1) == 0 else None
        return cls(base, modulus, r, log2_r, orbit)

    @property
    def power_of_two(self) -> bool:
        return self.log2_r is not None


def factors_from_order(base: int, r: int, modulus: int):
    """Factor pair from gcd(base**(r/2) +- 1, modulus), or None when trivial.

    Trivial cases: odd r, or both gcds in {1, modulus}.
    """
    if r % 2 == 1:
        return None
    half = pow(base, r // 2, modulus)
    for candidate in (half - 1, half + 1):
        g = math.gcd(candidate, modulus)
        if g not in (1, modulus):
            return (g, modulus // g) if g <= modulus // g else (modulus // g, g)
    return None


def phase_to_order(outcome: int, n_bits: int, modulus: int) -> int | None:
    """Candidate order from the measured phase outcome/2**n_bits.

    Returns the denominator of the last continued-fraction convergent whose
    denominator does not exceed the modulus (None for phase 0, which carries
    no order information).
    """
    if outcome == 0:
        return None
    p_prev2, p_prev = 0, 1
    q_prev2, q_prev = 1, 0
    a, b = outcome, 2**n_bits
    best = None
    while b:
        quot = a // b
        p = quot * p_prev + p_prev2
        q = quot * q_prev + q_prev2
        if q > modulus:
            break
        best = q
        p_prev2, p_prev, q_prev2, q_prev = p_prev, p, q_prev, q
        a, b = b, a - quot * b
    return best


def coprimes(modulus: int) -> tuple[int, ...]:
    return tuple(c for c in range(2, modulus) if math.gcd(c, modulus) == 1)


def _check_coprime(base: int, modulus: int):
    if not (1 < base < modulus):
        raise PreconditionError(f"need 1 < C < N, got C={base} N={modulus}")
    if math.gcd(base, modulus) != 1:
        raise PreconditionError(f"C={base} and N={modulus} are not co-prime")
