"""Exact modular arithmetic: Kronecker symbol, strengthened inverses,
the eta multiplier as an exact root of unity, and Farey dissection data.

Roots of unity are stored as reduced rational exponents t meaning e^(i*pi*t),
so every multiplier identity downstream can be tested exactly instead of in
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

__all__ = [
    "kronecker",
    "StrengthenedInverse",
    "strengthened_inverse",
    "RootOfUnity",
    "omega",
    "FareyArc",
    "farey_neighbors",
    "farey_sequence",
    "multiplier_identity_check",
]


def kronecker(a, n):
    """Kronecker symbol (a|n), the full multiplicative extension to all n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # factor out twos of n; (a|2) is 0 for even a, +-1 by a mod 8 otherwise
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            sign = -sign
    # Jacobi symbol for odd n >= 1 by quadratic reciprocity
    a %= n
    result = sign
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class StrengthenedInverse:
    """h' with h*h' == -1 modulo L, where L strengthens k by 3 and 16."""

    h: int
    k: int
    hprime: int
    modulus: int


@lru_cache(maxsize=None)
def strengthened_inverse(h, k):
    """Least non-negative h' with h*h' == -1 (mod L), L = k * 3^[3|k] * 16^[2|k]."""
    if k < 1:
        raise ValueError("k must be positive")
    if math.gcd(h, k) != 1:
        raise ValueError(f"h={h} and k={k} are not coprime")
    L = k * (3 if k % 3 == 0 else 1) * (16 if k % 2 == 0 else 1)
    if L == 1:
        return StrengthenedInverse(h, k, 0, 1)
    hprime = (-pow(h, -1, L)) % L
    return StrengthenedInverse(h, k, hprime, L)


@dataclass(frozen=True)
class RootOfUnity:
    """e^(i*pi*t) for an exact rational t normalized into [0, 2)."""

    exponent: Fraction

    @classmethod
    def from_exponent(cls, t):
        t = Fraction(t) % 2
        return cls(t)

    @classmethod
    def one(cls):
        return cls(Fraction(0))

    @classmethod
    def minus_one(cls):
        return cls(Fraction(1))

    def __mul__(self, other):
        return RootOfUnity((self.exponent + other.exponent) % 2)

    def __truediv__(self, other):
        return RootOfUnity((self.exponent - other.exponent) % 2)

    def inverse(self):
        return RootOfUnity((-self.exponent) % 2)

    def conjugate(self):
        return self.inverse()

    def __pow__(self, e):
        return RootOfUnity((self.exponent * e) % 2)

    def __neg__(self):
        return RootOfUnity((self.exponent + 1) % 2)

    @property
    def order(self):
        """Smallest positive m with self^m == 1."""
        t = self.exponent
        return (2 * t.denominator) // math.gcd(2 * t.denominator, t.numerator) \
            if t.numerator else 1

    def to_mpc(self):
        """Evaluate at the current mpmath working precision."""
        return mpmath.expjpi(mpmath.mpf(self.exponent.numerator) / self.exponent.denominator)

    def to_json_dict(self):
        return {"num": self.exponent.numerator, "den": self.exponent.denominator}


def _omega_exponent(h, k, hprime, branch):
    """The -E part of omega = (kronecker) * e^(-i*pi*E), as an exact Fraction."""
    poly = 2 * h - hprime + h * h * hprime
    shared = Fraction(k * k - 1, 12 * k) * poly
    if branch == "h_odd":
        return Fraction(2 - h * k - h, 4) + shared
    if branch == "k_odd":
        return Fraction(k - 1, 4) + shared
    raise ValueError(f"unknown branch {branch!r}")


@lru_cache(maxsize=None)
def omega(h, k, hprime=None, branch="auto"):
    """The eta-multiplier root of unity for the fraction h/k.

    h is used literally (2h, 4h arguments in the Kloosterman sums are not
    reduced mod k).  The branch is chosen by parity; when h and k are both
    odd the k-odd branch is the fixed convention, and `branch` can override
    it for the agreement diagnostic.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if h < 0:
        raise ValueError("h must be non-negative")
    if math.gcd(h, k) != 1:
        raise ValueError(f"h={h} and k={k} are not coprime")
    if hprime is None:
        hprime = strengthened_inverse(h, k).hprime
    if branch == "auto":
        branch = "k_odd" if k % 2 == 1 else "h_odd"
    if branch == "h_odd" and h % 2 == 0:
        raise ValueError("h-odd branch needs odd h")
    if branch == "k_odd" and k % 2 == 0:
        raise ValueError("k-odd branch needs odd k")
    if branch == "h_odd":
        sign = kronecker(-k, h)
    else:
        sign = kronecker(-h, k)
    if sign == 0:
        raise ValueError("vanishing Kronecker symbol; arguments not coprime")
    t = -_omega_exponent(h, k, hprime, branch)
    if sign == -1:
        t += 1
    return RootOfUnity.from_exponent(t)


@dataclass(frozen=True)
class FareyArc:
    """A Farey fraction h/k of order N with its neighbor data and arc widths."""

    h: int
    k: int
    N: int
    k1: int  # denominator of the left neighbor
    k2: int  # denominator of the right neighbor
    h1: int
    h2: int
    theta_left: Fraction  # 1/(k(k+k1)), except 1/(N+1) for the 0/1 arc
    theta_right: Fraction  # 1/(k(k+k2))

    def to_json_dict(self):
        return {
            "h": self.h,
            "k": self.k,
            "N": self.N,
            "k1": self.k1,
            "k2": self.k2,
            "theta_left": str(self.theta_left),
            "theta_right": str(self.theta_right),
        }


def farey_neighbors(h, k, N):
    """Neighbor denominators of h/k in the Farey sequence of order N."""
    if not (1 <= k <= N):
        raise ValueError("need 1 <= k <= N")
    if not 0 <= h < k or math.gcd(h, k) != 1:
        if not (h == 0 and k == 1):
            raise ValueError("need 0 <= h < k with gcd(h,k)=1")
    if (h, k) == (0, 1):
        # The arc around 0 is symmetric by convention: theta' = 1/(N+1).
        return FareyArc(0, 1, N, N, N, -1, 1, Fraction(1, N + 1), Fraction(1, N + 1))
    hinv = pow(h, -1, k)
    k1 = hinv + ((N - hinv) // k) * k  # representative of h^-1 mod k in (N-k, N]
    k2 = (k - hinv) + ((N - (k - hinv)) // k) * k  # -h^-1 mod k in (N-k, N]
    h1 = (h * k1 - 1) // k
    h2 = (h * k2 + 1) // k
    return FareyArc(
        h, k, N, k1, k2, h1, h2,
        Fraction(1, k * (k + k1)), Fraction(1, k * (k + k2)),
    )


def farey_sequence(N):
    """All reduced fractions h/k with 0 <= h < k <= N, ascending."""
    fracs = sorted(
        {Fraction(h, k) for k in range(1, N + 1) for h in range(k) if math.gcd(h, k) == 1}
    )
    return fracs


def multiplier_identity_check(h, k):
    """Exact check of (-1)^(k/2) e^(i*pi*h'/2 (1-3k/2)) == omega_{h,k/2}^2 / omega_{h,k}^4.

    Only defined in the gcd(4,k)=2 class.  Returns (holds, lhs, rhs).
    """
    if math.gcd(4, k) != 2:
        raise ValueError("identity requires gcd(4,k) = 2")
    if math.gcd(h, k) != 1:
        raise ValueError("h, k must be coprime")
    hprime = strengthened_inverse(h, k).hprime
    lhs = RootOfUnity.from_exponent(
        Fraction(k // 2) + Fraction(hprime * (2 - 3 * k), 4)
    )
    rhs = omega(h, k // 2) ** 2 / omega(h, k, hprime) ** 4
    return lhs == rhs, lhs, rhs
