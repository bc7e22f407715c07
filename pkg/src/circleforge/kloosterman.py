"""Kloosterman-type sums: classical, incomplete, A_k(n), and the nine
modified families in complete and incomplete form.

Every sum is available through two independent paths:

  * direct evaluation, multiplying exact eta-multiplier roots of unity
    term by term, and
  * the rewritten classical form, which expresses each modified family as
    a fixed root of unity times a classical sum with shifted arguments.

Equality of the two paths is an exact statement about roots of unity and
is tested as such (no floating point).  In exact mode a sum is a formal
integer combination of roots of unity; zero-testing reduces modulo the
cyclotomic polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .modular import RootOfUnity, farey_neighbors, omega, strengthened_inverse

__all__ = [
    "KloostermanSpec",
    "SumValue",
    "classical_K",
    "incomplete_K",
    "A_k",
    "modified_K",
    "rewritten_classical_form",
    "bound_ratio",
    "EXACT_MODE_MAX_K",
]

EXACT_MODE_MAX_K = 64
_NUMERIC_MIN_PREC = 128


@dataclass(frozen=True)
class KloostermanSpec:
    """Identifies one sum family together with its parameters.

    family: classical | incomplete | A | modified | modified_incomplete
    d: gcd(4,k) class for modified families; j: index 1..3; nu required
    iff j == 2; ell, N only for incomplete restrictions.
    """

    family: str
    k: int
    n: int = 0
    m: int = 0
    d: int | None = None
    j: int | None = None
    nu: int | None = None
    ell: int | None = None
    N: int | None = None

    def validate(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.family in ("modified", "modified_incomplete"):
            if self.d not in (1, 2, 4) or self.j not in (1, 2, 3):
                raise ValueError("modified family needs d in {1,2,4} and j in {1,2,3}")
            if math.gcd(4, self.k) != self.d:
                raise ValueError(f"gcd(4,{self.k}) != {self.d}")
            if (self.j == 2) != (self.nu is not None):
                raise ValueError("nu is present exactly when j == 2")
        if self.family in ("incomplete", "modified_incomplete"):
            if self.ell is None or self.N is None:
                raise ValueError("incomplete sums need ell and N")
            if self.N < self.k:
                raise ValueError("incomplete sums need N >= k")
            if not self.N + 1 <= self.ell <= self.N + self.k + 1:
                raise ValueError("need N+1 <= ell <= N+k+1")


# ---------------------------------------------------------------------------
# Exact zero-testing of integer combinations of roots of unity.

@lru_cache(maxsize=None)
def _cyclotomic(m):
    """Coefficients of the m-th cyclotomic polynomial, ascending."""
    # x^m - 1 divided by the product of Phi_d over proper divisors d of m.
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divide_exact(poly, _cyclotomic(d))
    return tuple(poly)


def _poly_divide_exact(num, den):
    """Exact division of integer polynomials (ascending coefficients)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return out


def _is_zero_combination(terms):
    """terms: iterable of exponents t (Fractions mod 2); is sum e^(i*pi*t) == 0?"""
    terms = list(terms)
    if not terms:
        return True
    m = 1
    for t in terms:
        m = m * (2 * t.denominator) // math.gcd(m, 2 * t.denominator)
    coeffs = [0] * m
    for t in terms:
        coeffs[(t.numerator * (m // (2 * t.denominator))) % m] += 1
    phi = _cyclotomic(m)
    # reduce modulo Phi_m (monic): remainder must vanish identically
    deg = len(phi) - 1
    for i in range(m - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            coeffs[i] = 0
            for j in range(deg):
                coeffs[i - deg + j] -= c * phi[j]
    return not any(coeffs[:deg])


class SumValue:
    """Value of a Kloosterman-type sum.

    In exact mode `terms` holds the unit-modulus summands as exponent
    Fractions; `value()` evaluates numerically on demand.  Sums beyond the
    exact-mode cutoff carry only a high-precision complex value, accumulated
    in ascending h order for determinism.
    """

    __slots__ = ("terms", "term_count", "_numeric")

    def __init__(self, terms=None, numeric=None, term_count=None):
        self.terms = tuple(terms) if terms is not None else None
        self._numeric = numeric
        if term_count is None:
            term_count = len(self.terms) if self.terms is not None else 0
        self.term_count = term_count

    @property
    def exact(self):
        return self.terms is not None

    def value(self, prec=_NUMERIC_MIN_PREC):
        if self.terms is None:
            return self._numeric
        with mpmath.workprec(prec):
            return sum((RootOfUnity(t).to_mpc() for t in self.terms), mpmath.mpc(0))

    def __neg__(self):
        if self.terms is not None:
            return SumValue(terms=[(t + 1) % 2 for t in self.terms],
                            term_count=self.term_count)
        return SumValue(numeric=-self._numeric, term_count=self.term_count)

    def conjugate(self):
        if self.terms is not None:
            return SumValue(terms=[(-t) % 2 for t in self.terms],
                            term_count=self.term_count)
        return SumValue(numeric=mpmath.conj(self._numeric), term_count=self.term_count)

    def equals(self, other, prec=_NUMERIC_MIN_PREC):
        """Exact equality when both sides carry terms, else numeric to ~prec."""
        if self.terms is not None and other.terms is not None:
            if sorted(self.terms) == sorted(other.terms):
                return True  # identical multisets; skip cyclotomic reduction
            diff = list(self.terms) + [(t + 1) % 2 for t in other.terms]
            return _is_zero_combination([Fraction(t) for t in diff])
        with mpmath.workprec(prec):
            a, b = self.value(prec), other.value(prec)
            scale = max(1, self.term_count, other.term_count)
            return abs(a - b) < mpmath.mpf(2) ** (16 - prec) * scale

    def is_zero(self):
        if self.terms is not None:
            return _is_zero_combination([Fraction(t) for t in self.terms])
        return abs(self._numeric) < mpmath.mpf(2) ** (16 - _NUMERIC_MIN_PREC)

    def __repr__(self):
        mode = "exact" if self.exact else "numeric"
        return f"SumValue({mode}, terms={self.term_count}, value~{complex(self.value(64)):.6g})"


def _coprime_residues(k):
    if k == 1:
        return [0]
    return [h for h in range(k) if math.gcd(h, k) == 1]


def _ordinary_negative_inverse(h, k):
    """h' with h*h' == -1 (mod k), least non-negative."""
    if k == 1:
        return 0
    return (-pow(h, -1, k)) % k


def _collect(spec, exponent_fn, exact=None):
    """Assemble a SumValue over admissible h from a per-term exponent function."""
    k = spec.k
    if exact is None:
        exact = k <= EXACT_MODE_MAX_K
    residues = _coprime_residues(k)
    if spec.family in ("incomplete", "modified_incomplete"):
        admissible = []
        for h in residues:
            k1 = farey_neighbors(h, k, spec.N).k1
            if spec.N < k + k1 <= spec.ell:
                admissible.append(h)
        residues = admissible
    if exact:
        return SumValue(terms=[exponent_fn(h) % 2 for h in residues])
    with mpmath.workprec(max(_NUMERIC_MIN_PREC, mpmath.mp.prec)):
        total = mpmath.mpc(0)
        for h in residues:
            t = exponent_fn(h) % 2
            total += mpmath.expjpi(mpmath.mpf(t.numerator) / t.denominator)
    return SumValue(numeric=total, term_count=len(residues))


def classical_K(k, n, m=0, exact=None):
    """K_k(n,m) = sum over h coprime to k of e^(-2*pi*i*(n*h - m*h')/k)."""
    spec = KloostermanSpec("classical", k, n, m)
    spec.validate()

    def exponent(h):
        hp = _ordinary_negative_inverse(h, k)
        return Fraction(-2 * (n * h - m * hp), k)

    return _collect(spec, exponent, exact)


def incomplete_K(k, ell, N, n, m=0, exact=None):
    """The classical sum restricted to h with N < k + k1 <= ell."""
    spec = KloostermanSpec("incomplete", k, n, m, ell=ell, N=N)
    spec.validate()

    def exponent(h):
        hp = _ordinary_negative_inverse(h, k)
        return Fraction(-2 * (n * h - m * hp), k)

    return _collect(spec, exponent, exact)


def A_k(k, n, exact=None):
    """A_k(n) = sum over h of omega_{h,k} e^(-2*pi*i*n*h/k)."""
    spec = KloostermanSpec("A", k, n)
    spec.validate()

    def exponent(h):
        return omega(h, k).exponent + Fraction(-2 * n * h, k)

    return _collect(spec, exponent, exact)


def _multiplier_exponent(d, j, k, h):
    """Exponent of the omega-ratio multiplier of family (d, j) at this h."""
    if d == 4:
        base = omega(h, k // 2) ** 4 / omega(h, k // 4) ** 2
        if j == 3:
            base = omega(h, k // 2) ** 6 / (omega(h, k) ** 4 * omega(h, k // 4) ** 2)
    elif d == 2:
        base = omega(h, k // 2) ** 4 / omega(2 * h, k // 2) ** 2
        if j == 3:
            base = omega(h, k // 2) ** 6 / (omega(h, k) ** 4 * omega(2 * h, k // 2) ** 2)
    else:
        base = omega(2 * h, k) ** 4 / omega(4 * h, k) ** 2
        if j == 3:
            base = omega(2 * h, k) ** 6 / (omega(h, k) ** 4 * omega(4 * h, k) ** 2)
    return base.exponent


def modified_K(spec, exact=None):
    """Direct evaluation of a modified (possibly incomplete) family.

    For the d=1 families the factors h'/4 and 3h'/4 are evaluated through
    the inverse of 8 mod k, which makes every summand depend on h' only
    through its residue class; k odd guarantees 8 is invertible.

    All three gcd classes use the nu-polynomial -3*nu^2 + nu in the j=2
    sums.  The sign variant -3*nu^2 - nu for the odd-k class fails both
    the mock-theta transformation check and the end-to-end integrality of
    the assembled formula (off by ~8 at n=300), so it is rejected.
    """
    spec.validate()
    if spec.family not in ("modified", "modified_incomplete"):
        raise ValueError("modified_K expects a modified family spec")
    d, j, k, nu, n, m = spec.d, spec.j, spec.k, spec.nu, spec.n, spec.m
    inv8 = pow(8, -1, k) if d == 1 and k > 1 else 0

    def exponent(h):
        hp = strengthened_inverse(h, k).hprime
        t = _multiplier_exponent(d, j, k, h)
        if d in (2, 4):
            if j == 1:
                t += Fraction(hp * (2 - 3 * k), 4)
            elif j == 2:
                t += Fraction(hp * (-3 * nu * nu + nu), k)
            t += Fraction(2 * (-n * h + m * hp), k)
        else:
            if j == 1:
                t += Fraction(2 * 3 * inv8 * hp, k)
            elif j == 2:
                t += Fraction(hp * (-3 * nu * nu + nu), k)
            t += Fraction(2 * (-n * h + 2 * inv8 * m * hp), k)
        return t

    return _collect(spec, exponent, exact)


def _exact_div(a, b, what):
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError(f"integrality violated in {what}: {a}/{b}")
    return q


def _rewrite_data(spec):
    """(prefactor, n_shifted, m_shifted) for the classical form of a family.

    The bracket inverses are pinned to the representatives that make the
    reduction exact: inverses mod 3k (or mod k when 3 does not divide k)
    for d in {1,2}, and the inverse of 8 mod k shared with the direct path.
    """
    d, j, k, nu, n, m = spec.d, spec.j, spec.k, spec.nu, spec.n, spec.m
    if d == 4:
        pref = RootOfUnity.minus_one()
        n_new = n - _exact_div(2 * k * k + 4 * k, 16, "d=4 n-shift")
        if j == 1:
            m_new = m - _exact_div(5 * k * k - 4 * k, 16, "d=4 j=1 m-shift")
        elif j == 2:
            m_new = m + _exact_div(k * k, 16, "d=4 j=2 m-shift") \
                + _exact_div(-3 * nu * nu + nu, 2, "nu term")
        else:
            pref = RootOfUnity.one()
            n_new = n + _exact_div(k * k, 8, "d=4 j=3 n-shift")
            m_new = m - _exact_div(k * k, 16, "d=4 j=3 m-shift")
        return pref, n_new, m_new
    if d == 2:
        kap = k // 2
        mod = 3 * kap if kap % 3 == 0 else kap
        inv2 = pow(2, -1, mod) if mod > 1 else 0
        pref = RootOfUnity.from_exponent(Fraction(kap - 1, 2))
        c_h = _exact_div((kap * kap - 1) * (1 - 2 * inv2), 3, "d=2 h-shift")
        c_hp = _exact_div((kap * kap - 1) * (2 - inv2), 6, "d=2 h'-shift")
        n_new = n - c_h
        if j == 1:
            m_new = m + c_hp - _exact_div(3 * k * k - 2 * k, 8, "d=2 j=1 m-shift")
        elif j == 2:
            m_new = m + c_hp + _exact_div(-3 * nu * nu + nu, 2, "nu term")
        else:
            pref = -pref
            m_new = m + c_hp - _exact_div(3 * k * k - 2 * k, 8, "d=2 j=3 m-shift")
        return pref, n_new, m_new
    # d == 1
    mod = 3 * k if k % 3 == 0 else k
    inv2 = pow(2, -1, mod) if mod > 1 else 0
    inv4 = pow(4, -1, mod) if mod > 1 else 0
    inv8 = pow(8, -1, k) if k > 1 else 0
    kk1 = k * k - 1
    if j in (1, 2):
        pref = RootOfUnity.from_exponent(Fraction(k - 1, 2))
        d_h = _exact_div(kk1 * (8 * inv2 - 16 * inv4), 12, "d=1 h-shift")
        d_hp = _exact_div(kk1 * (2 * inv2 - inv4), 12, "d=1 h'-shift")
        n_new = n - d_h
        if j == 1:
            m_new = d_hp + 3 * inv8 + 2 * inv8 * m
        else:
            m_new = d_hp + _exact_div(-3 * nu * nu + nu, 2, "nu term") + 2 * inv8 * m
    else:
        pref = RootOfUnity.one()
        e_h = _exact_div(kk1 * (12 * inv2 - 2 - 16 * inv4), 12, "d=1 j=3 h-shift")
        e_hp = _exact_div(kk1 * (3 * inv2 - 2 - inv4), 12, "d=1 j=3 h'-shift")
        n_new = n - e_h
        m_new = e_hp + 2 * inv8 * m
    return pref, n_new, m_new


def rewritten_classical_form(spec, exact=None):
    """The equivalent classical-sum form of a modified family.

    Returns prefactor * K_k(n', m') (with the incomplete restriction carried
    through when present), enabling dual-path verification against
    modified_K and classical bounding.
    """
    spec.validate()
    if spec.family not in ("modified", "modified_incomplete"):
        raise ValueError("rewrite applies to modified families only")
    pref, n_new, m_new = _rewrite_data(spec)
    k = spec.k

    filtered = KloostermanSpec(
        "incomplete" if spec.family == "modified_incomplete" else "classical",
        k, n_new, m_new, ell=spec.ell, N=spec.N,
    )

    def exponent(h):
        hp = _ordinary_negative_inverse(h, k)
        return pref.exponent + Fraction(-2 * (n_new * h - m_new * hp), k)

    return _collect(filtered, exponent, exact)


def bound_ratio(sum_value, k, n, prec=_NUMERIC_MIN_PREC):
    """|K| / (max(|n|,1)^(1/3) * k^(2/3)): growth diagnostic, not a proof."""
    with mpmath.workprec(prec):
        mag = abs(sum_value.value(prec))
        return float(mag / (mpmath.mpf(max(abs(n), 1)) ** Fraction(1, 3)
                            * mpmath.mpf(k) ** Fraction(2, 3)))
