"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis ``1, z, ..., z^(phi(N)-1)`` of
``Q(zeta_N)`` after reduction modulo the N-th cyclotomic polynomial.
Values are not pushed down to their minimal conductor; comparisons lift
both operands to a common conductor instead.
"""

from __future__ import annotations

import cmath
import math
import threading
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping

__all__ = [
    "Cyclotomic",
    "CyclotomicError",
    "InvalidConductorError",
    "InvalidAutomorphismError",
    "NotInSubfieldError",
    "canonicalize",
    "zeta",
    "euler_phi",
    "divisors",
    "prime_factors",
    "cyclotomic_polynomial",
    "set_conductor_cap",
    "get_conductor_cap",
]

DEFAULT_CONDUCTOR_CAP = 10_000
_conductor_cap = DEFAULT_CONDUCTOR_CAP


class CyclotomicError(ValueError):
    pass


class InvalidConductorError(CyclotomicError):
    pass


class InvalidAutomorphismError(CyclotomicError):
    pass


class NotInSubfieldError(CyclotomicError):
    pass


def set_conductor_cap(cap: int) -> None:
    global _conductor_cap
    if cap < 1:
        raise ValueError("conductor cap must be positive")
    _conductor_cap = cap


def get_conductor_cap() -> int:
    return _conductor_cap


def _check_conductor(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidConductorError(f"invalid conductor {n!r}")
    if n > _conductor_cap:
        raise InvalidConductorError(
            f"conductor {n} exceeds the configured cap {_conductor_cap}"
        )


# --- elementary number theory ---------------------------------------------


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    """Prime factors of ``n`` with multiplicity, ascending."""
    out = []
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return tuple(sorted(set(small + [n // d for d in small])))


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result = n
    for p in set(prime_factors(n)):
        result -= result // p
    return result


def _moebius(n: int) -> int:
    fs = prime_factors(n)
    if len(fs) != len(set(fs)):
        return 0
    return -1 if len(fs) % 2 else 1


@lru_cache(maxsize=None)
def _ramanujan_sum(n: int, e: int) -> int:
    # trace over Q of zeta_n^e
    g = math.gcd(e, n)
    m = n // g
    return _moebius(m) * euler_phi(n) // euler_phi(m)


_phi_lock = threading.Lock()
_phi_cache: dict[int, tuple[int, ...]] = {}


def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first.

    Obtained by exact division of ``x^n - 1`` by ``Phi_d`` for the proper
    divisors ``d`` of ``n``; cached per conductor.
    """
    cached = _phi_cache.get(n)
    if cached is not None:
        return cached
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        poly = _exact_div(poly, list(cyclotomic_polynomial(d)))
    result = tuple(poly)
    with _phi_lock:
        _phi_cache.setdefault(n, result)
    return _phi_cache[n]


def _exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        # monic divisor
        q[i - dd] = c
        for j in range(dd + 1):
            num[i - dd + j] -= c * den[j]
    assert all(v == 0 for v in num[:dd]), "non-exact cyclotomic division"
    return q


def _reduce_dense(dense: list[Fraction], n: int) -> dict[int, Fraction]:
    """Reduce a dense exponent vector (length n, exponents mod n) mod Phi_n."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    dense = list(dense)
    for i in range(len(dense) - 1, deg - 1, -1):
        c = dense[i]
        if c == 0:
            continue
        dense[i] = 0
        base = i - deg
        for j in range(deg):
            if phi[j]:
                dense[base + j] -= c * phi[j]
    return {e: c for e, c in enumerate(dense[:deg]) if c != 0}


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


# --- the element type ------------------------------------------------------


class Cyclotomic:
    """Immutable element of Q(zeta_N) in reduced power-basis form."""

    __slots__ = ("_n", "_coeffs", "_hash")

    def __init__(self, conductor: int, coeffs: Mapping[int, Fraction]):
        # trusted constructor; use canonicalize() for raw input
        self._n = conductor
        self._coeffs = dict(coeffs)
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def rational(cls, q) -> "Cyclotomic":
        q = _as_fraction(q)
        return cls(1, {0: q} if q else {})

    @classmethod
    def coerce(cls, value) -> "Cyclotomic":
        if isinstance(value, Cyclotomic):
            return value
        return cls.rational(value)

    # accessors --------------------------------------------------------
    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def terms(self) -> list[tuple[int, Fraction]]:
        return sorted(self._coeffs.items())

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_rational(self) -> bool:
        return self.to_rational() is not None

    def to_rational(self) -> Fraction | None:
        """The rational value of ``self`` or None when it is irrational."""
        # 1 is a power-basis vector, so rationals have no other terms
        if set(self._coeffs) <= {0}:
            return self._coeffs.get(0, Fraction(0))
        return None

    def _galois_average(self) -> Fraction:
        n = self._n
        return sum(
            (c * _ramanujan_sum(n, e) for e, c in self._coeffs.items()), Fraction(0)
        ) / euler_phi(n)

    # lifting ----------------------------------------------------------
    def lift(self, m: int) -> "Cyclotomic":
        """Re-express in Q(zeta_m); requires conductor | m."""
        n = self._n
        if m == n:
            return self
        if m % n:
            raise InvalidConductorError(f"cannot lift conductor {n} to {m}")
        _check_conductor(m)
        step = m // n
        dense = [Fraction(0)] * m
        for e, c in self._coeffs.items():
            dense[e * step] += c
        return Cyclotomic(m, _reduce_dense(dense, m))

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._coeffs:
            return self
        if not self._coeffs:
            return other
        m = math.lcm(self._n, other._n)
        if m == self._n == other._n:
            out = dict(self._coeffs)
            for e, c in other._coeffs.items():
                v = out.get(e, 0) + c
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
            return Cyclotomic(m, out)
        a, b = self.lift(m), other.lift(m)
        return a + b

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self._n, {e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other):
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Cyclotomic.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                return Cyclotomic(1, {})
            return Cyclotomic(self._n, {e: c * q for e, c in self._coeffs.items()})
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if not self._coeffs or not other._coeffs:
            return Cyclotomic(1, {})
        m = math.lcm(self._n, other._n)
        _check_conductor(m)
        sa, sb = m // self._n, m // other._n
        dense = [Fraction(0)] * m
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                dense[(e1 * sa + e2 * sb) % m] += c1 * c2
        return Cyclotomic(m, _reduce_dense(dense, m))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Cyclotomic.rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # Galois action ----------------------------------------------------
    def galois(self, k: int) -> "Cyclotomic":
        """Apply the automorphism zeta_N -> zeta_N^k."""
        n = self._n
        if math.gcd(k, n) != 1:
            raise InvalidAutomorphismError(
                f"gcd({k}, {n}) != 1: not an automorphism of Q(zeta_{n})"
            )
        k %= n
        if k == 1 or n <= 2:
            return self
        dense = [Fraction(0)] * n
        for e, c in self._coeffs.items():
            dense[(e * k) % n] += c
        return Cyclotomic(n, _reduce_dense(dense, n))

    def galois_on_subfield(self, k: int, m: int) -> "Cyclotomic":
        """Apply zeta_m -> zeta_m^k to a value known to lie in Q(zeta_m).

        The automorphism is realised on Q(zeta_N) by some k' = k mod m with
        gcd(k', N) = 1, so redundant conductors are harmless.
        """
        if math.gcd(k, m) != 1:
            raise InvalidAutomorphismError(f"gcd({k}, {m}) != 1")
        big = math.lcm(self._n, m)
        k %= m
        while math.gcd(k, big) != 1:
            k += m
        return self.lift(big).galois(k)

    def conjugate(self) -> "Cyclotomic":
        return self.galois(-1)

    def lies_in(self, m: int) -> bool:
        """Whether ``self`` lies in the subfield Q(zeta_m)."""
        big = math.lcm(self._n, m)
        a = self.lift(big)
        for k in range(1, big, m):
            if math.gcd(k, big) == 1 and k != 1 and a.galois(k) != a:
                return False
        return True

    def trace(self, m: int, check: bool = True) -> Fraction:
        """Trace from Q(zeta_m) down to Q.

        ``self`` must lie in Q(zeta_m); with ``check`` the membership is
        verified and a failure raises :class:`NotInSubfieldError`.
        """
        if m < 1:
            raise InvalidConductorError(f"invalid conductor {m!r}")
        if check and not self.lies_in(m):
            raise NotInSubfieldError(
                f"value of conductor {self._n} does not lie in Q(zeta_{m})"
            )
        # on Q(zeta_m), Tr_{Q(zeta_m)/Q} = phi(m) * (mean over all conjugates)
        return self._galois_average() * euler_phi(m)

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if self._n == other._n:
            return self._coeffs == other._coeffs
        m = math.lcm(self._n, other._n)
        return self.lift(m)._coeffs == other.lift(m)._coeffs

    def __hash__(self):
        # the mean over conjugates does not depend on the chosen conductor
        if self._hash is None:
            self._hash = hash(self._galois_average())
        return self._hash

    def __bool__(self):
        return bool(self._coeffs)

    def __complex__(self):
        n = self._n
        return complex(
            sum(float(c) * cmath.exp(2j * cmath.pi * e / n) for e, c in self._coeffs.items())
        )

    def __repr__(self):
        if not self._coeffs:
            return "Cyclotomic(0)"
        if set(self._coeffs) == {0}:
            return f"Cyclotomic({self._coeffs[0]})"
        parts = []
        for e, c in self.terms():
            parts.append(f"{c}*z{self._n}^{e}" if e else f"{c}")
        return "Cyclotomic(" + " + ".join(parts) + ")"

    # serialization ----------------------------------------------------
    def to_json(self):
        q = self.to_rational()
        if q is not None:
            if q.denominator == 1:
                return int(q)
            return [q.numerator, q.denominator]
        return {
            "conductor": self._n,
            "terms": [[e, c.numerator, c.denominator] for e, c in self.terms()],
        }

    @classmethod
    def from_json(cls, doc) -> "Cyclotomic":
        if isinstance(doc, bool):
            raise CyclotomicError(f"not a cyclotomic value: {doc!r}")
        if isinstance(doc, int):
            return cls.rational(doc)
        if isinstance(doc, list):
            if len(doc) != 2 or not all(isinstance(v, int) for v in doc) or doc[1] == 0:
                raise CyclotomicError(f"malformed rational {doc!r}")
            return cls.rational(Fraction(doc[0], doc[1]))
        if isinstance(doc, dict):
            try:
                n = doc["conductor"]
                raw = [(t[0], Fraction(t[1], t[2])) for t in doc["terms"]]
            except (KeyError, TypeError, IndexError, ZeroDivisionError) as exc:
                raise CyclotomicError(f"malformed cyclotomic record {doc!r}") from exc
            return canonicalize(raw, n)
        raise CyclotomicError(f"not a cyclotomic value: {doc!r}")


def canonicalize(raw: Iterable[tuple[int, object]], conductor: int) -> Cyclotomic:
    """Reduce ``sum c * zeta_N^e`` over ``raw`` pairs to canonical form."""
    _check_conductor(conductor)
    dense = [Fraction(0)] * conductor
    for e, c in raw:
        dense[e % conductor] += _as_fraction(c)
    return Cyclotomic(conductor, _reduce_dense(dense, conductor))


def zeta(n: int, k: int = 1) -> Cyclotomic:
    """The root of unity exp(2 pi i k / n)."""
    return canonicalize([(k, 1)], n)
