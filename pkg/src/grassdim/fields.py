"""Exact fields: the rationals and prime fields Z/pZ.

Elements are plain Python objects: ``int`` residues in ``[0, p)`` for prime
fields, ``fractions.Fraction`` (or ``int``) for the rationals.  A
:class:`FieldSpec` carries the arithmetic and a seed for reproducible
sampling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import isprime, nextprime

RATIONAL_RANGE = 10**6
ORACLE_MIN_MODULUS = 2**20


class FieldError(ValueError):
    pass


class ZeroInverse(ZeroDivisionError):
    pass


class Kind(enum.Enum):
    RATIONALS = "rationals"
    PRIME = "prime"


@dataclass(frozen=True)
class FieldSpec:
    kind: Kind
    modulus: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind is Kind.PRIME:
            if self.modulus is None or not isprime(self.modulus):
                raise FieldError(f"modulus {self.modulus!r} is not prime")
        elif self.modulus is not None:
            raise FieldError("the rationals take no modulus")

    @property
    def is_prime(self) -> bool:
        return self.kind is Kind.PRIME

    @property
    def fit_for_oracle(self) -> bool:
        """True if unlucky-reduction probability is negligible for rank work."""
        return not self.is_prime or self.modulus >= ORACLE_MIN_MODULUS

    def __str__(self):
        return f"Z/{self.modulus}" if self.is_prime else "QQ"

    # -- element arithmetic ---------------------------------------------

    def __call__(self, x):
        """Canonical representative of ``x`` (an int or Fraction)."""
        if self.is_prime:
            if isinstance(x, Fraction):
                return x.numerator * self.inv(x.denominator % self.modulus) % self.modulus
            return int(x) % self.modulus
        x = Fraction(x)
        return x.numerator if x.denominator == 1 else x

    def add(self, a, b):
        return (a + b) % self.modulus if self.is_prime else self(a + b)

    def sub(self, a, b):
        return (a - b) % self.modulus if self.is_prime else self(a - b)

    def neg(self, a):
        return -a % self.modulus if self.is_prime else -a

    def mul(self, a, b):
        return a * b % self.modulus if self.is_prime else self(Fraction(a) * b)

    def inv(self, a):
        if self.is_prime:
            a = int(a) % self.modulus
            if a == 0:
                raise ZeroInverse("0 has no inverse")
            return pow(a, -1, self.modulus)
        if a == 0:
            raise ZeroInverse("0 has no inverse")
        return self(1 / Fraction(a))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- sampling ---------------------------------------------------------

    def rng(self, task: int = 0) -> np.random.Generator:
        """Independent generator for concurrent task number ``task``."""
        return np.random.default_rng([self.seed, task])

    def random_element(self, rng: np.random.Generator):
        if self.is_prime:
            return int(rng.integers(0, self.modulus))
        return int(rng.integers(-RATIONAL_RANGE, RATIONAL_RANGE + 1))

    def random_array(self, rng: np.random.Generator, shape) -> np.ndarray:
        """Array of iid random elements; int64 for Z/p, object ints for QQ."""
        if self.is_prime:
            return rng.integers(0, self.modulus, size=shape, dtype=np.int64)
        out = rng.integers(-RATIONAL_RANGE, RATIONAL_RANGE + 1, size=shape)
        return out.astype(object)


def rationals(seed: int = 0) -> FieldSpec:
    return FieldSpec(Kind.RATIONALS, None, seed)


def prime_field(p: int, seed: int = 0) -> FieldSpec:
    return FieldSpec(Kind.PRIME, p, seed)


def random_prime(rng: np.random.Generator, bits: int = 31) -> int:
    # stays below 2**bits so products of two residues fit in int64
    while True:
        p = nextprime(int(rng.integers(2 ** (bits - 1), 2**bits - 2**16)))
        if p < 2**bits:
            return int(p)


def default_oracle_fields(seed: int = 0, count: int = 2) -> list[FieldSpec]:
    """``count`` distinct random 31-bit prime fields derived from ``seed``."""
    rng = np.random.default_rng([seed, 0x5EC])
    primes: list[int] = []
    while len(primes) < count:
        p = random_prime(rng)
        if p not in primes:
            primes.append(p)
    return [prime_field(p, seed) for p in primes]
