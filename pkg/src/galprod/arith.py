"""Integer helpers shared by the curve, sieve and bound code."""
from functools import reduce

from sympy import factorint as _factorint
from sympy import isprime as _isprime
from sympy import primerange
from sympy import totient as _totient

from .errors import FactorizationBudget

# Integers above this size are refused rather than risking an unbounded
# factorization (conductors and discriminants in practice are far smaller).
FACTOR_DIGIT_LIMIT = 60


def is_prime(n):
    return n >= 2 and bool(_isprime(n))


def primes_upto(n):
    return list(primerange(2, n + 1))


def factorize(n):
    """Return {prime: exponent} for |n| >= 1."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    if len(str(n)) > FACTOR_DIGIT_LIMIT:
        raise FactorizationBudget(f"refusing to factor a {len(str(n))}-digit integer", n=str(n))
    return {int(p): int(e) for p, e in _factorint(n).items()}


def prime_divisors(n):
    return sorted(factorize(n))


def radical(n):
    """Product of the distinct primes dividing n; radical(1) = 1."""
    if n < 1:
        raise ValueError("radical needs a positive integer")
    return reduce(lambda a, b: a * b, prime_divisors(n), 1)


def totient(n):
    return int(_totient(n))


def weil_ok(ap, p, g=1):
    """|a_p| <= 2 g sqrt(p), decided exactly."""
    # |a| <= 2g sqrt(p)  <=>  a^2 <= 4 g^2 p
    return ap * ap <= 4 * g * g * p


__all__ = ["is_prime", "primes_upto", "factorize", "prime_divisors", "radical", "totient", "weil_ok"]
