"""Special-function values that appear in the Casimir formulas.

Only integer and half-integer arguments ever occur, so everything here is
evaluated by exact recursions or short, rapidly convergent series.
"""
from fractions import Fraction
from functools import lru_cache
import math


@lru_cache(maxsize=None)
def bernoulli(n):
    """Bernoulli number B_n as an exact ``Fraction`` (convention B_1 = -1/2)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    b = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * b[j]
        b.append(-acc / (m + 1))
    return b[n]


def zeta_int(s):
    """Riemann zeta at an integer ``s >= 2``.

    Direct sum of the first terms followed by an Euler-Maclaurin tail; the
    truncation error is far below double precision.
    """
    if int(s) != s or s < 2:
        raise ValueError("zeta_int needs an integer s >= 2")
    s = int(s)
    n = 12
    head = math.fsum(k ** -s for k in range(1, n))
    tail = n ** (1 - s) / (s - 1) + 0.5 * n ** (-s)
    rising = s
    for j in range(1, 8):
        term = float(bernoulli(2 * j)) / math.factorial(2 * j) * rising * n ** (-s - 2 * j + 1)
        tail += term
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return head + tail


def zeta_one_minus(d):
    """zeta(1 - d) for integer d >= 2, from zeta(1 - d) = -B_d / d."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return float(-bernoulli(d) / d)


def hurwitz_half_one_minus(d):
    """Hurwitz zeta(1 - d, 1/2) = (2^(1-d) - 1) zeta(1 - d)."""
    return (2.0 ** (1 - d) - 1.0) * zeta_one_minus(d)


def gamma_half_integer(x):
    """Gamma at an integer or half-integer argument by exact recursion.

    Raises ``ValueError`` at the poles (non-positive integers).
    """
    two_x = round(2 * x)
    if abs(2 * x - two_x) > 1e-12:
        raise ValueError(f"{x} is not an integer or half-integer")
    if two_x % 2 == 0:
        n = two_x // 2
        if n <= 0:
            raise ValueError(f"Gamma has a pole at {n}")
        return float(math.factorial(n - 1))
    # start from Gamma(1/2) = sqrt(pi) and step by one
    value = math.sqrt(math.pi)
    a = 0.5
    target = two_x / 2
    while a < target:
        value *= a
        a += 1.0
    while a > target:
        a -= 1.0
        value /= a
    return value


def dilog(x, tol=1e-17):
    """Dilogarithm Li_2(x) = sum x^k / k^2 for |x| <= 1/2."""
    if abs(x) > 0.5:
        raise ValueError("series only used for |x| <= 1/2")
    total = 0.0
    power = x
    k = 1
    while True:
        term = power / (k * k)
        total += term
        if abs(term) < tol:
            return total
        k += 1
        power *= x
