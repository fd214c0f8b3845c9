"""Number-theoretic primitives: Kronecker symbols, Moebius, valuations,
divisor sums, modular inverses, fundamental discriminants, Gauss sums."""

from math import cos, gcd, pi, sin


class NotInvertible(ValueError):
    """Raised when an element has no inverse in the requested ring."""


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), fully extended to all integer pairs.

    Conventions: (a/0) = 1 iff a = +-1 else 0; (a/-1) = -1 iff a < 0;
    (a/2) follows the mod-8 rule and vanishes for even a.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    if a == 0:
        return 1 if n in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive: ordinary Jacobi symbol by reciprocity.
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def factorize(n: int) -> dict:
    """Prime factorization of |n| as {prime: exponent} by trial division."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list:
    """Sorted positive divisors of n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def primes_up_to(n: int) -> list:
    """All primes <= n by sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(n + 1) if sieve[i]]


def moebius(n: int) -> int:
    """Moebius function; 0 exactly when n is not squarefree."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1
    sign = 1
    for e in factorize(n).values():
        if e > 1:
            return 0
        sign = -sign
    return sign


def valuation(n: int, p: int) -> int:
    """Largest e with p^e dividing n (n >= 1, p prime)."""
    if n < 1:
        raise ValueError("n must be positive")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def sigma(n: int, k: int, modulus: int = 0) -> int:
    """Divisor power sum sum_{d|n} d^k, reduced mod m when modulus >= 2."""
    if modulus:
        total = 0
        for d in divisors(n):
            total += pow(d, k, modulus)
        return total % modulus
    return sum(d ** k for d in divisors(n))


def mod_inverse(a: int, m: int) -> int:
    """Inverse of a modulo m >= 2; raises NotInvertible when gcd(a, m) > 1."""
    if m < 2:
        raise ValueError("modulus must be >= 2")
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NotInvertible(f"{a} is not invertible mod {m}") from None


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values()) if abs(n) > 1 else True


def is_fundamental_discriminant(d: int) -> bool:
    """True iff d is a fundamental discriminant (either sign, d != 0).

    Either d = 1 (mod 4) and squarefree, or d = 4m with m = 2 or 3 (mod 4)
    and m squarefree.  The unit discriminant 1 qualifies.
    """
    if d == 0:
        raise ValueError("0 is not a discriminant")
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def splitting_type(ell: int, delta: int) -> str:
    """Behaviour of the prime ell in the quadratic field of discriminant delta:
    'ramified' when ell | delta, else 'split'/'inert' by the Kronecker symbol."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if delta % ell == 0:
        return "ramified"
    return "split" if kronecker(delta, ell) == 1 else "inert"


def gauss_sum_ratio(a: int, delta: int) -> int:
    """The ratio G(a, delta)/G(1, delta) of twisted Gauss sums.

    Equals the Kronecker symbol (delta/a).  The identity is applied for all
    a, not only gcd(a, delta) = 1: for a fundamental discriminant the
    attached character is primitive, so both sides vanish together when a
    shares a factor with delta (enforced against gauss_sum_numeric in tests).
    """
    return kronecker(delta, a)


def gauss_sum_numeric(a: int, delta: int) -> complex:
    """Gauss sum G(a, delta) = sum_{s mod delta} (delta/s) e(a*s/delta),
    summed directly with complex exponentials.

    Independent numeric oracle for gauss_sum_ratio and for the expansion of
    the twisted logarithmic derivative; e(x) = cos(2 pi x) + i sin(2 pi x).
    """
    if delta == 0:
        raise ValueError("delta must be nonzero")
    total = 0j
    for s in range(abs(delta)):
        chi = kronecker(delta, s)
        if chi:
            x = a * s / delta
            total += chi * complex(cos(2 * pi * x), sin(2 * pi * x))
    return total


__all__ = [
    "NotInvertible",
    "divisors",
    "factorize",
    "gauss_sum_numeric",
    "gauss_sum_ratio",
    "gcd",
    "is_fundamental_discriminant",
    "is_prime",
    "kronecker",
    "mod_inverse",
    "moebius",
    "primes_up_to",
    "sigma",
    "splitting_type",
    "valuation",
]
