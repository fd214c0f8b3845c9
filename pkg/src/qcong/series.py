"""Truncated power series over exact integers or integers mod m.

Coefficient arrays are dense Python ints; index n holds the q^n
coefficient.  A series may carry a fractional exponent offset t/24
(0 <= t < 24) for eta-type prefactors.  The heavy kernels are the
binomial-inverse recurrence passes, which run as C-level cumulative
sums over residue lanes.
"""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import accumulate
from math import comb, gcd

from .ntheory import NotInvertible, mod_inverse


class RingMismatch(ValueError):
    pass


class ExponentMismatch(ValueError):
    pass


class NonUnitConstantTerm(ValueError):
    pass


class FractionalExponent(ValueError):
    pass


class NonIntegralNormalization(ValueError):
    pass


class Ring:
    """Coefficient ring: modulus 0 means exact integers, m >= 2 means Z/m."""

    __slots__ = ("modulus",)

    def __init__(self, modulus: int = 0):
        if modulus < 0 or modulus == 1:
            raise ValueError("modulus must be 0 (exact) or >= 2")
        self.modulus = modulus

    def normalize(self, x: int) -> int:
        return x % self.modulus if self.modulus else x

    def is_unit(self, x: int) -> bool:
        if self.modulus:
            return gcd(x, self.modulus) == 1
        return x in (1, -1)

    def inverse(self, x: int) -> int:
        if self.modulus:
            return mod_inverse(x, self.modulus)
        if x in (1, -1):
            return x
        raise NotInvertible(f"{x} is not a unit in the exact integer ring")

    def __eq__(self, other):
        return isinstance(other, Ring) and self.modulus == other.modulus

    def __hash__(self):
        return hash(("Ring", self.modulus))

    def __repr__(self):
        return "Ring(exact)" if not self.modulus else f"Ring(mod {self.modulus})"


EXACT = Ring(0)


def _lane_map(step: int, worker, threads: int):
    # Residue lanes are independent; results are written back after all
    # lanes are computed, so the outcome does not depend on thread count.
    if threads > 1 and step > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(worker, range(step)))
    return [worker(r) for r in range(step)]


def binomial_inverse_inplace(coeffs: list, step: int, sign: int,
                             exponent: int, modulus: int, threads: int = 1):
    """Multiply the coefficient list by (1 - sign*q^step)^(-exponent) in place.

    Each exponent unit is one O(len) recurrence pass c[n] += sign*c[n-step],
    realised as a cumulative sum along every residue lane mod step (with an
    alternating twist when sign = -1).  Pairs of sign=+1 passes are fused
    into a single double cumulative sum.
    """
    if step < 1 or exponent < 1 or sign not in (1, -1):
        raise ValueError("need step >= 1, exponent >= 1, sign = +-1")
    L = len(coeffs)
    if step >= L:
        return
    remaining = exponent
    while remaining > 0:
        double = remaining >= 2 and sign == 1

        def worker(r, double=double):
            lane = coeffs[r::step] if step > 1 else coeffs[:]
            if sign == -1:
                lane[1::2] = [-v for v in lane[1::2]]
            acc = accumulate(accumulate(lane)) if double else accumulate(lane)
            lane = list(acc)
            if sign == -1:
                lane[1::2] = [-v for v in lane[1::2]]
            if modulus:
                lane = [v % modulus for v in lane]
            return lane

        lanes = _lane_map(step, worker, threads)
        if step > 1:
            for r, lane in enumerate(lanes):
                coeffs[r::step] = lane
        else:
            coeffs[:] = lanes[0]
        remaining -= 2 if double else 1


def _convolve(a: list, b: list, out_len: int, modulus: int, threads: int = 1) -> list:
    la, lb = len(a), len(b)

    def block(n_range):
        out = []
        for n in n_range:
            lo = 0 if n < lb else n - lb + 1
            hi = min(n, la - 1)
            s = 0
            for i in range(lo, hi + 1):
                s += a[i] * b[n - i]
            out.append(s % modulus if modulus else s)
        return out

    if threads > 1 and out_len >= 256:
        chunk = (out_len + threads - 1) // threads
        ranges = [range(i, min(i + chunk, out_len)) for i in range(0, out_len, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(block, ranges))
        return [v for part in parts for v in part]
    return block(range(out_len))


class Series:
    """Immutable truncated q-expansion over a Ring.

    prec P means coefficients of q^0 .. q^(P-1) are known.  frac24 is the
    numerator t of the fractional exponent offset t/24.
    """

    __slots__ = ("ring", "coeffs", "frac24")

    def __init__(self, ring: Ring, coeffs, prec: int = None, frac24: int = 0):
        if not 0 <= frac24 < 24:
            raise ValueError("frac24 must lie in [0, 24)")
        coeffs = list(coeffs)
        if prec is not None:
            if prec < 1:
                raise ValueError("prec must be positive")
            if len(coeffs) < prec:
                coeffs.extend([0] * (prec - len(coeffs)))
            else:
                del coeffs[prec:]
        elif not coeffs:
            raise ValueError("empty coefficient list")
        m = ring.modulus
        if m:
            coeffs = [c % m for c in coeffs]
        self.ring = ring
        self.coeffs = coeffs
        self.frac24 = frac24

    @property
    def prec(self) -> int:
        return len(self.coeffs)

    @property
    def frac_exp(self) -> Fraction:
        return Fraction(self.frac24, 24)

    @classmethod
    def zero(cls, ring: Ring, prec: int) -> "Series":
        return cls(ring, [], prec=prec)

    @classmethod
    def one(cls, ring: Ring, prec: int) -> "Series":
        return cls(ring, [1], prec=prec)

    @classmethod
    def constant(cls, ring: Ring, value: int, prec: int) -> "Series":
        return cls(ring, [value], prec=prec)

    @classmethod
    def monomial(cls, ring: Ring, exponent: int, prec: int, coeff: int = 1) -> "Series":
        c = [0] * prec
        if exponent < prec:
            c[exponent] = coeff
        return cls(ring, c)

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __eq__(self, other):
        return (
            isinstance(other, Series)
            and self.ring == other.ring
            and self.frac24 == other.frac24
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.prec > 6 else ""
        off = f", frac=q^{self.frac24}/24" if self.frac24 else ""
        return f"Series([{head}{tail}], prec={self.prec}, {self.ring}{off})"

    def _join(self, other: "Series"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _join_exp(self, other: "Series"):
        if self.frac24 != other.frac24:
            raise ExponentMismatch(
                f"fractional offsets differ: {self.frac24}/24 vs {other.frac24}/24"
            )

    def add(self, other: "Series") -> "Series":
        self._join(other)
        self._join_exp(other)
        P = min(self.prec, other.prec)
        m = self.ring.modulus
        if m:
            c = [(x + y) % m for x, y in zip(self.coeffs, other.coeffs)]
        else:
            c = [x + y for x, y in zip(self.coeffs, other.coeffs)]
        return Series(self.ring, c[:P], frac24=self.frac24)

    def sub(self, other: "Series") -> "Series":
        return self.add(other.neg())

    def neg(self) -> "Series":
        m = self.ring.modulus
        c = [(-x) % m for x in self.coeffs] if m else [-x for x in self.coeffs]
        return Series(self.ring, c, frac24=self.frac24)

    def scale(self, factor: int) -> "Series":
        m = self.ring.modulus
        if m:
            factor %= m
            c = [x * factor % m for x in self.coeffs]
        else:
            c = [x * factor for x in self.coeffs]
        return Series(self.ring, c, frac24=self.frac24)

    def mul(self, other: "Series", threads: int = 1) -> "Series":
        """Truncated Cauchy product; fractional offsets add with carry into
        an integer q-shift, so the result precision grows by the carry."""
        self._join(other)
        P = min(self.prec, other.prec)
        total = self.frac24 + other.frac24
        carry, frac = divmod(total, 24)
        conv = _convolve(self.coeffs, other.coeffs, P, self.ring.modulus, threads)
        return Series(self.ring, [0] * carry + conv, frac24=frac)

    def pow(self, n: int, threads: int = 1) -> "Series":
        if n < 0:
            raise ValueError("negative powers go through invert()")
        result = Series.one(self.ring, self.prec)
        base = self
        while n:
            if n & 1:
                result = result.mul(base, threads)
            base = base.mul(base, threads) if n > 1 else base
            n >>= 1
        return result

    def invert(self) -> "Series":
        """Multiplicative inverse to the same precision; the constant term
        must be a unit of the ring."""
        if self.frac24:
            raise FractionalExponent("cannot invert a series with fractional offset")
        a = self.coeffs
        try:
            c0inv = self.ring.inverse(a[0])
        except NotInvertible as exc:
            raise NonUnitConstantTerm(str(exc)) from exc
        P = self.prec
        m = self.ring.modulus
        b = [0] * P
        b[0] = c0inv % m if m else c0inv
        for n in range(1, P):
            s = 0
            for k in range(1, min(n, len(a) - 1) + 1):
                s += a[k] * b[n - k]
            b[n] = (-s * c0inv) % m if m else -s * c0inv
        return Series(self.ring, b)

    def mul_binomial_inverse(self, step: int, sign: int, exponent: int,
                             threads: int = 1) -> "Series":
        """self * (1 - sign*q^step)^(-exponent) via the O(P) recurrence."""
        c = list(self.coeffs)
        binomial_inverse_inplace(c, step, sign, exponent, self.ring.modulus, threads)
        return Series(self.ring, c, frac24=self.frac24)

    def q_derivative(self) -> "Series":
        """Apply q d/dq: coefficient n becomes n*a(n)."""
        if self.frac24:
            raise FractionalExponent("q d/dq needs an integral exponent lattice")
        m = self.ring.modulus
        if m:
            c = [n * x % m for n, x in enumerate(self.coeffs)]
        else:
            c = [n * x for n, x in enumerate(self.coeffs)]
        return Series(self.ring, c)

    def log_derivative(self) -> "Series":
        """(q d/dq self) / self for unit-headed series."""
        return self.q_derivative().mul(self.invert())

    def reduce_mod(self, modulus: int) -> "Series":
        """Coefficientwise reduction of an exact series into Z/m."""
        if self.ring.modulus:
            raise RingMismatch("reduce_mod expects an exact-ring series")
        return Series(Ring(modulus), self.coeffs, frac24=self.frac24)

    def shifted(self, s: int) -> "Series":
        """Multiply by q^s.  Positive s prepends zeros (precision grows);
        negative s drops leading coefficients, which must be zero."""
        if s >= 0:
            return Series(self.ring, [0] * s + self.coeffs, frac24=self.frac24)
        if any(self.coeffs[: -s]):
            raise ValueError("negative shift would drop nonzero coefficients")
        if self.prec + s < 1:
            raise ValueError("negative shift exhausts the precision")
        return Series(self.ring, self.coeffs[-s:], frac24=self.frac24)

    def truncate(self, prec: int) -> "Series":
        if prec > self.prec:
            raise ValueError("cannot truncate to higher precision")
        return Series(self.ring, self.coeffs[:prec], frac24=self.frac24)

    __add__ = add
    __sub__ = sub
    __neg__ = neg
    __mul__ = mul


def pentagonal_coefficients(scale: int, length: int) -> list:
    """Coefficients of prod_{n>=1} (1 - q^(scale*n)) to the given length,
    by Euler's pentagonal number theorem (sparse: O(sqrt(length/scale))
    nonzero entries)."""
    if scale < 1 or length < 1:
        raise ValueError("scale and length must be positive")
    c = [0] * length
    c[0] = 1
    k = 1
    while True:
        g1 = scale * k * (3 * k - 1) // 2
        g2 = scale * k * (3 * k + 1) // 2
        if g1 >= length and g2 >= length:
            break
        s = -1 if k % 2 else 1
        if g1 < length:
            c[g1] = s
        if g2 < length:
            c[g2] = s
        k += 1
    return c


def eta_product(scale: int, prec: int, ring: Ring) -> Series:
    """q^(scale/24) * prod (1 - q^(scale*n)) truncated to prec.

    The fractional part of scale/24 becomes the series offset; the integer
    part is applied as a shift of the coefficient array.
    """
    shift, frac = divmod(scale, 24)
    pent = pentagonal_coefficients(scale, max(prec - shift, 1))
    coeffs = [0] * shift + pent
    return Series(ring, coeffs, prec=prec, frac24=frac)


_BERNOULLI_CACHE = [Fraction(1), Fraction(-1, 2)]


def bernoulli(k: int) -> Fraction:
    """Bernoulli number B_k by the exact recurrence
    sum_j C(k+1, j) B_j = 0 (convention B_1 = -1/2)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    while len(_BERNOULLI_CACHE) <= k:
        n = len(_BERNOULLI_CACHE)
        if n % 2 == 1:
            _BERNOULLI_CACHE.append(Fraction(0))
            continue
        s = sum(comb(n + 1, j) * _BERNOULLI_CACHE[j] for j in range(n))
        _BERNOULLI_CACHE.append(-s / (n + 1))
    return _BERNOULLI_CACHE[k]


def eisenstein(k: int, prec: int, ring: Ring) -> Series:
    """Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.

    In the exact ring the rational factor -2k/B_k must be an integer;
    in a modular ring its denominator must be invertible.
    """
    if k < 2 or k % 2:
        raise ValueError("weight must be an even integer >= 2")
    factor = Fraction(-2 * k) / bernoulli(k)
    m = ring.modulus
    if m:
        num = factor.numerator % m
        f = num * mod_inverse(factor.denominator, m) % m
    else:
        if factor.denominator != 1:
            raise NonIntegralNormalization(
                f"Eisenstein factor -2k/B_k = {factor} is not an integer"
            )
        f = factor.numerator
    coeffs = [0] * prec
    coeffs[0] = 1
    # Sieve the divisor powers: d contributes d^(k-1) to every multiple.
    powers = [0] * prec
    for d in range(1, prec):
        pd = pow(d, k - 1, m) if m else d ** (k - 1)
        for n in range(d, prec, d):
            powers[n] += pd
    for n in range(1, prec):
        coeffs[n] = powers[n] * f % m if m else powers[n] * f
    return Series(ring, coeffs)


__all__ = [
    "EXACT",
    "ExponentMismatch",
    "FractionalExponent",
    "NonIntegralNormalization",
    "NonUnitConstantTerm",
    "Ring",
    "RingMismatch",
    "Series",
    "bernoulli",
    "binomial_inverse_inplace",
    "eisenstein",
    "eta_product",
    "pentagonal_coefficients",
]
