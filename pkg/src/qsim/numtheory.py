"""Classical number theory for order finding and factoring."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError

# N**2 must fit a signed 64-bit integer.
MAX_MODULUS = 1 << 31
DEFAULT_MAX_TERMS = 64


def _check_modulus(N: int) -> None:
    if N < 2:
        raise DomainError(f"modulus must be at least 2, got {N}")
    if N >= MAX_MODULUS:
        raise DomainError(f"modulus {N} exceeds the supported cap {MAX_MODULUS}")


def gcd(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise DomainError("gcd arguments must be nonnegative")
    if a == 0 and b == 0:
        raise DomainError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a


def modpow(x: int, e: int, N: int) -> int:
    """``x**e mod N`` by square-and-multiply."""
    _check_modulus(N)
    if e < 0:
        raise DomainError("exponent must be nonnegative")
    result = 1
    base = x % N
    while e:
        if e & 1:
            result = result * base % N
        base = base * base % N
        e >>= 1
    return result % N


def check_unit(x: int, N: int) -> None:
    _check_modulus(N)
    if not 1 < x < N:
        raise DomainError(f"need 1 < x < N, got x={x}, N={N}")
    if gcd(x, N) != 1:
        raise DomainError(f"gcd({x}, {N}) != 1")


def multiplicative_order(x: int, N: int) -> int:
    """Least ``r > 0`` with ``x**r = 1 mod N``, by direct iteration."""
    check_unit(x, N)
    r, cur = 1, x % N
    while cur != 1:
        cur = cur * x % N
        r += 1
    return r


@dataclass(frozen=True)
class ContinuedFraction:
    coefficients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]

    def __str__(self) -> str:
        head, *tail = self.coefficients
        return f"[{head}; {', '.join(map(str, tail))}]" if tail else f"[{head}]"


def continued_fraction(num: int, den: int, max_terms: int = DEFAULT_MAX_TERMS) -> ContinuedFraction:
    """Expansion of ``num/den`` with convergents ``b_k/c_k``."""
    if den <= 0:
        raise DomainError("denominator must be positive")
    if num < 0:
        raise DomainError("numerator must be nonnegative")
    if max_terms < 1:
        raise DomainError("max_terms must be at least 1")
    coeffs: list[int] = []
    p, q = num, den
    while len(coeffs) < max_terms:
        a, r = divmod(p, q)
        coeffs.append(a)
        if r == 0:
            break
        p, q = q, r
    # b_{-1}=1, b_{-2}=0; c_{-1}=0, c_{-2}=1
    b_prev, b = 0, 1
    c_prev, c = 1, 0
    convs = []
    for a in coeffs:
        b_prev, b = b, a * b + b_prev
        c_prev, c = c, a * c + c_prev
        convs.append((b, c))
    return ContinuedFraction(tuple(coeffs), tuple(convs))


def extract_order(omega: int, t_bits: int, x: int, N: int) -> int | None:
    """Order of ``x`` read off the convergents of ``omega / 2**t_bits``.

    Returns the first convergent denominator ``c`` with ``0 < c < N`` and
    ``x**c = 1 mod N``, or ``None`` when no convergent qualifies.
    """
    if not 0 <= omega < 1 << t_bits:
        raise DomainError(f"omega={omega} does not fit in {t_bits} bits")
    if omega == 0:
        return None
    for _, c in continued_fraction(omega, 1 << t_bits).convergents:
        if 0 < c < N and modpow(x, c, N) == 1:
            return c
    return None


def order_candidate(omega: int, t_bits: int, N: int) -> int | None:
    """Best denominator below ``N`` approximating ``omega / 2**t_bits``.

    This is the ``c`` of the closest convergent; when it is only a divisor of
    the true order it is still useful for a follow-up run with ``x**c``.
    """
    if omega == 0:
        return None
    best = None
    for _, c in continued_fraction(omega, 1 << t_bits).convergents:
        if 0 < c < N:
            best = c
    return best


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def reduce_order(x: int, R: int, N: int) -> int:
    """Smallest ``r`` dividing ``R`` with ``x**r = 1``; ``R`` must already work."""
    for p in prime_factors(R):
        while R % p == 0 and modpow(x, R // p, N) == 1:
            R //= p
    return R


def integer_root(n: int, k: int) -> int:
    """Floor of the real ``k``-th root of ``n``."""
    lo, hi = 0, 1
    while hi**k <= n:
        hi <<= 1
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid
    return lo


def prime_power_base(N: int) -> int | None:
    """The prime ``p`` when ``N = p**k`` with ``k >= 2``, else ``None``."""
    for k in range(N.bit_length(), 1, -1):
        b = integer_root(N, k)
        for cand in (b, b + 1):
            if cand > 1 and cand**k == N:
                # Largest exponent first, so cand is not itself a perfect power.
                return cand if is_prime(cand) else None
    return None


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True
